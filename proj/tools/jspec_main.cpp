#include <iostream>
#include <string>
#include <vector>

#include "jspec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return jspec::cli::run(args, std::cout, std::cerr);
}
