#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jspec/cli.hpp"
#include "jspec/tuple_io.hpp"

using namespace jspec;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "jspec");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("jspec_cli_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_diag_tuple(const std::string& path) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(2, 2);
  a.diagonal() << 1, 2;
  b.diagonal() << 3, 4;
  write_tuple_file(path, {MatrixTuple({a, b}), json::object()});
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"frobnicate"}).code == cli::kUsage);
  CHECK(run({"gen", "--n", "3"}).code == cli::kUsage);
  CHECK(run({"verify", "--input", "a", "--perturbed", "b", "--bound", "hw"}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kSuccess);
}

TEST_CASE("gen") {
  TempDir d;
  CHECK(run({"gen", "--n", "0", "--m", "1", "--out", d / "z.json"}).code == cli::kUsage);

  REQUIRE(run({"gen", "--n", "3", "--m", "2", "--kind", "extremal", "--out", d / "a.json", "--out-b",
               d / "b.json"})
              .code == 0);
  const TupleFile a = read_tuple_file(d / "a.json");
  const TupleFile b = read_tuple_file(d / "b.json");
  CHECK(a.tuple.m() == 2);
  CHECK(a.tuple[1](2, 0) == Complex(2, 0));
  CHECK(b.tuple[1](2, 0) == Complex(0, 0));
  CHECK(b.tuple[1](0, 1) == Complex(2, 0));

  for (int i = 0; i < 2; ++i) {
    REQUIRE(run({"gen", "--n", "4", "--m", "2", "--seed", "7", "--kind", "normal", "--out",
                 d / ("n" + std::to_string(i) + ".json")})
                .code == 0);
  }
  CHECK(slurp(d / "n0.json") == slurp(d / "n1.json"));
  CHECK(read_tuple_file(d / "n0.json").metadata["seed"] == 7);

  CHECK(run({"gen", "--n", "3", "--m", "1", "--kind", "diagonalizable", "--perturb", "0.1", "--class",
             "normal", "--out", d / "x.json", "--out-b", d / "y.json"})
            .code == cli::kUsage);
  CHECK(run({"gen", "--n", "3", "--m", "1", "--out", d / "missing_dir/x.json"}).code ==
        cli::kIoFailure);
}

TEST_CASE("spectrum") {
  TempDir d;
  write_diag_tuple(d / "d.json");
  Result r = run({"spectrum", "--input", d / "d.json", "--json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["eigenvalues"][0][0][0] == 1.0);
  CHECK(j["eigenvalues"][1][1][0] == 4.0);
  CHECK(j["residual"].get<double>() <= 1e-12);

  run({"gen", "--n", "3", "--m", "2", "--kind", "extremal", "--out", d / "a.json"});
  r = run({"spectrum", "--input", d / "a.json", "--json"});
  REQUIRE(r.code == 0);
  const json e = json::parse(r.out)["eigenvalues"];
  for (const auto& row : e) {
    const Complex z1(row[0][0], row[0][1]), z2(row[1][0], row[1][1]);
    CHECK(std::abs(std::pow(z1, 3) - 1.0) < 1e-12);
    CHECK(std::abs(z2 - 2.0 * z1) < 1e-12);
  }

  ComplexMatrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  write_tuple_file(d / "nc.json", {MatrixTuple({x, z}), json::object()});
  r = run({"spectrum", "--input", d / "nc.json"});
  CHECK(r.code == cli::kHypothesisFailure);
  CHECK(r.err.find("commutation check failed") != std::string::npos);

  std::ofstream(d / "bad.json") << "{not json";
  CHECK(run({"spectrum", "--input", d / "bad.json"}).code == cli::kIoFailure);
  CHECK(run({"spectrum", "--input", d / "nothing.json"}).code == cli::kIoFailure);
}

TEST_CASE("verify") {
  TempDir d;
  run({"gen", "--n", "4", "--m", "2", "--kind", "extremal", "--out", d / "a.json", "--out-b", d / "b.json"});
  Result r = run({"verify", "--input", d / "a.json", "--perturbed", d / "b.json", "--bound", "remark",
                  "--out", d / "report.json"});
  CHECK(r.code == 0);
  const json rep = json::parse(slurp(d / "report.json"));
  CHECK(rep["lhs"].get<double>() == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(rep["rhs"].get<double>() == doctest::Approx(8.0).epsilon(1e-9));

  r = run({"verify", "--input", d / "a.json", "--perturbed", d / "a.json", "--bound", "normal", "--json"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["lhs"].get<double>() < 1e-20);

  r = run({"verify", "--input", d / "a.json", "--perturbed", d / "b.json", "--bound", "normal"});
  CHECK(r.code == cli::kHypothesisFailure);
  CHECK(r.err.find("normality check failed") != std::string::npos);

  // a tolerance of -1 makes every instance with positive lhs a violation
  run({"gen", "--n", "3", "--m", "1", "--seed", "2", "--perturb", "0.1", "--out", d / "p.json", "--out-b",
       d / "q.json"});
  r = run({"verify", "--input", d / "p.json", "--perturbed", d / "q.json", "--tol", "-1", "--out",
           d / "v.json"});
  CHECK(r.code == cli::kBoundViolated);
  CHECK(json::parse(slurp(d / "v.json"))["holds"] == false);
}

TEST_CASE("clifford") {
  TempDir d;
  write_tuple_file(d / "i.json", {MatrixTuple({ComplexMatrix::Identity(2, 2)}), json::object()});
  Result r = run({"clifford", "--input", d / "i.json", "--json"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["structured"].get<double>() == doctest::Approx(2.0));
  CHECK(j["oracle"].get<double>() == doctest::Approx(2.0));
  CHECK(j["difference"].get<double>() <= 1e-12);
  CHECK(j["trace"][0] == 0.0);

  write_tuple_file(d / "z.json", {MatrixTuple({ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(2, 2)}), json::object()});
  r = run({"clifford", "--input", d / "z.json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("trace Cliff(A): 0 + 0i") != std::string::npos);

  r = run({"clifford", "--input", d / "i.json", "--materialize-limit", "2", "--json"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["oracle"].is_null());
  r = run({"clifford", "--input", d / "i.json", "--materialize-limit", "2", "--require-oracle"});
  CHECK(r.code == cli::kCapacityExceeded);
}

TEST_CASE("experiment") {
  TempDir d;
  Result r = run({"experiment", "--trials", "0", "--csv", d / "e0.csv"});
  CHECK(r.code == 0);
  CHECK(slurp(d / "e0.csv") == "trial,seed,lhs,rhs,slack,ratio,holds\n");

  r = run({"experiment", "--trials", "100", "--n", "4", "--m", "2", "--seed", "3"});
  CHECK(r.code == 0);
  std::istringstream is(r.out);
  std::string line;
  int rows = 0;
  std::getline(is, line);
  CHECK(line == "trial,seed,lhs,rhs,slack,ratio,holds");
  while (std::getline(is, line)) {
    if (line.rfind("#", 0) == 0) continue;
    ++rows;
    CHECK(line.substr(line.size() - 4) == "true");
  }
  CHECK(rows == 100);

  // thread count does not change the output
  const Result one = run({"experiment", "--trials", "20", "--bound", "diag", "--seed", "5", "--threads", "1"});
  const Result four = run({"experiment", "--trials", "20", "--bound", "diag", "--seed", "5", "--threads", "4"});
  CHECK(one.code == 0);
  CHECK(one.out == four.out);
  CHECK(run({"experiment", "--trials", "5", "--bound", "remark"}).code == 0);
}

TEST_CASE("birkhoff") {
  TempDir d;
  run({"gen", "--n", "4", "--m", "2", "--seed", "1", "--out", d / "a.json"});
  Result r = run({"birkhoff", "--input", d / "a.json", "--perturbed", d / "a.json", "--json"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["terms"].size() == 1);
  CHECK(j["terms"][0]["permutation"] == json({1, 2, 3, 4}));

  // diag(1, 2) against the same spectrum in a basis rotated by 45 degrees
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a.diagonal() << 1, 2;
  ComplexMatrix u(2, 2);
  const double h = std::sqrt(0.5);
  u << h, -h, h, h;
  write_tuple_file(d / "p.json", {MatrixTuple({a}), json::object()});
  write_tuple_file(d / "q.json", {MatrixTuple({u * a * u.adjoint()}), json::object()});
  r = run({"birkhoff", "--input", d / "p.json", "--perturbed", d / "q.json", "--json"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  REQUIRE(j["terms"].size() == 2);
  CHECK(j["terms"][0]["weight"].get<double>() == doctest::Approx(0.5));
  CHECK(j["terms"][1]["weight"].get<double>() == doctest::Approx(0.5));
  CHECK(j["reconstruction_error"].get<double>() <= 1e-8);

  run({"gen", "--n", "3", "--m", "1", "--kind", "extremal", "--out", d / "x.json", "--out-b", d / "y.json"});
  CHECK(run({"birkhoff", "--input", d / "x.json", "--perturbed", d / "y.json"}).code ==
        cli::kHypothesisFailure);
}
