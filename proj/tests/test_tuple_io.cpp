#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "jspec/generators.hpp"
#include "jspec/random.hpp"
#include "jspec/tuple_io.hpp"

using namespace jspec;
using nlohmann::json;

TEST_CASE("serialize and parse round trip exactly") {
  Rng rng(60, Stream::test_data);
  for (int t = 0; t < 10; ++t) {
    std::vector<ComplexMatrix> mats;
    for (int k = 0; k <= t % 3; ++k) mats.push_back(rng.gaussian_matrix(1 + t % 4, 1 + t % 4) * std::pow(10.0, t - 5));
    const TupleFile f{MatrixTuple(mats), json{{"seed", t}}};
    const std::string text = serialize_tuple(f);
    const TupleFile g = parse_tuple(text);
    for (std::size_t k = 0; k < mats.size(); ++k) CHECK(g.tuple[k] == mats[k]);
    CHECK(g.metadata["seed"] == t);
    CHECK(serialize_tuple(g) == text);
  }
}

TEST_CASE("format_double uses 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
}

TEST_CASE("parse errors") {
  const auto parse_code = [](const std::string& s) {
    try {
      parse_tuple(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(parse_code("{") == ErrorCode::Parse);
  CHECK(parse_code("[]") == ErrorCode::Parse);
  CHECK(parse_code(R"({"schema_version":"jspec-2","n":1,"m":1,"matrices":[[[[1,0]]]]})") == ErrorCode::Parse);
  CHECK(parse_code(R"({"schema_version":"jspec-1","n":2,"m":1,"matrices":[[[[1,0]]]]})") == ErrorCode::Parse);
  CHECK(parse_code(R"({"schema_version":"jspec-1","n":1,"m":2,"matrices":[[[[1,0]]]]})") == ErrorCode::Parse);
  CHECK(parse_code(R"({"schema_version":"jspec-1","n":1,"m":1,"matrices":[[[["1",0]]]]})") == ErrorCode::Parse);
  CHECK(parse_code(R"({"schema_version":"jspec-1","n":1,"m":1,"matrices":[[[[1]]]]})") == ErrorCode::Parse);
  const TupleFile ok = parse_tuple(R"({"schema_version":"jspec-1","n":1,"m":1,"matrices":[[[[1,-2]]]]})");
  CHECK(ok.tuple[0](0, 0) == Complex(1, -2));
  CHECK(ok.metadata.is_object());
}

TEST_CASE("file io") {
  const auto dir = std::filesystem::temp_directory_path() / "jspec_tuple_io_test";
  std::filesystem::create_directories(dir);
  const TupleFile f{extremal_shift_example(3, 2).first, json::object()};
  write_tuple_file(dir / "a.json", f);
  const TupleFile g = read_tuple_file(dir / "a.json");
  CHECK(g.tuple[1] == f.tuple[1]);
  try {
    read_tuple_file(dir / "missing.json");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
  CHECK_THROWS_AS(write_tuple_file(dir / "no" / "such" / "dir.json", f), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("report json mirrors the report") {
  auto [a, b] = extremal_shift_example(3, 2);
  const BoundReport r = verify_bound(a, b, BoundKind::remark, 4);
  const json j = report_to_json(r);
  CHECK(j["bound_kind"] == "remark");
  CHECK(j["lhs"].get<double>() == r.lhs);
  CHECK(j["rhs"].get<double>() == r.rhs);
  CHECK(j["seed"] == 4);
  CHECK(j["birkhoff"].is_null());
  const auto perm = j["permutation"].get<std::vector<int>>();
  for (std::size_t i = 0; i < perm.size(); ++i) CHECK(perm[i] == r.permutation[i] + 1);
  // verdict recomputable from the stored fields
  const double lhs = j["lhs"], rhs = j["rhs"], tol = j["verification_tolerance"];
  CHECK(j["holds"].get<bool>() == (lhs <= rhs + tol * (1 + rhs)));
  CHECK(j["hypotheses"]["b"]["normal"] == false);
  CHECK(j["tolerances"]["commutation"] == 1e-8);
}
