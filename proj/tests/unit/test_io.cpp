#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "ricperp/error.hpp"
#include "ricperp/io.hpp"

using namespace ricperp;

TEST_CASE("float formatting") {
  CHECK(io::format_double(-0.0) == "0");
  CHECK(io::format_double(2.0) == "2");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK_THROWS_AS(io::format_double(std::nan("")), Error);
}

TEST_CASE("tensor documents round-trip byte for byte") {
  std::mt19937_64 rng(97);
  const KahlerTensor R = testing::random_tensor(rng, 3);
  const HermitianForm g = testing::random_metric(rng, 3);
  const std::string a = io::tensor_to_json(R, g);
  const CurvaturePoint back = io::tensor_from_json(a);
  CHECK(io::tensor_to_json(back.R, back.g) == a);
  for (std::size_t t = 0; t < R.data().size(); ++t) CHECK(back.R.data()[t] == R.data()[t]);

  const CurvaturePoint fs = fubini_study(2);
  const std::string b = io::tensor_to_json(fs.R, fs.g);
  CHECK(b.find("metric") == std::string::npos);
  CHECK(io::tensor_from_json(b).g.is_identity());
}

TEST_CASE("malformed tensor documents") {
  const auto code_of = [](const std::string& text) {
    try {
      io::tensor_from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code_of("{") == ErrorCode::Parse);
  CHECK(code_of("{\"n\": 1}") == ErrorCode::Parse);
  CHECK(code_of("{\"n\": 1, \"R\": [[[[1]]]]}") == ErrorCode::Parse);
  CHECK(code_of("{\"n\": 2, \"R\": [[[[[1,0]]]]]}") == ErrorCode::Parse);
  CHECK(code_of("{\"n\": 1, \"R\": [[[[[1,1]]]]]}") == ErrorCode::SymmetryViolation);
  CHECK(code_of("{\"n\": 1, \"R\": [[[[[1,0]]]]], \"metric\": [[[0,0]]]}") == ErrorCode::SingularMetric);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "ricperp_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "fs.json").string();
  io::save_tensor(path, fubini_study(2));
  CHECK(io::load_tensor(path).R.dim() == 2);
  CHECK_THROWS_AS(io::load_tensor((dir / "missing.json").string()), Error);
  CHECK_THROWS_AS(io::write_file((dir / "no/such/dir/x.json").string(), "x"), Error);
  CHECK(!std::filesystem::exists(dir / "no"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("bundle input documents") {
  const io::Json doc = io::Json::parse(R"({"n": 3, "lambda": 50, "degrees": [0, 0, -1], "fiber_point": [[0,0],[0,0],[1,0]]})");
  const projbundle::ProjBundleInput in = io::bundle_input_from_json(doc);
  CHECK(in.r == 3);
  CHECK(in.xi(0) == -1.0);
  const io::Json bad = io::Json::parse(R"({"n": 2, "lambda": 5})");
  CHECK_THROWS_AS(io::bundle_input_from_json(bad), Error);
  const io::Json mixed = io::Json::parse(
      R"({"n": 1, "r": 2, "lambda": 5, "Rh": [[[[[1,0]]],[[[0,0]]]],[[[[0,0]]],[[[0,0]]]]], "d3": [[[[0.5,0]]]]})");
  const projbundle::ProjBundleInput m = io::bundle_input_from_json(mixed);
  CHECK(m.d3_at(0, 0, 0) == Complex(0.5));
}

TEST_CASE("report serialization") {
  PositivityReport rep{Quantity::RicPerpMin, -0.0, CVector::Unit(2, 0), Verdict::NonnegativeBoundary, 0.0, {}};
  rep.method.seed = 7;
  rep.method.restarts = 3;
  const io::Json j = io::report_json(rep);
  CHECK(j["quantity"] == "ric_perp_min");
  CHECK(j["verdict"] == "nonnegative_boundary");
  CHECK(j["method"]["seed"] == 7);
  CHECK(j.dump().find("-0") == std::string::npos);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"quantity", "value", "witness", "verdict", "margin", "method"});
}
