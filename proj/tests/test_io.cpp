#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "savar/io.hpp"
#include "savar/riskbuild.hpp"

using namespace savar;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("io_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kBasicInstance = R"({
  "probabilities": [0.4, 0.6],
  "payoff": [[12, 4], [-20, -6]],
  "alpha": [0.01, 0.02]
})";

const char* kMarketInstance = R"({
  "probabilities": [0.4, 0.6],
  "payoff": [[12, 4], [-20, -6]],
  "alpha": [0.01, 0.02],
  "market": {
    "k0": {"quotes": {"bid": [0.72], "ask": [1.0]}},
    "kT": [
      {"quotes": {"bid": [0.75], "ask": [1.11]}},
      {"quotes": {"bid": [0.7], "ask": [0.9]}}
    ]
  }
})";

}  // namespace

TEST_CASE("round trip of a plain instance") {
  std::string path = temp_path("basic.json");
  write_file(path, kBasicInstance);
  Instance inst = read_instance(path);
  CHECK(inst.model.n_scenarios() == 2);
  CHECK(inst.payoff.dim() == 2);
  CHECK(inst.payoff.values()(1, 0) == doctest::Approx(-20.0));
  CHECK(inst.alpha(1) == doctest::Approx(0.02));
  CHECK(inst.eligible.m() == 2);  // defaults to M = R^d
  CHECK_FALSE(inst.market.has_value());
  std::remove(path.c_str());
}

TEST_CASE("market section parses quotes into cones") {
  std::string path = temp_path("market.json");
  write_file(path, kMarketInstance);
  Instance inst = read_instance(path);
  REQUIRE(inst.market.has_value());
  CHECK(inst.market->k0.dim() == 2);
  CHECK(inst.market->k0.n_generators() == 2);
  REQUIRE(inst.market->kT.size() == 2);
  CHECK(inst.market->kT[1].n_generators() == 2);
  std::remove(path.c_str());
}

TEST_CASE("invalid instances raise named invariants") {
  std::string path = temp_path("bad.json");
  write_file(path, R"({"probabilities": [0.4, 0.5],
                       "payoff": [[1, 2], [3, 4]], "alpha": [0.5, 0.5]})");
  CHECK_THROWS_AS(read_instance(path), validation_error);
  write_file(path, R"({"probabilities": [0.4, 0.6]})");
  CHECK_THROWS_AS(read_instance(path), validation_error);
  write_file(path, "{ not json");
  CHECK_THROWS_AS(read_instance(path), validation_error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_instance("io_test_does_not_exist.json"),
                  validation_error);
}

TEST_CASE("number formatting is fixed and canonical") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");  // no negative zero in output
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-4.0) == "-4");
  CHECK(format_number(80.0 / 7.0) == "11.4285714286");
  CHECK(format_number(1e-30) == "1e-30");
}

TEST_CASE("risk set support values") {
  RiskSet s;
  s.status = RiskSet::Status::bounded;
  s.vertices = {Eigen::Vector2d(-4.0, 20.0), Eigen::Vector2d(1.0, 1.0)};
  s.recession = GeneratedCone(2, Eigen::MatrixXd::Identity(2, 2));
  Eigen::Vector2d w(1.0, 0.0);
  CHECK(risk_set_support(s, w) == doctest::Approx(-4.0));
  w << 1.0, 1.0;
  CHECK(risk_set_support(s, w) == doctest::Approx(2.0));
  w << -1.0, 0.0;  // unbounded against a recession generator
  CHECK(risk_set_support(s, w) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("writers are deterministic byte for byte") {
  std::string path = temp_path("inst.json");
  write_file(path, kMarketInstance);
  Instance inst = read_instance(path);

  BuiltVlp built = build_market_vlp(inst.payoff, inst.model, inst.alpha,
                                    inst.eligible, *inst.market);
  auto [set, report] = avar_market(inst.payoff, inst.model, inst.alpha,
                                   inst.eligible, *inst.market);
  std::string out1 = temp_path("result1.json");
  std::string out2 = temp_path("result2.json");
  write_market_result(out1, set, built.size, report);
  write_market_result(out2, set, built.size, report);
  std::string text = read_file(out1);
  CHECK(text == read_file(out2));
  CHECK(text.find("\"status\": \"bounded\"") != std::string::npos);
  CHECK(text.find("11.4285714286") != std::string::npos);

  std::string plot = temp_path("plot.dat");
  write_plot_data(plot, set);
  std::string ptext = read_file(plot);
  CHECK(ptext.find("# vertices") != std::string::npos);
  CHECK(ptext.find("# rays") != std::string::npos);

  std::remove(path.c_str());
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  std::remove(plot.c_str());
}

TEST_CASE("regulator writer layout") {
  std::string path = temp_path("reg.json");
  write_file(path, kBasicInstance);
  Instance inst = read_instance(path);
  BuiltVlp built =
      build_regulator_vlp(inst.payoff, inst.model, inst.alpha, inst.eligible);
  RiskSet set =
      avar_regulator(inst.payoff, inst.model, inst.alpha, inst.eligible);
  std::string out = temp_path("reg_out.json");
  write_regulator_result(out, set, built.size);
  std::string text = read_file(out);
  CHECK(text.find("\"vertices\"") != std::string::npos);
  CHECK(text.find("-4") != std::string::npos);
  CHECK(text.find("\"problem_size\"") != std::string::npos);
  CHECK(text.find("\"aggregate_constraints\": 8") != std::string::npos);
  CHECK(text.find("\"strategies\"") == std::string::npos);
  std::remove(path.c_str());
  std::remove(out.c_str());
}
