#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "savar/market.hpp"
#include "savar/riskbuild.hpp"

using namespace savar;

namespace {

bool has_vertex(const RiskSet& s, const Eigen::VectorXd& v,
                double tol = 1e-6) {
  for (const Eigen::VectorXd& u : s.vertices)
    if ((u - v).lpNorm<Eigen::Infinity>() < tol) return true;
  return false;
}

struct TwoAssetExample {
  ScenarioModel model;
  Payoff payoff;
  AlphaVector alpha;
};

TwoAssetExample two_asset() {
  Eigen::VectorXd p(2);
  p << 0.4, 0.6;
  Eigen::MatrixXd x(2, 2);
  x << 12.0, 4.0, -20.0, -6.0;
  Eigen::VectorXd a(2);
  a << 0.01, 0.02;
  return {ScenarioModel(p), Payoff(x), AlphaVector(a)};
}

MarketInstance two_asset_market() {
  Eigen::VectorXd b0(1), a0(1), b1(1), a1(1), b2(1), a2(1);
  b0 << 0.72;
  a0 << 1.0;
  b1 << 0.75;
  a1 << 1.11;
  b2 << 0.7;
  a2 << 0.9;
  MarketInstance mi;
  mi.k0 = solvency_cone_cash_numeraire(BidAskQuote(b0, a0));
  mi.kT = {solvency_cone_cash_numeraire(BidAskQuote(b1, a1)),
           solvency_cone_cash_numeraire(BidAskQuote(b2, a2))};
  return mi;
}

struct ThreeAssetExample {
  ScenarioModel model;
  Payoff payoff;
  AlphaVector alpha;
};

ThreeAssetExample three_asset() {
  Eigen::VectorXd p(3);
  p << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
  Eigen::MatrixXd x(3, 3);
  x << 4.0, 6.0, -2.0, 3.0, -5.0, 3.0, 1.0, -3.0, -4.0;
  Eigen::VectorXd a = Eigen::VectorXd::Constant(3, 0.05);
  return {ScenarioModel(p), Payoff(x), AlphaVector(a)};
}

EligibleSpace spanned_M() {
  Eigen::MatrixXd bm(3, 2);
  bm.col(0) << 5.0, 0.0, 1.0;
  bm.col(1) << 0.0, 10.0, 1.0;
  Eigen::MatrixXd bperp(3, 1);
  bperp << -2.0, -1.0, 10.0;
  return EligibleSpace(bm, bperp);
}

}  // namespace

TEST_CASE("regulator risk set, two assets") {
  TwoAssetExample e = two_asset();
  RiskSet s = avar_regulator(e.payoff, e.model, e.alpha, EligibleSpace::full(2));
  REQUIRE(s.status == RiskSet::Status::bounded);
  REQUIRE(s.vertices.size() == 1);
  CHECK(has_vertex(s, Eigen::Vector2d(-4.0, 20.0)));
  CHECK(s.recession.n_generators() == 2);  // R^2_+
  // preimage attains the vertex: diag(alpha)^{-1} E[Z] - z
  REQUIRE(s.preimages.size() == 1);
  Eigen::Vector2d img;
  for (int i = 0; i < 2; ++i) {
    double ez = 0.0;
    for (int n = 0; n < 2; ++n)
      ez += e.model.p(n) * s.preimages[0].z_hat(n * 2 + i);
    img(i) = ez / e.alpha(i) - s.preimages[0].z(i);
  }
  CHECK((img - Eigen::Vector2d(s.vertices[0])).lpNorm<Eigen::Infinity>() <
        1e-6);
}

TEST_CASE("regulator risk set, three assets, full M") {
  ThreeAssetExample e = three_asset();
  RiskSet s = avar_regulator(e.payoff, e.model, e.alpha, EligibleSpace::full(3));
  REQUIRE(s.status == RiskSet::Status::bounded);
  REQUIRE(s.vertices.size() == 1);
  CHECK(has_vertex(s, Eigen::Vector3d(2.0, 5.0, 4.0)));
}

TEST_CASE("regulator risk set, three assets, two-dimensional M") {
  ThreeAssetExample e = three_asset();
  RiskSet s = avar_regulator(e.payoff, e.model, e.alpha, spanned_M());
  REQUIRE(s.status == RiskSet::Status::bounded);
  REQUIRE(s.vertices.size() == 2);
  CHECK(has_vertex(s, Eigen::Vector3d(17.5, 5.0, 4.0)));
  CHECK(has_vertex(s, Eigen::Vector3d(2.0, 36.0, 4.0)));
  // recession cone generated by the basis directions of M_+
  REQUIRE(s.recession.n_generators() == 2);
  Eigen::Vector3d g1(5.0, 0.0, 1.0), g2(0.0, 10.0, 1.0);
  GeneratedCone expect(3, (Eigen::MatrixXd(3, 2) << g1, g2).finished());
  CHECK(s.recession == expect);
}

TEST_CASE("regulator risk set, five scenarios") {
  Eigen::VectorXd p(5);
  p << 0.25, 0.4, 0.3, 0.02, 0.03;
  Eigen::MatrixXd x(2, 5);
  x << 6.0, -8.0, -4.0, -90.0, -80.0, 3.0, -6.0, 2.0, -6.0, -60.0;
  Eigen::VectorXd a(2);
  a << 0.05, 0.05;
  RiskSet s = avar_regulator(Payoff(x), ScenarioModel(p), AlphaVector(a),
                             EligibleSpace::full(2));
  REQUIRE(s.vertices.size() == 1);
  CHECK(has_vertex(s, Eigen::Vector2d(84.0, 38.4)));
}

TEST_CASE("problem-size records") {
  TwoAssetExample e = two_asset();
  BuiltVlp reg =
      build_regulator_vlp(e.payoff, e.model, e.alpha, EligibleSpace::full(2));
  CHECK(reg.size.n_vars == 6);        // dN + d
  CHECK(reg.size.n_objectives == 2);
  CHECK(reg.size.n_nonneg_bounds == 4);
  CHECK(reg.size.n_ineq_rows == 4);
  CHECK(reg.size.n_eq_rows == 0);
  CHECK(reg.size.aggregate_constraints() == 8);

  BuiltVlp mar = build_market_vlp(e.payoff, e.model, e.alpha,
                                  EligibleSpace::full(2), two_asset_market());
  CHECK(mar.size.n_vars == 12);  // dN + Jhat(4) + I(2) + d
  CHECK(mar.size.n_objectives == 2);
  CHECK(mar.size.n_nonneg_bounds == 10);
  CHECK(mar.size.n_eq_rows == 4);
  CHECK(mar.size.aggregate_constraints() == 14);
}

TEST_CASE("market risk set and recovered strategies, two assets") {
  TwoAssetExample e = two_asset();
  auto [s, report] = avar_market(e.payoff, e.model, e.alpha,
                                 EligibleSpace::full(2), two_asset_market());
  REQUIRE(s.status == RiskSet::Status::bounded);
  REQUIRE(s.vertices.size() == 2);
  CHECK(has_vertex(s, Eigen::Vector2d(-39.0, 56.0)));
  CHECK(has_vertex(s, Eigen::Vector2d(-12.0, 20.0)));
  // recession cone equals K_0
  CHECK(s.recession == two_asset_market().k0);

  REQUIRE(report.per_vertex.size() == 2);
  // vertices are lex sorted: index 0 is (-39, 56), index 1 is (-12, 20)
  const StrategyVertexReport& r0 = report.per_vertex[0];
  CHECK(r0.k0.lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK((r0.kT[0] - Eigen::Vector2d(-27.0, 36.0)).lpNorm<Eigen::Infinity>() <
        1e-4);
  CHECK((r0.kT[1] - Eigen::Vector2d(-35.0, 50.0)).lpNorm<Eigen::Infinity>() <
        1e-4);
  const StrategyVertexReport& r1 = report.per_vertex[1];
  CHECK(r1.k0.lpNorm<Eigen::Infinity>() < 1e-6);
  CHECK(r1.kT[0].lpNorm<Eigen::Infinity>() < 1e-4);
  CHECK((r1.kT[1] - Eigen::Vector2d(-8.0, 80.0 / 7.0)).lpNorm<Eigen::Infinity>() <
        1e-4);

  // the regulator set of the shifted payoff reproduces each vertex
  for (size_t i = 0; i < s.vertices.size(); ++i) {
    const RiskSet& shifted = report.per_vertex[i].regulator_at_shifted;
    CHECK(has_vertex(shifted, s.vertices[i], 1e-5));
  }
}

TEST_CASE("market set contains the regulator set") {
  TwoAssetExample e = two_asset();
  EligibleSpace full = EligibleSpace::full(2);
  RiskSet reg = avar_regulator(e.payoff, e.model, e.alpha, full);
  auto [mar, rep] = avar_market(e.payoff, e.model, e.alpha, full,
                                two_asset_market());
  (void)rep;
  // every regulator vertex is a member of the market set
  for (const Eigen::VectorXd& v : reg.vertices)
    CHECK(risk_set_contains(mar, v, full));
}

TEST_CASE("risk set membership probe") {
  TwoAssetExample e = two_asset();
  EligibleSpace full = EligibleSpace::full(2);
  RiskSet s = avar_regulator(e.payoff, e.model, e.alpha, full);
  CHECK(risk_set_contains(s, Eigen::Vector2d(-4.0, 20.0), full));
  CHECK(risk_set_contains(s, Eigen::Vector2d(-3.0, 21.0), full));
  CHECK_FALSE(risk_set_contains(s, Eigen::Vector2d(-4.1, 20.0), full));
  CHECK_FALSE(risk_set_contains(s, Eigen::Vector2d(-4.0, 19.9), full));
}

TEST_CASE("acceptability probes") {
  TwoAssetExample e = two_asset();
  EligibleSpace full = EligibleSpace::full(2);
  CHECK_FALSE(is_acceptable(e.payoff, e.model, e.alpha, full));
  CHECK_FALSE(
      is_acceptable(e.payoff, e.model, e.alpha, full, two_asset_market()));
  // the zero payoff is always acceptable
  Payoff zero(Eigen::MatrixXd::Zero(2, 2));
  CHECK(is_acceptable(zero, e.model, e.alpha, full));
  CHECK(is_acceptable(zero, e.model, e.alpha, full, two_asset_market()));
  // a strictly positive payoff stays acceptable, a deeply negative one not
  Payoff pos(Eigen::MatrixXd::Constant(2, 2, 3.0));
  CHECK(is_acceptable(pos, e.model, e.alpha, full));
  Payoff neg(Eigen::MatrixXd::Constant(2, 2, -3.0));
  CHECK_FALSE(is_acceptable(neg, e.model, e.alpha, full));
}

TEST_CASE("market instance validation") {
  MarketInstance mi = two_asset_market();
  // wrong scenario count
  CHECK_THROWS_AS(mi.validate(2, 3), validation_error);
  // wrong dimension
  CHECK_THROWS_AS(mi.validate(3, 2), validation_error);
  mi.validate(2, 2);  // valid
}

TEST_CASE("translativity of the regulator set") {
  TwoAssetExample e = two_asset();
  EligibleSpace full = EligibleSpace::full(2);
  RiskSet base = avar_regulator(e.payoff, e.model, e.alpha, full);
  Eigen::Vector2d u(1.5, -2.0);
  Eigen::MatrixXd shifted = e.payoff.values();
  shifted.colwise() += Eigen::Vector2d(u);
  RiskSet s = avar_regulator(Payoff(shifted), e.model, e.alpha, full);
  REQUIRE(s.vertices.size() == base.vertices.size());
  for (size_t i = 0; i < s.vertices.size(); ++i)
    CHECK((s.vertices[i] - (base.vertices[i] - u)).lpNorm<Eigen::Infinity>() <
          1e-6);
}
