#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "savar/scalar_risk.hpp"

using namespace savar;

namespace {

ScenarioModel uniform_model(int n) {
  return ScenarioModel(Eigen::VectorXd::Constant(n, 1.0 / n));
}

// Brute-force optimized certainty equivalent over a fine z grid.
double avar_grid(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                 double alpha) {
  double lo = x.minCoeff() - 1.0, hi = x.maxCoeff() + 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 200000; ++k) {
    double z = lo + (hi - lo) * k / 200000.0;
    double e = 0.0;
    for (int n = 0; n < x.size(); ++n) e += p(n) * std::max(z - x(n), 0.0);
    best = std::min(best, e / alpha - z);
  }
  return best;
}

}  // namespace

TEST_CASE("constant payoff") {
  ScenarioModel m = uniform_model(4);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(4, 7.5);
  CHECK(avar_scalar(x, m, 0.3) == doctest::Approx(-7.5));
  CHECK(avar_scalar(x, m, 1.0) == doctest::Approx(-7.5));
}

TEST_CASE("hand-checked three-scenario value") {
  ScenarioModel m = uniform_model(3);
  Eigen::VectorXd x(3);
  x << 1.0, -2.0, 3.0;
  CHECK(avar_scalar(x, m, 0.5) == doctest::Approx(1.0));
  // alpha below the smallest weight: worst case
  CHECK(avar_scalar(x, m, 0.2) == doctest::Approx(2.0));
  // alpha = 1: negative expectation
  CHECK(avar_scalar(x, m, 1.0) == doctest::Approx(-2.0 / 3.0));
}

TEST_CASE("matches grid search on random data") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> ua(0.05, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    int n = 2 + static_cast<int>(rng() % 5);
    Eigen::VectorXd raw(n);
    for (int i = 0; i < n; ++i) raw(i) = 0.1 + (rng() % 100) / 100.0;
    Eigen::VectorXd p = raw / raw.sum();
    ScenarioModel m(p);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = u(rng);
    double alpha = ua(rng);
    CHECK(avar_scalar(x, m, alpha) ==
          doctest::Approx(avar_grid(x, p, alpha)).epsilon(1e-4));
  }
}

TEST_CASE("coherence properties") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  ScenarioModel m = uniform_model(5);
  for (int rep = 0; rep < 25; ++rep) {
    Eigen::VectorXd x(5), y(5);
    for (int i = 0; i < 5; ++i) {
      x(i) = u(rng);
      y(i) = u(rng);
    }
    double alpha = 0.05 + 0.9 * (rng() % 100) / 100.0;
    double rx = avar_scalar(x, m, alpha);
    double ry = avar_scalar(y, m, alpha);
    // translativity: adding sure cash c lowers risk by c
    double c = u(rng);
    CHECK(avar_scalar(x.array() + c, m, alpha) ==
          doctest::Approx(rx - c).epsilon(1e-9));
    // positive homogeneity
    CHECK(avar_scalar(2.5 * x, m, alpha) ==
          doctest::Approx(2.5 * rx).epsilon(1e-9));
    // subadditivity
    CHECK(avar_scalar(x + y, m, alpha) <= rx + ry + 1e-9);
    // monotonicity: y >= x pointwise implies lower risk
    Eigen::VectorXd up = x.array() + 0.5;
    CHECK(avar_scalar(up, m, alpha) <= rx + 1e-9);
  }
}

TEST_CASE("alpha domain is validated") {
  ScenarioModel m = uniform_model(2);
  Eigen::VectorXd x(2);
  x << 1.0, 2.0;
  CHECK_THROWS_AS(avar_scalar(x, m, 0.0), validation_error);
  CHECK_THROWS_AS(avar_scalar(x, m, 1.5), validation_error);
}

TEST_CASE("two-asset components of the first example") {
  Eigen::VectorXd p(2);
  p << 0.4, 0.6;
  ScenarioModel m(p);
  Eigen::VectorXd x1(2), x2(2);
  x1 << 12.0, 4.0;
  x2 << -20.0, -6.0;
  CHECK(avar_scalar(x1, m, 0.01) == doctest::Approx(-4.0));
  CHECK(avar_scalar(x2, m, 0.02) == doctest::Approx(20.0));
}

TEST_CASE("liquidation at terminal quotes") {
  Eigen::MatrixXd v(2, 2);
  v << 12.0, 4.0, -20.0, -6.0;
  Payoff payoff(v);
  Eigen::VectorXd b1(1), a1(1), b2(1), a2(1);
  b1 << 0.75;
  a1 << 1.11;
  b2 << 0.7;
  a2 << 0.9;
  std::vector<BidAskQuote> quotes = {BidAskQuote(b1, a1), BidAskQuote(b2, a2)};

  Eigen::VectorXd l1 = liquidate(payoff, quotes, 1);
  CHECK(l1(0) == doctest::Approx(-10.2));
  CHECK(l1(1) == doctest::Approx(-1.4));

  Eigen::VectorXd l2 = liquidate(payoff, quotes, 2);
  CHECK(l2(0) == doctest::Approx(12.0 / 1.11 - 20.0));
  CHECK(l2(1) == doctest::Approx(4.0 / 0.9 - 6.0));

  Eigen::VectorXd p(2);
  p << 0.4, 0.6;
  ScenarioModel m(p);
  CHECK(avar_scalar(l1, m, 0.01) == doctest::Approx(10.2).epsilon(1e-3));
  CHECK(avar_scalar(l2, m, 0.02) == doctest::Approx(9.19).epsilon(1e-2));
}

TEST_CASE("scalarization combines component risks") {
  Eigen::VectorXd p(2);
  p << 0.4, 0.6;
  ScenarioModel m(p);
  Eigen::MatrixXd v(2, 2);
  v << 12.0, 4.0, -20.0, -6.0;
  Payoff payoff(v);
  Eigen::VectorXd a(2);
  a << 0.01, 0.02;
  AlphaVector alpha(a);
  Eigen::VectorXd w(2);
  w << 1.0, 0.0;
  CHECK(phi_w(payoff, m, alpha, w) == doctest::Approx(-4.0));
  w << 1.0, 1.0;
  CHECK(phi_w(payoff, m, alpha, w) == doctest::Approx(16.0));
  w << 0.5, 2.0;
  CHECK(phi_w(payoff, m, alpha, w) == doctest::Approx(-2.0 + 40.0));
}
