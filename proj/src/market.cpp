#include "savar/market.hpp"

#include <cmath>

namespace savar {

GeneratedCone solvency_cone_cash_numeraire(
    const BidAskQuote& quotes, std::optional<double> bond_price,
    std::optional<std::pair<double, double>> bond_bid_ask,
    const Tolerances& tol) {
  const int d = quotes.n_assets() + 1;
  if (d < 2) throw validation_error("solvency cone: need at least one quote");

  if (bond_bid_ask) {
    auto [bb, ba] = *bond_bid_ask;
    if (!(bb > 0.0) || !(bb <= ba))
      throw validation_error("solvency cone: need 0 < bond bid <= ask");
    // All d assets quoted in the cash unit of account; exchange j -> i
    // sells j at bid and buys i at ask.
    Eigen::VectorXd bid(d), ask(d);
    bid(0) = bb;
    ask(0) = ba;
    bid.tail(d - 1) = quotes.bid;
    ask.tail(d - 1) = quotes.ask;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(d, d * (d - 1));
    int col = 0;
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) {
        if (i == j) continue;
        gen(j, col) = ask(i) / bid(j);
        gen(i, col) -= 1.0;
        ++col;
      }
    return GeneratedCone(d, gen, tol);
  }

  const double s1 = bond_price.value_or(1.0);
  if (!(s1 > 0.0))
    throw validation_error("solvency cone: non-positive price");
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(d, 2 * (d - 1));
  for (int i = 1; i < d; ++i) {
    gen(0, 2 * (i - 1)) = quotes.ask(i - 1);
    gen(i, 2 * (i - 1)) = -s1;
    gen(0, 2 * (i - 1) + 1) = -quotes.bid(i - 1);
    gen(i, 2 * (i - 1) + 1) = s1;
  }
  return GeneratedCone(d, gen, tol);
}

Payoff outperformance_payoff(const Eigen::VectorXd& spot_ask_0,
                             const std::vector<Eigen::VectorXd>& scenario_ask_T,
                             double strike) {
  const int risky = static_cast<int>(spot_ask_0.size());
  const int d = risky + 1;
  if (d < 3)
    throw validation_error("outperformance: need d >= 3 (cash plus >= 2 risky)");
  if ((spot_ask_0.array() <= 0.0).any())
    throw validation_error("outperformance: non-positive ask price");

  // (S_0^a)^2 = c_i (S_0^a)^i, so c_2 = 1.
  Eigen::VectorXd c(risky);
  for (int i = 0; i < risky; ++i) c(i) = spot_ask_0(0) / spot_ask_0(i);

  const int N = static_cast<int>(scenario_ask_T.size());
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(d, N);
  for (int n = 0; n < N; ++n) {
    const Eigen::VectorXd& aT = scenario_ask_T[n];
    if (aT.size() != risky)
      throw validation_error("outperformance: scenario quote size mismatch");
    if ((aT.array() <= 0.0).any())
      throw validation_error("outperformance: non-positive ask price");
    int best = 0;
    double best_val = c(0) * aT(0);
    for (int i = 1; i < risky; ++i) {
      double v = c(i) * aT(i);
      if (v > best_val) {  // strict: ties go to the smaller index
        best_val = v;
        best = i;
      }
    }
    if (best_val >= strike) {
      values(0, n) = -strike;
      values(best + 1, n) = c(best);
    }
  }
  return Payoff(values);
}

OnePeriodTree generate_one_period_tree(const Eigen::VectorXd& spot,
                                       const Eigen::VectorXd& drift,
                                       const Eigen::MatrixXd& covariance,
                                       double horizon) {
  const int k = static_cast<int>(spot.size());
  if (drift.size() != k || covariance.rows() != k || covariance.cols() != k)
    throw validation_error("tree: dimension mismatch");
  if ((spot.array() <= 0.0).any())
    throw validation_error("tree: non-positive spot");
  if (!covariance.isApprox(covariance.transpose(), 1e-12))
    throw validation_error("tree: covariance not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw validation_error("tree: covariance not positive definite");
  Eigen::MatrixXd L = llt.matrixL();

  const int N = 1 << k;
  Eigen::VectorXd base =
      spot.array().log().matrix() +
      (drift - 0.5 * covariance.diagonal()) * horizon;
  const double sh = std::sqrt(horizon);

  OnePeriodTree out{ScenarioModel(Eigen::VectorXd::Constant(N, 1.0 / N)), {}};
  for (int n = 0; n < N; ++n) {
    Eigen::VectorXd eps(k);
    for (int j = 0; j < k; ++j)
      eps(j) = (n >> (k - 1 - j)) & 1 ? 1.0 : -1.0;
    out.prices.push_back((base + sh * L * eps).array().exp().matrix());
  }
  return out;
}

}  // namespace savar
