#include "savar/scalar_risk.hpp"

#include <algorithm>
#include <numeric>

#include "savar/lp.hpp"

namespace savar {

BidAskQuote::BidAskQuote(Eigen::VectorXd bid_, Eigen::VectorXd ask_)
    : bid(std::move(bid_)), ask(std::move(ask_)) {
  if (bid.size() != ask.size())
    throw validation_error("quote: bid/ask size mismatch");
  for (int i = 0; i < bid.size(); ++i)
    if (!(bid(i) > 0.0) || !(bid(i) <= ask(i)))
      throw validation_error("quote: need 0 < bid <= ask");
}

namespace {

double avar_closed_form(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
                        double alpha) {
  const int n = static_cast<int>(x.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return x(a) < x(b); });
  // Expected shortfall of the lower alpha-tail.
  double cum = 0.0, tail = 0.0;
  for (int k = 0; k < n; ++k) {
    double w = std::min(p(order[k]), alpha - cum);
    tail += w * x(order[k]);
    cum += w;
    if (cum >= alpha - 1e-15) break;
  }
  return -tail / alpha;
}

double avar_lp(const Eigen::VectorXd& x, const Eigen::VectorXd& p,
               double alpha, const Tolerances& tol) {
  // min (1/alpha) sum p_n zhat_n - z  s.t.  zhat_n >= z - x_n, zhat >= 0.
  const int n = static_cast<int>(x.size());
  LinearProgram lp;
  lp.c.resize(n + 1);
  lp.c.head(n) = p / alpha;
  lp.c(n) = -1.0;
  lp.A_ge = Eigen::MatrixXd::Zero(n, n + 1);
  lp.b_ge = -x;
  for (int i = 0; i < n; ++i) {
    lp.A_ge(i, i) = 1.0;
    lp.A_ge(i, n) = -1.0;
  }
  lp.A_eq.resize(0, n + 1);
  lp.b_eq.resize(0);
  lp.nonneg.assign(n + 1, true);
  lp.nonneg[n] = false;
  LpResult r = solve_lp(lp, tol);
  if (r.status != LpResult::Status::optimal)
    throw std::runtime_error("avar_scalar: LP route did not reach an optimum");
  return r.value;
}

}  // namespace

double avar_scalar(const Eigen::VectorXd& x, const ScenarioModel& model,
                   double alpha, const Tolerances& tol) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw validation_error("alpha out of range: level must lie in (0, 1]");
  if (x.size() != model.n_scenarios())
    throw validation_error("dimension mismatch: scenario values vs weights");
  double cf = avar_closed_form(x, model.probabilities(), alpha);
  double lp = avar_lp(x, model.probabilities(), alpha, tol);
  if (std::abs(cf - lp) > 1e-9 * std::max(1.0, std::abs(cf)))
    throw std::runtime_error("avar_scalar: closed form and LP route disagree");
  return cf;
}

Eigen::VectorXd liquidate(const Payoff& payoff,
                          const std::vector<BidAskQuote>& quotes_T,
                          int target) {
  if (payoff.dim() != 2)
    throw validation_error("liquidate: requires d = 2");
  if (target != 1 && target != 2)
    throw validation_error("liquidate: target must be 1 or 2");
  const int n = payoff.n_scenarios();
  if (static_cast<int>(quotes_T.size()) != n)
    throw validation_error("liquidate: one quote per scenario required");
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    double x1 = payoff.values()(0, k);
    double x2 = payoff.values()(1, k);
    double bidp = quotes_T[k].bid(0);
    double askp = quotes_T[k].ask(0);
    if (target == 1)
      out(k) = x1 + x2 * (x2 >= 0 ? bidp : askp);
    else
      out(k) = x2 + x1 / (x1 >= 0 ? askp : bidp);
  }
  return out;
}

double phi_w(const Payoff& payoff, const ScenarioModel& model,
             const AlphaVector& alpha, const Eigen::VectorXd& w,
             const Tolerances& tol) {
  if (w.size() != payoff.dim())
    throw validation_error("phi_w: weight dimension mismatch");
  if ((w.array() < 0.0).any())
    throw validation_error("phi_w: weight with negative entry");
  if (w.lpNorm<Eigen::Infinity>() == 0.0)
    throw validation_error("phi_w: zero weight");
  double acc = 0.0;
  for (int i = 0; i < w.size(); ++i)
    if (w(i) > 0.0)
      acc += w(i) *
             avar_scalar(payoff.values().row(i).transpose(), model, alpha(i), tol);
  return acc;
}

}  // namespace savar
