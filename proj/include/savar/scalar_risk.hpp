#pragma once

#include <Eigen/Dense>

#include "savar/types.hpp"

namespace savar {

// Per-asset bid/ask prices at one time point, quoted in numeraire units.
struct BidAskQuote {
  Eigen::VectorXd bid;
  Eigen::VectorXd ask;

  BidAskQuote(Eigen::VectorXd bid_, Eigen::VectorXd ask_);
  int n_assets() const { return static_cast<int>(bid.size()); }
};

// Scalar average value at risk via the optimized certainty equivalent:
// inf_z (1/alpha) E[(z - X)^+] - z.  Evaluated by the closed form over
// sorted scenario values and cross-checked against the LP formulation.
double avar_scalar(const Eigen::VectorXd& x, const ScenarioModel& model,
                   double alpha, const Tolerances& tol = default_tolerances());

// Liquidate a two-asset payoff into `target` (1 or 2) at the per-scenario
// terminal quotes of asset 2 in units of asset 1: positive positions sell
// at bid, negative positions cover at ask.
Eigen::VectorXd liquidate(const Payoff& payoff,
                          const std::vector<BidAskQuote>& quotes_T,
                          int target);

// Scalarization phi_w(X) = sum_{i: w_i > 0} w_i AV@R_{alpha_i}(X_i),
// the support function of the regulator set for M = R^d.
double phi_w(const Payoff& payoff, const ScenarioModel& model,
             const AlphaVector& alpha, const Eigen::VectorXd& w,
             const Tolerances& tol = default_tolerances());

}  // namespace savar
