#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "savar/scalar_risk.hpp"
#include "savar/types.hpp"

namespace savar {

// Solvency cone for a market quoted against a cash numeraire (asset 1).
//
// quotes: bid/ask of assets 2..d in units of asset 1.  When the cash asset
// is frictionless the cone has the 2(d-1) exchange generators
// (ask_i, ..., -1, ...) and (-bid_i, ..., +1, ...); `bond_price` replaces
// the +-1 entries by +-S^1 (a discounted but frictionless bond).  When
// `bond_bid_ask` is present every exchange runs through the cash unit of
// account and the cone has the d(d-1) pairwise generators
// pi^{ji} e^j - e^i with pi^{ji} = ask_i / bid_j.
GeneratedCone solvency_cone_cash_numeraire(
    const BidAskQuote& quotes, std::optional<double> bond_price = std::nullopt,
    std::optional<std::pair<double, double>> bond_bid_ask = std::nullopt,
    const Tolerances& tol = default_tolerances());

// Physical-delivery outperformance option on assets 2..d against the cash
// account (asset 1): pays -K cash plus c_i units of the best performer i
// (smallest index on ties) when max_j c_j (S_T^a)^j >= K, zero otherwise;
// c_i is fixed by (S_0^a)^2 = c_i (S_0^a)^i.
//
// spot_ask_0: ask prices of assets 2..d at time 0; scenario_ask_T: per
// scenario ask prices of assets 2..d at maturity.
Payoff outperformance_payoff(const Eigen::VectorXd& spot_ask_0,
                             const std::vector<Eigen::VectorXd>& scenario_ask_T,
                             double strike);

// One-period recombining +-1 shock tree for the d-1 risky assets:
// log S_T = log S_0 + (mu - diag(Sigma)/2) h + sqrt(h) L eps over all
// eps in {-1,+1}^{d-1}, L the lower Cholesky factor of Sigma.  Scenarios
// are equiprobable and ordered by the binary expansion of eps (bit j = +1
// shock for factor j, most significant factor first).
struct OnePeriodTree {
  ScenarioModel model;
  std::vector<Eigen::VectorXd> prices;  // per-scenario risky mid prices
};

OnePeriodTree generate_one_period_tree(const Eigen::VectorXd& spot,
                                       const Eigen::VectorXd& drift,
                                       const Eigen::MatrixXd& covariance,
                                       double horizon);

}  // namespace savar
