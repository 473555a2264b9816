#pragma once

#include <optional>
#include <vector>

#include "savar/types.hpp"
#include "savar/vlp.hpp"

namespace savar {

// One-period conical market: time-0 solvency cone and one terminal solvency
// cone per scenario.  Every cone must contain R^d_+ and differ from R^d.
struct MarketInstance {
  GeneratedCone k0;
  std::vector<GeneratedCone> kT;

  // Optional user-supplied generators of K_0 `intersect` M; when absent
  // the intersection is computed from the H-representation of K_0.
  std::optional<GeneratedCone> k0M;

  void validate(int d, int n_scenarios,
                const Tolerances& tol = default_tolerances()) const;
};

// Problem-size record for a built vector LP; the aggregate follows the
// convention calibrated in riskbuild.cpp (see aggregate_constraints).
struct ProblemSize {
  int n_vars = 0;
  int n_objectives = 0;
  int n_nonneg_bounds = 0;
  int n_ineq_rows = 0;
  int n_eq_rows = 0;       // structural rows plus the d-m membership rows
  int n_membership_rows = 0;  // the B_(d-m) rows, a subset of n_eq_rows
  // bounds + inequality rows + equality rows + membership rows counted a
  // second time.
  int aggregate_constraints() const {
    return n_nonneg_bounds + n_ineq_rows + n_eq_rows + n_membership_rows;
  }
};

struct BuiltVlp {
  VectorLp problem;
  ProblemSize size;
};

// Regulator problem: variables (zhat in R^{dN}_+, z in R^d free), image
// coordinates of diag(alpha)^{-1} Phat zhat - z in the basis of M, ordered
// by M_+.
BuiltVlp build_regulator_vlp(const Payoff& payoff, const ScenarioModel& model,
                             const AlphaVector& alpha,
                             const EligibleSpace& eligible,
                             const Tolerances& tol = default_tolerances());

// Market problem: variables (zhat, shat in R^{Jhat}_+, that in R^I_+,
// z free), ordered by K_0^M.
BuiltVlp build_market_vlp(const Payoff& payoff, const ScenarioModel& model,
                          const AlphaVector& alpha,
                          const EligibleSpace& eligible,
                          const MarketInstance& market,
                          const Tolerances& tol = default_tolerances());

RiskSet avar_regulator(const Payoff& payoff, const ScenarioModel& model,
                       const AlphaVector& alpha, const EligibleSpace& eligible,
                       const Tolerances& tol = default_tolerances());

// Per-vertex trading strategy recovered from the solver preimage.
struct StrategyVertexReport {
  Eigen::VectorXd k0;               // time-0 trade H that
  std::vector<Eigen::VectorXd> kT;  // terminal trade A_(n) shat_n per scenario
  Eigen::MatrixXd y;                // induced freely available payoff, d x N
  RiskSet regulator_at_shifted;     // regulator set of X + Y
};

struct StrategyReport {
  std::vector<StrategyVertexReport> per_vertex;
};

std::pair<RiskSet, StrategyReport> avar_market(
    const Payoff& payoff, const ScenarioModel& model, const AlphaVector& alpha,
    const EligibleSpace& eligible, const MarketInstance& market,
    const Tolerances& tol = default_tolerances());

// True iff 0 lies in the risk set, decided by a single feasibility probe
// with z = diag(alpha)^{-1} E[Z] substituted.
bool is_acceptable(const Payoff& payoff, const ScenarioModel& model,
                   const AlphaVector& alpha, const EligibleSpace& eligible,
                   const std::optional<MarketInstance>& market = std::nullopt,
                   const Tolerances& tol = default_tolerances());

// Membership probe: u + risk-set test, i.e. whether u lies in the computed
// regulator/market set (used by support and plotting code paths).
bool risk_set_contains(const RiskSet& set, const Eigen::VectorXd& u,
                       const EligibleSpace& eligible,
                       const Tolerances& tol = default_tolerances());

}  // namespace savar
