#pragma once

#include <Eigen/Dense>
#include <vector>

#include "savar/tolerances.hpp"

namespace savar {

// min c'x  s.t.  A_eq x = b_eq,  A_ge x >= b_ge,  x_i >= 0 for nonneg[i].
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_ge;
  Eigen::VectorXd b_ge;
  std::vector<bool> nonneg;  // false = free variable

  int n_vars() const { return static_cast<int>(c.size()); }
  void validate() const;  // throws validation_error on inconsistency
};

struct LpResult {
  enum class Status { optimal, infeasible, unbounded, numerical_failure };

  Status status = Status::numerical_failure;
  double value = 0.0;
  Eigen::VectorXd x;     // primal solution (optimal)
  Eigen::VectorXd y_eq;  // dual multipliers, equality rows (optimal)
  Eigen::VectorXd y_ge;  // dual multipliers, inequality rows, >= 0 (optimal)
  // Farkas certificate (infeasible): y_ge part >= 0,
  // y_eq'A_eq + y_ge'A_ge <= 0 on nonneg columns, = 0 on free columns,
  // y_eq'b_eq + y_ge'b_ge > 0.
  Eigen::VectorXd farkas_eq;
  Eigen::VectorXd farkas_ge;
  Eigen::VectorXd ray;  // improving feasible direction (unbounded)

  double dual_value(const LinearProgram& lp) const;
};

// Dense two-phase simplex, Dantzig pricing with a Bland anti-cycling
// fallback; deterministic for fixed input.
LpResult solve_lp(const LinearProgram& lp,
                  const Tolerances& tol = default_tolerances());

}  // namespace savar
