#pragma once

namespace savar {

// Global tolerance record threaded through all modules.
struct Tolerances {
  double feasibility = 1e-9;   // LP primal/dual residuals
  double duality_gap = 1e-8;   // relative primal/dual objective gap
  double vertex_dedup = 1e-6;  // inf-norm gap below which vertices merge
  double orthogonality = 1e-10;
  double benson = 1e-7;        // outer-approximation cut acceptance
  double prob_sum = 1e-12;     // |sum(p) - 1|
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace savar
