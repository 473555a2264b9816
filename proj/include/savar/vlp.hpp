#pragma once

#include <Eigen/Dense>
#include <vector>

#include "savar/lp.hpp"
#include "savar/types.hpp"

namespace savar {

// Linear vector optimization problem: minimize Cx over a polyhedral
// feasible set with respect to a pointed polyhedral ordering cone.
struct VectorLp {
  Eigen::MatrixXd C;  // q x n objective map
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_ge;
  Eigen::VectorXd b_ge;
  std::vector<bool> nonneg;
  GeneratedCone ordering;  // in R^q

  int n_vars() const { return static_cast<int>(C.cols()); }
  int q() const { return static_cast<int>(C.rows()); }
  void validate(const Tolerances& tol = default_tolerances()) const;
};

struct VlpSolution {
  enum class Status { bounded, empty, unbounded_below };

  Status status = Status::empty;
  // Minimal vertices of the upper image {Cx | x feasible} + ordering cone,
  // lexicographically sorted; preimages[i] attains vertices[i].
  std::vector<Eigen::VectorXd> vertices;
  std::vector<Eigen::VectorXd> preimages;
  // Extreme recession directions of the upper image, including the ordering
  // cone generators (columns, unit-normalized).
  Eigen::MatrixXd recession;
  GeneratedCone ordering{1, Eigen::MatrixXd::Identity(1, 1)};
};

// Primal Benson outer approximation: start from one supporting halfspace per
// dual ray of the upper-image recession cone, then cut with supporting
// hyperplanes at outer vertices not yet contained in the image.
VlpSolution solve_vlp(const VectorLp& problem,
                      const Tolerances& tol = default_tolerances());

// Support-function value min{w'u | u in upper image}; -inf when some
// recession generator r has w'r < 0.  Requires w in the dual of the
// ordering cone.
double upper_image_supports(const VlpSolution& solution,
                            const Eigen::VectorXd& w,
                            const Tolerances& tol = default_tolerances());

}  // namespace savar
