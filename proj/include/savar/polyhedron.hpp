#pragma once

#include <Eigen/Dense>
#include <vector>

#include "savar/tolerances.hpp"

namespace savar {

// V-representation of a polyhedral cone {x | A x >= 0}.
struct ConeRays {
  Eigen::MatrixXd rays;      // columns, unit-normalized, pointed part
  Eigen::MatrixXd lineality; // columns, orthonormal basis of the lineality space
  bool pointed() const { return lineality.cols() == 0; }
};

// Extreme rays and lineality space of {x in R^k | A x >= 0}.
// Intended for small k (image-space dimension, k <= 5 or so); enumerates
// candidate active sets directly instead of running double description.
ConeRays cone_extreme_rays(const Eigen::MatrixXd& A,
                           const Tolerances& tol = default_tolerances());

// Extreme rays of the dual cone {w | g'w >= 0 for every generator column g}.
ConeRays dual_cone_rays(const Eigen::MatrixXd& generators,
                        const Tolerances& tol = default_tolerances());

// H-representation of cone(generators): rows of `ineq` give w'x >= 0, rows of
// `eq` give w'x = 0 (present when the cone is not full-dimensional).
struct ConeHrep {
  Eigen::MatrixXd ineq;
  Eigen::MatrixXd eq;
};
ConeHrep cone_hrep(const Eigen::MatrixXd& generators,
                   const Tolerances& tol = default_tolerances());

// Reduce a generator list to the extreme rays of its conical hull.
Eigen::MatrixXd minimal_generators(const Eigen::MatrixXd& generators,
                                   const Tolerances& tol = default_tolerances());

// V-representation of {u | W u >= b} obtained by homogenization.
struct PolyhedronV {
  std::vector<Eigen::VectorXd> vertices;
  Eigen::MatrixXd rays;      // recession directions, columns
  Eigen::MatrixXd lineality; // columns; nonempty means no vertices exist
};
PolyhedronV polyhedron_vertices(const Eigen::MatrixXd& W,
                                const Eigen::VectorXd& b,
                                const Tolerances& tol = default_tolerances());

}  // namespace savar
