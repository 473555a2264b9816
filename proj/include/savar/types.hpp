#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "savar/tolerances.hpp"

namespace savar {

// Thrown when a domain-type invariant fails; message names the invariant.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& what)
      : std::invalid_argument(what) {}
};

// Finite probability space: N atoms with strictly positive weights.
class ScenarioModel {
 public:
  explicit ScenarioModel(Eigen::VectorXd probabilities,
                         const Tolerances& tol = default_tolerances());

  int n_scenarios() const { return static_cast<int>(p_.size()); }
  const Eigen::VectorXd& probabilities() const { return p_; }
  double p(int n) const { return p_(n); }

 private:
  Eigen::VectorXd p_;
};

// d x N matrix of physical units: entry (i, n) = units of asset i in
// scenario n.
class Payoff {
 public:
  explicit Payoff(Eigen::MatrixXd values);

  int dim() const { return static_cast<int>(values_.rows()); }
  int n_scenarios() const { return static_cast<int>(values_.cols()); }
  const Eigen::MatrixXd& values() const { return values_; }

 private:
  Eigen::MatrixXd values_;
};

// Component-wise confidence levels alpha_i in (0, 1].
class AlphaVector {
 public:
  explicit AlphaVector(Eigen::VectorXd alpha);

  int dim() const { return static_cast<int>(alpha_.size()); }
  const Eigen::VectorXd& values() const { return alpha_; }
  double operator()(int i) const { return alpha_(i); }

 private:
  Eigen::VectorXd alpha_;
};

// Finitely generated convex cone in R^d, columns are generators.
// Generators are unit-normalized and collinear duplicates are merged at
// construction.
class GeneratedCone {
 public:
  GeneratedCone() : dim_(0) {}  // trivial cone in R^0, placeholder only
  GeneratedCone(int dim, const Eigen::MatrixXd& generators,
                const Tolerances& tol = default_tolerances());

  int dim() const { return dim_; }
  int n_generators() const { return static_cast<int>(gen_.cols()); }
  const Eigen::MatrixXd& generators() const { return gen_; }

  bool operator==(const GeneratedCone& other) const;

 private:
  int dim_;
  Eigen::MatrixXd gen_;
};

// Eligible subspace M together with a basis of its orthogonal complement.
class EligibleSpace {
 public:
  EligibleSpace(Eigen::MatrixXd basis_M, Eigen::MatrixXd basis_Mperp,
                const Tolerances& tol = default_tolerances());

  // Convenience: M = R^d, M_perp empty.
  static EligibleSpace full(int d);

  int dim() const { return static_cast<int>(basis_M_.rows()); }
  int m() const { return static_cast<int>(basis_M_.cols()); }
  const Eigen::MatrixXd& basis_M() const { return basis_M_; }
  const Eigen::MatrixXd& basis_Mperp() const { return basis_Mperp_; }

  // Coordinates c with basis_M * c = u (least squares; exact for u in M).
  Eigen::VectorXd to_coords(const Eigen::VectorXd& u) const;
  Eigen::VectorXd to_ambient(const Eigen::VectorXd& c) const { return basis_M_ * c; }

  // Generators of M_+ = M `intersect` R^d_+ expressed in basis_M coordinates.
  const Eigen::MatrixXd& mplus_coord_generators() const { return mplus_gen_; }

 private:
  Eigen::MatrixXd basis_M_;
  Eigen::MatrixXd basis_Mperp_;
  Eigen::MatrixXd mplus_gen_;
};

// Per-vertex record of the attaining solver variables.
struct VertexPreimage {
  Eigen::VectorXd z_hat;  // dN slack variables Z(omega_n)
  Eigen::VectorXd z;      // the deterministic shift z in R^d
  Eigen::VectorXd s_hat;  // terminal trades (market case only, size J_hat)
  Eigen::VectorXd t_hat;  // time-0 trades (market case only, size I)
};

// Polyhedral upper set in M: minimal vertices plus recession generators.
struct RiskSet {
  enum class Status { bounded, empty, unbounded_below };

  Status status = Status::bounded;
  std::vector<Eigen::VectorXd> vertices;  // ambient R^d coordinates, in M
  GeneratedCone recession{1, Eigen::MatrixXd::Identity(1, 1)};
  std::vector<VertexPreimage> preimages;

  bool empty_flag() const { return status == Status::empty; }
};

struct ValidatedInstance {
  ScenarioModel model;
  Payoff payoff;
  AlphaVector alpha;
  EligibleSpace eligible;
};

// Checks cross-type dimension consistency; individual invariants are
// enforced by the type constructors.
ValidatedInstance validate_instance(const ScenarioModel& model,
                                    const Payoff& payoff,
                                    const AlphaVector& alpha,
                                    const EligibleSpace& eligible);

}  // namespace savar
