#include "savar/types.hpp"

#include <algorithm>
#include <cmath>

#include "savar/polyhedron.hpp"

namespace savar {

ScenarioModel::ScenarioModel(Eigen::VectorXd probabilities,
                             const Tolerances& tol)
    : p_(std::move(probabilities)) {
  if (p_.size() == 0 || !p_.allFinite() || (p_.array() <= 0.0).any())
    throw validation_error("probabilities not a distribution: non-positive weight");
  if (std::abs(p_.sum() - 1.0) > tol.prob_sum)
    throw validation_error("probabilities not a distribution: weights do not sum to 1");
}

Payoff::Payoff(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.cols() == 0)
    throw validation_error("payoff: empty matrix");
  if (!values_.allFinite())
    throw validation_error("payoff: non-finite entry");
}

AlphaVector::AlphaVector(Eigen::VectorXd alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() == 0)
    throw validation_error("alpha out of range: empty");
  if (!alpha_.allFinite() || (alpha_.array() <= 0.0).any() ||
      (alpha_.array() > 1.0).any())
    throw validation_error("alpha out of range: levels must lie in (0, 1]");
}

GeneratedCone::GeneratedCone(int dim, const Eigen::MatrixXd& generators,
                             const Tolerances& tol)
    : dim_(dim) {
  if (generators.rows() != dim || generators.cols() < 1)
    throw validation_error("cone: need at least one generator of matching dimension");
  if (!generators.allFinite())
    throw validation_error("cone: non-finite generator");
  std::vector<Eigen::VectorXd> kept;
  for (int j = 0; j < generators.cols(); ++j) {
    Eigen::VectorXd g = generators.col(j);
    double nrm = g.norm();
    if (nrm < 1e-14)
      throw validation_error("cone: zero generator");
    g /= nrm;
    bool dup = false;
    for (const auto& h : kept)
      if ((h - g).lpNorm<Eigen::Infinity>() < tol.vertex_dedup) {
        dup = true;
        break;
      }
    if (!dup) kept.push_back(g);
  }
  gen_.resize(dim, static_cast<int>(kept.size()));
  for (size_t j = 0; j < kept.size(); ++j)
    gen_.col(static_cast<int>(j)) = kept[j];
}

bool GeneratedCone::operator==(const GeneratedCone& other) const {
  if (dim_ != other.dim_ || gen_.cols() != other.gen_.cols()) return false;
  // Generators are normalized; compare as sets.
  for (int j = 0; j < gen_.cols(); ++j) {
    bool found = false;
    for (int k = 0; k < other.gen_.cols(); ++k)
      if ((gen_.col(j) - other.gen_.col(k)).lpNorm<Eigen::Infinity>() < 1e-9) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

EligibleSpace::EligibleSpace(Eigen::MatrixXd basis_M,
                             Eigen::MatrixXd basis_Mperp,
                             const Tolerances& tol)
    : basis_M_(std::move(basis_M)), basis_Mperp_(std::move(basis_Mperp)) {
  const int d = static_cast<int>(basis_M_.rows());
  const int m = static_cast<int>(basis_M_.cols());
  if (m < 1 || m > d)
    throw validation_error("eligible space: need 1 <= m <= d");
  if (basis_Mperp_.rows() != d || basis_Mperp_.cols() != d - m)
    throw validation_error("eligible space: complement basis dimension mismatch");

  Eigen::MatrixXd full(d, d);
  full.leftCols(m) = basis_M_;
  full.rightCols(d - m) = basis_Mperp_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(full);
  lu.setThreshold(1e-10);
  if (lu.rank() < d)
    throw validation_error("eligible space: basis columns not linearly independent");

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < d - m; ++j) {
      double dot = basis_M_.col(i).normalized().dot(
          basis_Mperp_.col(j).normalized());
      if (std::abs(dot) > tol.orthogonality)
        throw validation_error("eligible space: complement not orthogonal to M");
    }

  // Generators of M_+ in coordinates: {c | basis_M c >= 0}.
  ConeRays cr = cone_extreme_rays(basis_M_, tol);
  if (cr.rays.cols() == 0)
    throw validation_error("M_+ trivial: M intersects R^d_+ only at 0");
  mplus_gen_ = cr.rays;
}

EligibleSpace EligibleSpace::full(int d) {
  return EligibleSpace(Eigen::MatrixXd::Identity(d, d),
                       Eigen::MatrixXd(d, 0));
}

Eigen::VectorXd EligibleSpace::to_coords(const Eigen::VectorXd& u) const {
  return basis_M_.colPivHouseholderQr().solve(u);
}

ValidatedInstance validate_instance(const ScenarioModel& model,
                                    const Payoff& payoff,
                                    const AlphaVector& alpha,
                                    const EligibleSpace& eligible) {
  if (payoff.n_scenarios() != model.n_scenarios())
    throw validation_error("dimension mismatch: payoff scenarios vs probability weights");
  if (payoff.dim() != alpha.dim())
    throw validation_error("dimension mismatch: payoff assets vs alpha levels");
  if (payoff.dim() != eligible.dim())
    throw validation_error("dimension mismatch: payoff assets vs eligible space");
  return ValidatedInstance{model, payoff, alpha, eligible};
}

}  // namespace savar
