#include "savar/polyhedron.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace savar {

namespace {

// Lexicographic order on vectors, used for deterministic output.
bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - 1e-14) return true;
    if (a(i) > b(i) + 1e-14) return false;
  }
  return false;
}

Eigen::MatrixXd sort_columns(const Eigen::MatrixXd& m) {
  std::vector<int> idx(m.cols());
  for (int j = 0; j < m.cols(); ++j) idx[j] = j;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return lex_less(m.col(a), m.col(b));
  });
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (int j = 0; j < m.cols(); ++j) out.col(j) = m.col(idx[j]);
  return out;
}

void append_unique_ray(std::vector<Eigen::VectorXd>& rays,
                       const Eigen::VectorXd& v, double tol) {
  for (const auto& r : rays)
    if ((r - v).lpNorm<Eigen::Infinity>() < tol) return;
  rays.push_back(v);
}

// Extreme rays of a pointed cone {x | A x >= 0}: every extreme ray is the
// 1-dimensional null space of some (k-1)-subset of rows.
std::vector<Eigen::VectorXd> pointed_rays(const Eigen::MatrixXd& A,
                                          double tol) {
  const int k = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  std::vector<Eigen::VectorXd> rays;

  std::vector<int> subset(std::max(k - 1, 0));
  std::vector<int> stack;
  // Enumerate subsets of size k-1 of {0..m-1}.
  std::function<void(int, int)> rec = [&](int start, int need) {
    if (need == 0) {
      Eigen::MatrixXd S(k - 1, k);
      for (int r = 0; r < k - 1; ++r) S.row(r) = A.row(stack[r]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(
          S, Eigen::ComputeFullV);
      // Null space must be exactly one-dimensional.
      const auto& sv = svd.singularValues();
      double smax = sv.size() > 0 ? sv(0) : 0.0;
      int rank = 0;
      for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * std::max(1.0, smax)) ++rank;
      if (rank != k - 1) return;
      Eigen::VectorXd v = svd.matrixV().col(k - 1);
      v.normalize();
      const double feas = -tol * 10;
      if (((A * v).array() >= feas).all())
        append_unique_ray(rays, v, 1e-8);
      else if (((A * (-v)).array() >= feas).all())
        append_unique_ray(rays, -v, 1e-8);
      return;
    }
    for (int i = start; i + need <= m; ++i) {
      stack.push_back(i);
      rec(i + 1, need - 1);
      stack.pop_back();
    }
  };
  if (k == 1) {
    Eigen::VectorXd v(1);
    v << 1.0;
    if (((A * v).array() >= -tol).all()) rays.push_back(v);
    v << -1.0;
    if (((A * v).array() >= -tol).all()) append_unique_ray(rays, v, 1e-8);
  } else {
    rec(0, k - 1);
  }
  return rays;
}

}  // namespace

ConeRays cone_extreme_rays(const Eigen::MatrixXd& A, const Tolerances& tol) {
  const int k = static_cast<int>(A.cols());
  ConeRays out;
  out.lineality.resize(k, 0);
  out.rays.resize(k, 0);
  if (k == 0) return out;

  // Lineality space = null space of A.
  Eigen::MatrixXd L(k, 0);
  if (A.rows() == 0) {
    L = Eigen::MatrixXd::Identity(k, k);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-11 * std::max(1.0, smax)) ++rank;
    L = svd.matrixV().rightCols(k - rank);
  }
  out.lineality = L;

  if (L.cols() == k) return out;  // whole space, no pointed part

  std::vector<Eigen::VectorXd> rays;
  if (L.cols() == 0) {
    rays = pointed_rays(A, tol.feasibility);
  } else {
    // Quotient by the lineality space: Q spans its orthogonal complement.
    Eigen::JacobiSVD<Eigen::MatrixXd> svdA(A, Eigen::ComputeFullV);
    Eigen::MatrixXd Q = svdA.matrixV().leftCols(k - L.cols());
    Eigen::MatrixXd Ared = A * Q;
    for (const auto& r : pointed_rays(Ared, tol.feasibility)) {
      Eigen::VectorXd v = Q * r;
      v.normalize();
      rays.push_back(v);
    }
  }
  out.rays.resize(k, static_cast<int>(rays.size()));
  for (size_t j = 0; j < rays.size(); ++j) out.rays.col(static_cast<int>(j)) = rays[j];
  out.rays = sort_columns(out.rays);
  return out;
}

ConeRays dual_cone_rays(const Eigen::MatrixXd& generators, const Tolerances& tol) {
  return cone_extreme_rays(generators.transpose(), tol);
}

ConeHrep cone_hrep(const Eigen::MatrixXd& generators, const Tolerances& tol) {
  ConeRays dual = dual_cone_rays(generators, tol);
  ConeHrep h;
  h.ineq = dual.rays.transpose();
  h.eq = dual.lineality.transpose();
  return h;
}

Eigen::MatrixXd minimal_generators(const Eigen::MatrixXd& generators,
                                   const Tolerances& tol) {
  if (generators.cols() == 0) return generators;
  ConeHrep h = cone_hrep(generators, tol);
  Eigen::MatrixXd A(h.ineq.rows() + 2 * h.eq.rows(), generators.rows());
  A.topRows(h.ineq.rows()) = h.ineq;
  A.middleRows(h.ineq.rows(), h.eq.rows()) = h.eq;
  A.bottomRows(h.eq.rows()) = -h.eq;
  ConeRays r = cone_extreme_rays(A, tol);
  if (!r.pointed())
    throw std::runtime_error("minimal_generators: cone is not pointed");
  return r.rays;
}

PolyhedronV polyhedron_vertices(const Eigen::MatrixXd& W,
                                const Eigen::VectorXd& b,
                                const Tolerances& tol) {
  const int q = static_cast<int>(W.cols());
  // Homogenize: {(u, t) | W u - b t >= 0, t >= 0}.
  Eigen::MatrixXd A(W.rows() + 1, q + 1);
  A.topLeftCorner(W.rows(), q) = W;
  A.topRightCorner(W.rows(), 1) = -b;
  A.bottomRows(1).setZero();
  A(W.rows(), q) = 1.0;

  ConeRays cr = cone_extreme_rays(A, tol);
  PolyhedronV out;
  out.rays.resize(q, 0);
  out.lineality.resize(q, 0);

  if (!cr.pointed()) {
    // Lineality of the homogenized cone has t = 0 (t >= 0 is a constraint),
    // so it maps to lineality of the polyhedron.
    out.lineality = cr.lineality.topRows(q);
    return out;
  }
  std::vector<Eigen::VectorXd> recession;
  for (int j = 0; j < cr.rays.cols(); ++j) {
    Eigen::VectorXd r = cr.rays.col(j);
    double t = r(q);
    if (t > 1e-9) {
      out.vertices.push_back(r.head(q) / t);
    } else {
      Eigen::VectorXd d = r.head(q);
      if (d.norm() > 1e-12) recession.push_back(d.normalized());
    }
  }
  std::sort(out.vertices.begin(), out.vertices.end(), lex_less);
  out.rays.resize(q, static_cast<int>(recession.size()));
  for (size_t j = 0; j < recession.size(); ++j)
    out.rays.col(static_cast<int>(j)) = recession[j];
  out.rays = sort_columns(out.rays);
  return out;
}

}  // namespace savar
