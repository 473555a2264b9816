#include "savar/vlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "savar/polyhedron.hpp"

namespace savar {

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i) - 1e-14) return true;
    if (a(i) > b(i) + 1e-14) return false;
  }
  return false;
}

LinearProgram feasibility_lp(const VectorLp& p) {
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(p.n_vars());
  lp.A_eq = p.A_eq;
  lp.b_eq = p.b_eq;
  lp.A_ge = p.A_ge;
  lp.b_ge = p.b_ge;
  lp.nonneg = p.nonneg;
  return lp;
}

// min w'Cx over the recession cone of the feasible set.
LinearProgram homogeneous_lp(const VectorLp& p, const Eigen::VectorXd& w) {
  LinearProgram lp;
  lp.c = (w.transpose() * p.C).transpose();
  lp.A_eq = p.A_eq;
  lp.b_eq = Eigen::VectorXd::Zero(p.A_eq.rows());
  lp.A_ge = p.A_ge;
  lp.b_ge = Eigen::VectorXd::Zero(p.A_ge.rows());
  lp.nonneg = p.nonneg;
  return lp;
}

// min w'Cx over the feasible set (support value of the image).
LinearProgram support_lp(const VectorLp& p, const Eigen::VectorXd& w) {
  LinearProgram lp = feasibility_lp(p);
  lp.c = (w.transpose() * p.C).transpose();
  return lp;
}

// Feasibility of v = Cx + D lambda with x feasible, lambda >= 0.
LinearProgram membership_lp(const VectorLp& p, const Eigen::MatrixXd& Dgen,
                            const Eigen::VectorXd& v) {
  const int n = p.n_vars();
  const int nd = static_cast<int>(Dgen.cols());
  const int q = p.q();
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(n + nd);
  lp.A_eq.resize(p.A_eq.rows() + q, n + nd);
  lp.A_eq.setZero();
  lp.A_eq.topLeftCorner(p.A_eq.rows(), n) = p.A_eq;
  lp.A_eq.bottomLeftCorner(q, n) = p.C;
  lp.A_eq.bottomRightCorner(q, nd) = Dgen;
  lp.b_eq.resize(p.A_eq.rows() + q);
  lp.b_eq.head(p.A_eq.rows()) = p.b_eq;
  lp.b_eq.tail(q) = v;
  lp.A_ge.resize(p.A_ge.rows(), n + nd);
  lp.A_ge.setZero();
  lp.A_ge.leftCols(n) = p.A_ge;
  lp.b_ge = p.b_ge;
  lp.nonneg = p.nonneg;
  lp.nonneg.insert(lp.nonneg.end(), nd, true);
  return lp;
}

void lp_check(const LpResult& r, const char* what) {
  if (r.status == LpResult::Status::numerical_failure)
    throw std::runtime_error(std::string("vlp: LP kernel numerical failure in ") +
                             what);
}

// Recession cone D of the upper image, returned as its extreme rays, via a
// cutting scheme in the dual: start from the (polar of the) ordering cone
// and cut with image rays found whenever a homogeneous LP is unbounded.
struct RecessionCone {
  Eigen::MatrixXd generators;       // extreme rays of D
  Eigen::MatrixXd dual_rays;        // extreme rays of D polar
  Eigen::MatrixXd dual_lineality;   // lineality basis of D polar
  bool pointed = true;
};

RecessionCone upper_image_recession(const VectorLp& p,
                                    const std::vector<Eigen::VectorXd>& extra,
                                    const Tolerances& tol) {
  const int q = p.q();
  std::vector<Eigen::VectorXd> rows;  // elements of D: cuts y'w >= 0 on w
  for (int j = 0; j < p.ordering.n_generators(); ++j)
    rows.push_back(p.ordering.generators().col(j));
  for (const auto& y : extra) rows.push_back(y);

  for (int guard = 0; guard < 1000; ++guard) {
    Eigen::MatrixXd R(static_cast<int>(rows.size()), q);
    for (size_t i = 0; i < rows.size(); ++i)
      R.row(static_cast<int>(i)) = rows[i].transpose();
    ConeRays dual = cone_extreme_rays(R, tol);

    // Test every extreme direction of the dual candidate for boundedness.
    std::vector<Eigen::VectorXd> dirs;
    for (int j = 0; j < dual.rays.cols(); ++j) dirs.push_back(dual.rays.col(j));
    for (int j = 0; j < dual.lineality.cols(); ++j) {
      dirs.push_back(dual.lineality.col(j));
      dirs.push_back(-dual.lineality.col(j));
    }
    bool cut_added = false;
    for (const auto& w : dirs) {
      LpResult r = solve_lp(homogeneous_lp(p, w), tol);
      lp_check(r, "recession probe");
      if (r.status == LpResult::Status::unbounded) {
        Eigen::VectorXd y = p.C * r.ray;
        double nrm = y.norm();
        if (nrm < 1e-12)
          throw std::runtime_error("vlp: degenerate image ray");
        y /= nrm;
        bool dup = false;
        for (const auto& e : rows)
          if ((e - y).lpNorm<Eigen::Infinity>() < 1e-9) { dup = true; break; }
        if (!dup) {
          rows.push_back(y);
          cut_added = true;
        }
      }
    }
    if (!cut_added) {
      RecessionCone out;
      out.dual_rays = dual.rays;
      out.dual_lineality = dual.lineality;
      // D pointed <=> its polar is full-dimensional.
      Eigen::MatrixXd span(q, dual.rays.cols() + dual.lineality.cols());
      span << dual.rays, dual.lineality;
      if (span.cols() == 0) {
        out.pointed = false;
      } else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(span);
        svd.setThreshold(1e-10);
        out.pointed = svd.rank() == q;
      }
      // D = conical hull of the collected rows.
      Eigen::MatrixXd gens(q, static_cast<int>(rows.size()));
      for (size_t i = 0; i < rows.size(); ++i)
        gens.col(static_cast<int>(i)) = rows[i];
      if (out.pointed)
        out.generators = minimal_generators(gens, tol);
      else
        out.generators = gens;
      return out;
    }
  }
  throw std::runtime_error("vlp: recession cone computation did not converge");
}

}  // namespace

void VectorLp::validate(const Tolerances& tol) const {
  const int n = n_vars();
  if (ordering.dim() != q())
    throw validation_error("vlp: ordering cone dimension mismatch");
  if (static_cast<int>(nonneg.size()) != n)
    throw validation_error("vlp: nonneg pattern size mismatch");
  if (A_eq.rows() != b_eq.size() || (A_eq.rows() > 0 && A_eq.cols() != n) ||
      A_ge.rows() != b_ge.size() || (A_ge.rows() > 0 && A_ge.cols() != n))
    throw validation_error("vlp: constraint block dimension mismatch");

  // Pointedness probe: a nonzero v with v and -v in the cone exists iff
  // G(lambda + mu) = 0, sum mu = 1, lambda, mu >= 0 is feasible.
  const Eigen::MatrixXd& G = ordering.generators();
  const int k = static_cast<int>(G.cols());
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(2 * k);
  lp.A_eq.resize(q() + 1, 2 * k);
  lp.A_eq.topLeftCorner(q(), k) = G;
  lp.A_eq.topRightCorner(q(), k) = G;
  lp.A_eq.bottomRows(1).setZero();
  lp.A_eq.bottomRows(1).rightCols(k).setOnes();
  lp.b_eq = Eigen::VectorXd::Zero(q() + 1);
  lp.b_eq(q()) = 1.0;
  lp.A_ge.resize(0, 2 * k);
  lp.b_ge.resize(0);
  lp.nonneg.assign(2 * k, true);
  LpResult r = solve_lp(lp, tol);
  if (r.status == LpResult::Status::optimal)
    throw validation_error("vlp: ordering cone not pointed");
}

VlpSolution solve_vlp(const VectorLp& problem, const Tolerances& tol) {
  problem.validate(tol);
  const int q = problem.q();
  VlpSolution sol;
  sol.ordering = problem.ordering;

  {
    LpResult r = solve_lp(feasibility_lp(problem), tol);
    lp_check(r, "feasibility probe");
    if (r.status == LpResult::Status::infeasible) {
      sol.status = VlpSolution::Status::empty;
      return sol;
    }
  }

  // Recession cone and initial cuts. A support LP at a computed dual ray
  // can still escape along an image ray the fixpoint missed (boundary
  // tolerance): feed such rays back and recompute until stable.
  RecessionCone rec;
  std::vector<Eigen::VectorXd> cut_w;
  std::vector<double> cut_b;
  std::vector<Eigen::VectorXd> extra_rays;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 20)
      throw std::runtime_error("vlp: recession/support loop did not converge");
    rec = upper_image_recession(problem, extra_rays, tol);
    if (!rec.pointed) {
      sol.status = VlpSolution::Status::unbounded_below;
      sol.recession = rec.generators;
      return sol;
    }
    // One supporting halfspace per dual extreme ray (plus both signs of
    // any dual lineality direction).
    std::vector<Eigen::VectorXd> initial_dirs;
    for (int j = 0; j < rec.dual_rays.cols(); ++j)
      initial_dirs.push_back(rec.dual_rays.col(j));
    for (int j = 0; j < rec.dual_lineality.cols(); ++j) {
      initial_dirs.push_back(rec.dual_lineality.col(j));
      initial_dirs.push_back(-rec.dual_lineality.col(j));
    }
    cut_w.clear();
    cut_b.clear();
    bool escaped = false;
    for (const Eigen::VectorXd& w : initial_dirs) {
      LpResult r = solve_lp(support_lp(problem, w), tol);
      lp_check(r, "initial support");
      if (r.status == LpResult::Status::unbounded) {
        Eigen::VectorXd y = problem.C * r.ray;
        double nrm = y.norm();
        if (nrm < 1e-12)
          throw std::runtime_error("vlp: degenerate escape ray");
        extra_rays.push_back(y / nrm);
        escaped = true;
        break;
      }
      if (r.status != LpResult::Status::optimal)
        throw std::runtime_error("vlp: initial support LP not optimal");
      cut_w.push_back(w);
      cut_b.push_back(r.value);
    }
    if (!escaped) break;
  }

  const Eigen::MatrixXd& Dgen = rec.generators;
  struct Confirmed {
    Eigen::VectorXd v;
    Eigen::VectorXd preimage;
  };
  std::vector<Confirmed> confirmed;
  auto find_confirmed = [&](const Eigen::VectorXd& v) -> const Confirmed* {
    for (const auto& c : confirmed)
      if ((c.v - v).lpNorm<Eigen::Infinity>() < 1e-9) return &c;
    return nullptr;
  };

  const int max_cuts = 500;
  for (int iter = 0; iter < max_cuts; ++iter) {
    Eigen::MatrixXd W(static_cast<int>(cut_w.size()), q);
    Eigen::VectorXd b(static_cast<int>(cut_w.size()));
    for (size_t i = 0; i < cut_w.size(); ++i) {
      W.row(static_cast<int>(i)) = cut_w[i].transpose();
      b(static_cast<int>(i)) = cut_b[i];
    }
    PolyhedronV outer = polyhedron_vertices(W, b, tol);
    if (outer.lineality.cols() > 0)
      throw std::runtime_error("vlp: outer polyhedron lost pointedness");

    bool all_confirmed = true;
    for (const auto& v : outer.vertices) {
      if (find_confirmed(v)) continue;
      LpResult r = solve_lp(membership_lp(problem, Dgen, v), tol);
      lp_check(r, "membership probe");
      if (r.status == LpResult::Status::optimal) {
        confirmed.push_back({v, r.x.head(problem.n_vars())});
        continue;
      }
      // Separate: the Farkas multipliers of the coupling rows give a
      // direction wsep with wsep'u >= h(wsep) > wsep'v over the image.
      Eigen::VectorXd wsep = -r.farkas_eq.tail(q);
      double nrm = wsep.norm();
      if (nrm < 1e-12)
        throw std::runtime_error("vlp: degenerate separating direction");
      wsep /= nrm;
      LpResult s = solve_lp(support_lp(problem, wsep), tol);
      lp_check(s, "cut support");
      if (s.status != LpResult::Status::optimal)
        throw std::runtime_error("vlp: separating support LP not optimal");
      double gap = s.value - wsep.dot(v);
      if (gap <= tol.benson * (1.0 + std::abs(s.value))) {
        // v is within the Benson tolerance of the image: attach the
        // supporting minimizer as its preimage.
        confirmed.push_back({v, s.x});
        continue;
      }
      cut_w.push_back(wsep);
      cut_b.push_back(s.value);
      all_confirmed = false;
    }
    if (all_confirmed) {
      sol.status = VlpSolution::Status::bounded;
      // Merge vertices within the dedup tolerance, keeping the
      // lexicographically smallest representative.
      std::vector<Confirmed> final_pts;
      for (const auto& v : outer.vertices) {
        const Confirmed* c = find_confirmed(v);
        if (!c) continue;  // merged away by the enumerator
        bool merged = false;
        for (auto& f : final_pts) {
          if ((f.v - c->v).lpNorm<Eigen::Infinity>() < tol.vertex_dedup) {
            if (lex_less(c->v, f.v)) f = *c;
            merged = true;
            break;
          }
        }
        if (!merged) final_pts.push_back(*c);
      }
      std::sort(final_pts.begin(), final_pts.end(),
                [](const Confirmed& a, const Confirmed& b) {
                  return lex_less(a.v, b.v);
                });
      for (const auto& f : final_pts) {
        sol.vertices.push_back(f.v);
        sol.preimages.push_back(f.preimage);
      }
      // Recession generators: extreme rays of D plus any ordering-cone
      // generator not already represented.
      std::vector<Eigen::VectorXd> gens;
      for (int j = 0; j < Dgen.cols(); ++j) gens.push_back(Dgen.col(j));
      for (int j = 0; j < problem.ordering.n_generators(); ++j) {
        Eigen::VectorXd g = problem.ordering.generators().col(j);
        bool dup = false;
        for (const auto& e : gens)
          if ((e - g).lpNorm<Eigen::Infinity>() < tol.vertex_dedup) {
            dup = true;
            break;
          }
        if (!dup) gens.push_back(g);
      }
      std::sort(gens.begin(), gens.end(), lex_less);
      sol.recession.resize(q, static_cast<int>(gens.size()));
      for (size_t j = 0; j < gens.size(); ++j)
        sol.recession.col(static_cast<int>(j)) = gens[j];
      return sol;
    }
  }
  throw std::runtime_error("vlp: outer approximation did not converge");
}

double upper_image_supports(const VlpSolution& solution,
                            const Eigen::VectorXd& w, const Tolerances& tol) {
  const Eigen::MatrixXd& G = solution.ordering.generators();
  for (int j = 0; j < G.cols(); ++j)
    if (w.dot(G.col(j)) < -1e-9 * std::max(1.0, w.norm()))
      throw validation_error("upper_image_supports: w outside dual cone");
  for (int j = 0; j < solution.recession.cols(); ++j)
    if (w.dot(solution.recession.col(j)) < -tol.feasibility)
      return -std::numeric_limits<double>::infinity();
  if (solution.vertices.empty())
    throw validation_error("upper_image_supports: solution has no vertices");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : solution.vertices) best = std::min(best, w.dot(v));
  return best;
}

}  // namespace savar
