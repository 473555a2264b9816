#include "savar/riskbuild.hpp"

#include <cmath>

#include "savar/polyhedron.hpp"

namespace savar {

namespace {

// x hat layout is scenario-major: component (i, n) sits at n*d + i.
Eigen::VectorXd stack_scenarios(const Eigen::MatrixXd& values) {
  const int d = static_cast<int>(values.rows());
  const int N = static_cast<int>(values.cols());
  Eigen::VectorXd out(d * N);
  for (int n = 0; n < N; ++n) out.segment(n * d, d) = values.col(n);
  return out;
}

// diag(alpha)^{-1} Phat: d x dN block row (p_n / alpha_i at (i, n*d+i)).
Eigen::MatrixXd alpha_inv_phat(const ScenarioModel& model,
                               const AlphaVector& alpha) {
  const int d = alpha.dim();
  const int N = model.n_scenarios();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d * N);
  for (int n = 0; n < N; ++n)
    for (int i = 0; i < d; ++i) out(i, n * d + i) = model.p(n) / alpha(i);
  return out;
}

Eigen::MatrixXd stacked_identity(int d, int N) {
  Eigen::MatrixXd out(d * N, d);
  for (int n = 0; n < N; ++n)
    out.middleRows(n * d, d) = Eigen::MatrixXd::Identity(d, d);
  return out;
}

// Left inverse mapping ambient vectors in M to basis_M coordinates.
Eigen::MatrixXd coordinate_map(const EligibleSpace& eligible) {
  const Eigen::MatrixXd& B = eligible.basis_M();
  return (B.transpose() * B).ldlt().solve(B.transpose());
}

bool cone_contains(const GeneratedCone& cone, const Eigen::VectorXd& v,
                   const Tolerances& tol) {
  const Eigen::MatrixXd& G = cone.generators();
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(G.cols());
  lp.A_eq = G;
  lp.b_eq = v;
  lp.A_ge.resize(0, G.cols());
  lp.b_ge.resize(0);
  lp.nonneg.assign(G.cols(), true);
  return solve_lp(lp, tol).status == LpResult::Status::optimal;
}

GeneratedCone k0m_coordinate_cone(const EligibleSpace& eligible,
                                  const MarketInstance& market,
                                  const Tolerances& tol) {
  const int m = eligible.m();
  if (market.k0M) {
    // User-supplied generators of K_0^M (ambient, must lie in M).
    const Eigen::MatrixXd& G = market.k0M->generators();
    Eigen::MatrixXd coords(m, G.cols());
    for (int j = 0; j < G.cols(); ++j) {
      Eigen::VectorXd c = eligible.to_coords(G.col(j));
      if ((eligible.to_ambient(c) - G.col(j)).lpNorm<Eigen::Infinity>() > 1e-8)
        throw validation_error("market: K_0^M generator not in M");
      coords.col(j) = c;
    }
    return GeneratedCone(m, coords, tol);
  }
  // K_0 `intersect` M from the H-representation of K_0, restricted to
  // basis_M coordinates.
  ConeHrep h = cone_hrep(market.k0.generators(), tol);
  Eigen::MatrixXd A(h.ineq.rows() + 2 * h.eq.rows(), m);
  A.topRows(h.ineq.rows()) = h.ineq * eligible.basis_M();
  A.middleRows(h.ineq.rows(), h.eq.rows()) = h.eq * eligible.basis_M();
  A.bottomRows(h.eq.rows()) = -h.eq * eligible.basis_M();
  ConeRays rays = cone_extreme_rays(A, tol);
  if (rays.rays.cols() == 0)
    throw validation_error("market: K_0^M trivial");
  if (!rays.pointed())
    throw validation_error("market: K_0^M not pointed");
  return GeneratedCone(m, rays.rays, tol);
}

RiskSet to_risk_set(const VlpSolution& sol, const EligibleSpace& eligible,
                    const Tolerances& tol) {
  RiskSet out;
  switch (sol.status) {
    case VlpSolution::Status::empty:
      out.status = RiskSet::Status::empty;
      break;
    case VlpSolution::Status::unbounded_below:
      out.status = RiskSet::Status::unbounded_below;
      break;
    case VlpSolution::Status::bounded:
      out.status = RiskSet::Status::bounded;
      break;
  }
  for (const auto& c : sol.vertices)
    out.vertices.push_back(eligible.to_ambient(c));
  Eigen::MatrixXd rec = sol.recession;
  if (rec.cols() > 0) {
    Eigen::MatrixXd ambient = eligible.basis_M() * rec;
    out.recession = GeneratedCone(eligible.dim(), ambient, tol);
  } else {
    out.recession = GeneratedCone(eligible.dim(),
                                  eligible.basis_M() *
                                      eligible.mplus_coord_generators(),
                                  tol);
  }
  return out;
}

}  // namespace

void MarketInstance::validate(int d, int n_scenarios,
                              const Tolerances& tol) const {
  if (static_cast<int>(kT.size()) != n_scenarios)
    throw validation_error("market: one terminal cone per scenario required");
  auto check_cone = [&](const GeneratedCone& cone, const char* name) {
    if (cone.dim() != d)
      throw validation_error(std::string("market: ") + name +
                             " dimension mismatch");
    bool proper = false;
    for (int i = 0; i < d; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(d, i);
      if (!cone_contains(cone, e, tol))
        throw validation_error(std::string("market: ") + name +
                               " does not contain R^d_+");
      if (!cone_contains(cone, -e, tol)) proper = true;
    }
    if (!proper)
      throw validation_error(std::string("market: ") + name + " equals R^d");
  };
  check_cone(k0, "K_0");
  for (const auto& cone : kT) check_cone(cone, "K_T");
}

BuiltVlp build_regulator_vlp(const Payoff& payoff, const ScenarioModel& model,
                             const AlphaVector& alpha,
                             const EligibleSpace& eligible,
                             const Tolerances& tol) {
  validate_instance(model, payoff, alpha, eligible);
  const int d = payoff.dim();
  const int N = model.n_scenarios();
  const int m = eligible.m();
  const int n = d * N + d;

  Eigen::MatrixXd image(d, n);  // (zhat, z) -> diag(alpha)^{-1} Phat zhat - z
  image.leftCols(d * N) = alpha_inv_phat(model, alpha);
  image.rightCols(d) = -Eigen::MatrixXd::Identity(d, d);

  BuiltVlp out;
  out.problem.C = coordinate_map(eligible) * image;
  out.problem.A_ge.resize(d * N, n);
  out.problem.A_ge.leftCols(d * N) = Eigen::MatrixXd::Identity(d * N, d * N);
  out.problem.A_ge.rightCols(d) = -stacked_identity(d, N);
  out.problem.b_ge = -stack_scenarios(payoff.values());
  out.problem.A_eq = eligible.basis_Mperp().transpose() * image;
  out.problem.b_eq = Eigen::VectorXd::Zero(d - m);
  out.problem.nonneg.assign(n, true);
  for (int i = 0; i < d; ++i) out.problem.nonneg[d * N + i] = false;
  out.problem.ordering =
      GeneratedCone(m, eligible.mplus_coord_generators(), tol);

  out.size.n_vars = n;
  out.size.n_objectives = m;
  out.size.n_nonneg_bounds = d * N;
  out.size.n_ineq_rows = d * N;
  out.size.n_eq_rows = d - m;
  out.size.n_membership_rows = d - m;
  return out;
}

BuiltVlp build_market_vlp(const Payoff& payoff, const ScenarioModel& model,
                          const AlphaVector& alpha,
                          const EligibleSpace& eligible,
                          const MarketInstance& market,
                          const Tolerances& tol) {
  validate_instance(model, payoff, alpha, eligible);
  const int d = payoff.dim();
  const int N = model.n_scenarios();
  const int m = eligible.m();
  market.validate(d, N, tol);

  const int I = market.k0.n_generators();
  int jhat = 0;
  for (const auto& cone : market.kT) jhat += cone.n_generators();
  const int n = d * N + jhat + I + d;
  const int off_s = d * N;
  const int off_t = off_s + jhat;
  const int off_z = off_t + I;

  Eigen::MatrixXd image = Eigen::MatrixXd::Zero(d, n);
  image.leftCols(d * N) = alpha_inv_phat(model, alpha);
  image.rightCols(d) = -Eigen::MatrixXd::Identity(d, d);

  BuiltVlp out;
  out.problem.C = coordinate_map(eligible) * image;

  // zhat + xhat - Ihat z = Ahat shat + Ihat H that   (dN rows)
  // B_(d-m) (diag(alpha)^{-1} Phat zhat - z) = 0     (d-m rows)
  out.problem.A_eq = Eigen::MatrixXd::Zero(d * N + (d - m), n);
  out.problem.b_eq = Eigen::VectorXd::Zero(d * N + (d - m));
  out.problem.A_eq.topLeftCorner(d * N, d * N) =
      Eigen::MatrixXd::Identity(d * N, d * N);
  int scol = off_s;
  for (int nsc = 0; nsc < N; ++nsc) {
    const Eigen::MatrixXd& An = market.kT[nsc].generators();
    out.problem.A_eq.block(nsc * d, scol, d, An.cols()) = -An;
    scol += static_cast<int>(An.cols());
  }
  Eigen::MatrixXd Ihat = stacked_identity(d, N);
  out.problem.A_eq.block(0, off_t, d * N, I) = -Ihat * market.k0.generators();
  out.problem.A_eq.block(0, off_z, d * N, d) = -Ihat;
  out.problem.b_eq.head(d * N) = -stack_scenarios(payoff.values());
  out.problem.A_eq.bottomRows(d - m) =
      eligible.basis_Mperp().transpose() * image;

  out.problem.A_ge.resize(0, n);
  out.problem.b_ge.resize(0);
  out.problem.nonneg.assign(n, true);
  for (int i = 0; i < d; ++i) out.problem.nonneg[off_z + i] = false;
  out.problem.ordering = k0m_coordinate_cone(eligible, market, tol);

  out.size.n_vars = n;
  out.size.n_objectives = m;
  out.size.n_nonneg_bounds = d * N + jhat + I;
  out.size.n_ineq_rows = 0;
  out.size.n_eq_rows = d * N + (d - m);
  out.size.n_membership_rows = d - m;
  return out;
}

RiskSet avar_regulator(const Payoff& payoff, const ScenarioModel& model,
                       const AlphaVector& alpha, const EligibleSpace& eligible,
                       const Tolerances& tol) {
  BuiltVlp built = build_regulator_vlp(payoff, model, alpha, eligible, tol);
  VlpSolution sol = solve_vlp(built.problem, tol);
  RiskSet out = to_risk_set(sol, eligible, tol);
  const int d = payoff.dim();
  const int N = model.n_scenarios();
  for (const auto& pre : sol.preimages) {
    VertexPreimage vp;
    vp.z_hat = pre.head(d * N);
    vp.z = pre.tail(d);
    out.preimages.push_back(std::move(vp));
  }
  return out;
}

std::pair<RiskSet, StrategyReport> avar_market(
    const Payoff& payoff, const ScenarioModel& model, const AlphaVector& alpha,
    const EligibleSpace& eligible, const MarketInstance& market,
    const Tolerances& tol) {
  BuiltVlp built = build_market_vlp(payoff, model, alpha, eligible, market, tol);
  VlpSolution sol = solve_vlp(built.problem, tol);
  RiskSet set = to_risk_set(sol, eligible, tol);

  const int d = payoff.dim();
  const int N = model.n_scenarios();
  const int I = market.k0.n_generators();
  int jhat = 0;
  for (const auto& cone : market.kT) jhat += cone.n_generators();

  // The generator coefficients in the solver preimage are not unique: any
  // extra trade that only disposes of wealth leaves the objective unchanged.
  // Recover the canonical strategy by minimizing total trading subject to
  // Ahat shat + Ihat H that <= zhat + xhat - Ihat z (disposal allowed).
  Eigen::MatrixXd trade = Eigen::MatrixXd::Zero(d * N, jhat + I);
  {
    int scol = 0;
    for (int nsc = 0; nsc < N; ++nsc) {
      const Eigen::MatrixXd& An = market.kT[nsc].generators();
      trade.block(nsc * d, scol, d, An.cols()) = An;
      scol += static_cast<int>(An.cols());
    }
    trade.rightCols(I) = stacked_identity(d, N) * market.k0.generators();
  }
  Eigen::VectorXd xhat = stack_scenarios(payoff.values());

  StrategyReport report;
  for (const auto& pre : sol.preimages) {
    VertexPreimage vp;
    vp.z_hat = pre.head(d * N);
    vp.z = pre.tail(d);
    Eigen::VectorXd room = vp.z_hat + xhat - stacked_identity(d, N) * vp.z;
    LinearProgram rec;
    rec.c = Eigen::VectorXd::Ones(jhat + I);
    rec.A_ge = -trade;
    rec.b_ge = -room;
    rec.A_eq.resize(0, jhat + I);
    rec.b_eq.resize(0);
    rec.nonneg.assign(jhat + I, true);
    LpResult rr = solve_lp(rec, tol);
    if (rr.status != LpResult::Status::optimal)
      throw std::runtime_error("avar_market: strategy recovery LP failed");
    vp.s_hat = rr.x.head(jhat);
    vp.t_hat = rr.x.tail(I);

    StrategyVertexReport svr;
    svr.k0 = market.k0.generators() * vp.t_hat;
    svr.y.resize(d, N);
    int soff = 0;
    for (int nsc = 0; nsc < N; ++nsc) {
      const Eigen::MatrixXd& An = market.kT[nsc].generators();
      Eigen::VectorXd ktn = An * vp.s_hat.segment(soff, An.cols());
      soff += static_cast<int>(An.cols());
      svr.kT.push_back(ktn);
      svr.y.col(nsc) = -svr.k0 - ktn;
    }
    svr.regulator_at_shifted = avar_regulator(
        Payoff(payoff.values() + svr.y), model, alpha, eligible, tol);
    report.per_vertex.push_back(std::move(svr));
    set.preimages.push_back(std::move(vp));
  }
  return {std::move(set), std::move(report)};
}

bool is_acceptable(const Payoff& payoff, const ScenarioModel& model,
                   const AlphaVector& alpha, const EligibleSpace& eligible,
                   const std::optional<MarketInstance>& market,
                   const Tolerances& tol) {
  validate_instance(model, payoff, alpha, eligible);
  const int d = payoff.dim();
  const int N = model.n_scenarios();
  Eigen::MatrixXd DP = alpha_inv_phat(model, alpha);  // z = DP zhat
  Eigen::MatrixXd Ihat = stacked_identity(d, N);
  Eigen::VectorXd xhat = stack_scenarios(payoff.values());

  LinearProgram lp;
  if (!market) {
    // zhat + xhat - Ihat (DP zhat) >= 0
    lp.c = Eigen::VectorXd::Zero(d * N);
    lp.A_ge = Eigen::MatrixXd::Identity(d * N, d * N) - Ihat * DP;
    lp.b_ge = -xhat;
    lp.A_eq.resize(0, d * N);
    lp.b_eq.resize(0);
    lp.nonneg.assign(d * N, true);
  } else {
    market->validate(d, N, tol);
    const int I = market->k0.n_generators();
    int jhat = 0;
    for (const auto& cone : market->kT) jhat += cone.n_generators();
    const int n = d * N + jhat + I;
    lp.c = Eigen::VectorXd::Zero(n);
    lp.A_eq = Eigen::MatrixXd::Zero(d * N, n);
    lp.A_eq.leftCols(d * N) =
        Eigen::MatrixXd::Identity(d * N, d * N) - Ihat * DP;
    int scol = d * N;
    for (int nsc = 0; nsc < N; ++nsc) {
      const Eigen::MatrixXd& An = market->kT[nsc].generators();
      lp.A_eq.block(nsc * d, scol, d, An.cols()) = -An;
      scol += static_cast<int>(An.cols());
    }
    lp.A_eq.rightCols(I) = -Ihat * market->k0.generators();
    lp.b_eq = -xhat;
    lp.A_ge.resize(0, n);
    lp.b_ge.resize(0);
    lp.nonneg.assign(n, true);
  }
  LpResult r = solve_lp(lp, tol);
  if (r.status == LpResult::Status::numerical_failure)
    throw std::runtime_error("is_acceptable: LP kernel numerical failure");
  return r.status == LpResult::Status::optimal;
}

bool risk_set_contains(const RiskSet& set, const Eigen::VectorXd& u,
                       const EligibleSpace& eligible, const Tolerances& tol) {
  (void)eligible;
  if (set.status == RiskSet::Status::empty) return false;
  if (set.status == RiskSet::Status::unbounded_below)
    throw std::runtime_error(
        "risk_set_contains: set has no vertex representation");
  const int d = static_cast<int>(u.size());
  const int nv = static_cast<int>(set.vertices.size());
  const Eigen::MatrixXd& R = set.recession.generators();
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(nv + R.cols());
  lp.A_eq.resize(d + 1, nv + R.cols());
  for (int j = 0; j < nv; ++j) lp.A_eq.col(j).head(d) = set.vertices[j];
  lp.A_eq.topRightCorner(d, R.cols()) = R;
  lp.A_eq.bottomRows(1).setZero();
  lp.A_eq.bottomRows(1).leftCols(nv).setOnes();
  lp.b_eq.resize(d + 1);
  lp.b_eq.head(d) = u;
  lp.b_eq(d) = 1.0;
  lp.A_ge.resize(0, nv + R.cols());
  lp.b_ge.resize(0);
  lp.nonneg.assign(nv + R.cols(), true);
  return solve_lp(lp, tol).status == LpResult::Status::optimal;
}

}  // namespace savar
