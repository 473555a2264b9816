#include "savar/lp.hpp"

#include <cmath>
#include <limits>

#include "savar/types.hpp"

namespace savar {

void LinearProgram::validate() const {
  const int n = n_vars();
  if (n == 0) throw validation_error("lp: empty objective");
  if (static_cast<int>(nonneg.size()) != n)
    throw validation_error("lp: nonneg pattern size mismatch");
  if (A_eq.rows() != b_eq.size() || (A_eq.rows() > 0 && A_eq.cols() != n))
    throw validation_error("lp: equality block dimension mismatch");
  if (A_ge.rows() != b_ge.size() || (A_ge.rows() > 0 && A_ge.cols() != n))
    throw validation_error("lp: inequality block dimension mismatch");
  if (!c.allFinite() || !A_eq.allFinite() || !b_eq.allFinite() ||
      !A_ge.allFinite() || !b_ge.allFinite())
    throw validation_error("lp: non-finite entry");
}

double LpResult::dual_value(const LinearProgram& lp) const {
  double v = 0.0;
  if (lp.b_eq.size() > 0) v += y_eq.dot(lp.b_eq);
  if (lp.b_ge.size() > 0) v += y_ge.dot(lp.b_ge);
  return v;
}

namespace {

// Dense tableau simplex on the standard form min c'x, Ax = b, x >= 0.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
          const Tolerances& tol)
      : A_(A), b_(b), tol_(tol), m_(static_cast<int>(A.rows())),
        n_(static_cast<int>(A.cols())) {}

  enum class Outcome { optimal, unbounded, iteration_limit, singular_basis };

  // Phase 1: returns residual infeasibility (phase-1 objective).
  // Afterwards redundant rows are removed and no artificial is basic.
  Outcome phase1(double* residual);
  Outcome phase2(const Eigen::VectorXd& cost);

  Eigen::VectorXd primal() const;                       // length n_
  Eigen::VectorXd duals(const Eigen::VectorXd& cost) const;  // length m_orig
  Eigen::VectorXd phase1_duals() const;                 // Farkas, length m_orig
  // Ray for the unbounded case discovered in phase 2.
  Eigen::VectorXd ray() const { return ray_; }

  const std::vector<int>& kept_rows() const { return row_ids_; }

 private:
  Outcome iterate(bool phase_one);
  bool refactorize();
  void drop_redundant_rows();

  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  Tolerances tol_;
  int m_, n_;

  // T_ = [B^{-1}(A | I_art) | B^{-1}b]; art columns sit at n_..n_+rows-1
  // (indexed by original row id, even after row deletion).
  Eigen::MatrixXd T_;
  Eigen::VectorXd red_;   // reduced costs over all columns
  double obj_ = 0.0;
  std::vector<int> basis_;    // column index per tableau row
  std::vector<int> row_ids_;  // original row index per tableau row
  Eigen::VectorXd cost_;      // current cost over all columns
  Eigen::VectorXd ray_;
  int total_pivots_ = 0;

  int rows() const { return static_cast<int>(basis_.size()); }
  int cols() const { return n_ + m_; }
  bool is_artificial(int j) const { return j >= n_; }
};

Tableau::Outcome Tableau::phase1(double* residual) {
  // Initial basis: artificials, rhs already >= 0 by construction.
  T_.resize(m_, cols() + 1);
  T_.leftCols(n_) = A_;
  T_.middleCols(n_, m_) = Eigen::MatrixXd::Identity(m_, m_);
  T_.rightCols(1) = b_;
  basis_.resize(m_);
  row_ids_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    basis_[i] = n_ + i;
    row_ids_[i] = i;
  }
  cost_ = Eigen::VectorXd::Zero(cols());
  cost_.tail(m_).setOnes();
  red_ = cost_ - T_.leftCols(cols()).colwise().sum().transpose();
  red_.tail(m_).setZero();
  obj_ = b_.sum();

  Outcome o = iterate(true);
  if (o != Outcome::optimal) return o;
  *residual = obj_;
  if (obj_ <= tol_.feasibility * std::max(1.0, b_.lpNorm<Eigen::Infinity>())) {
    // Clean the tableau before pivoting artificials out: degenerate phase-1
    // runs leave drift that drop_redundant_rows must not mistake for pivots.
    if (!refactorize()) return Outcome::singular_basis;
    drop_redundant_rows();
  }
  return Outcome::optimal;
}

void Tableau::drop_redundant_rows() {
  // Pivot basic artificials onto real columns; delete rows where impossible.
  for (int i = rows() - 1; i >= 0; --i) {
    if (!is_artificial(basis_[i])) continue;
    int piv = -1;
    double best = 1e-7;
    for (int j = 0; j < n_; ++j) {
      if (std::abs(T_(i, j)) > best) { best = std::abs(T_(i, j)); piv = j; }
    }
    if (piv >= 0) {
      double p = T_(i, piv);
      T_.row(i) /= p;
      for (int r = 0; r < rows(); ++r) {
        if (r == i) continue;
        double f = T_(r, piv);
        if (f != 0.0) T_.row(r) -= f * T_.row(i);
      }
      basis_[i] = piv;
    } else {
      // Redundant row: remove it.
      int last = rows() - 1;
      if (i != last) {
        T_.row(i) = T_.row(last);
        basis_[i] = basis_[last];
        row_ids_[i] = row_ids_[last];
      }
      T_.conservativeResize(last, Eigen::NoChange);
      basis_.pop_back();
      row_ids_.pop_back();
    }
  }
}

Tableau::Outcome Tableau::phase2(const Eigen::VectorXd& cost) {
  cost_ = Eigen::VectorXd::Zero(cols());
  cost_.head(n_) = cost;
  if (!refactorize()) return Outcome::singular_basis;
  return iterate(false);
}

bool Tableau::refactorize() {
  const int mr = rows();
  auto basis_matrix = [&]() {
    Eigen::MatrixXd B(mr, mr);
    for (int i = 0; i < mr; ++i) {
      int j = basis_[i];
      for (int r = 0; r < mr; ++r) {
        if (is_artificial(j))
          B(r, i) = (row_ids_[r] == j - n_) ? 1.0 : 0.0;
        else
          B(r, i) = A_(row_ids_[r], j);
      }
    }
    return B;
  };
  Eigen::MatrixXd B = basis_matrix();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  lu.setThreshold(1e-11);
  bool repaired = false;
  if (lu.rank() < mr) {
    repaired = true;
    // Degenerate pivots on drift noise can leave a dependent column set.
    // Repair: keep a maximal independent subset, fill the remaining
    // positions with artificial columns spanning the orthogonal complement.
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    qr.setThreshold(1e-9);
    const int r = static_cast<int>(qr.rank());
    std::vector<char> keep(mr, 0);
    for (int k = 0; k < r; ++k)
      keep[qr.colsPermutation().indices()(k)] = 1;
    Eigen::MatrixXd kept(mr, r);
    for (int i = 0, k = 0; i < mr; ++i)
      if (keep[i]) kept.col(k++) = B.col(i);
    Eigen::HouseholderQR<Eigen::MatrixXd> oqr(kept);
    Eigen::MatrixXd Q =
        oqr.householderQ() * Eigen::MatrixXd::Identity(mr, mr);
    Eigen::MatrixXd comp = Q.rightCols(mr - r).transpose();  // (mr-r) x mr
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> cqr(comp);
    if (static_cast<int>(cqr.rank()) < mr - r) return false;
    std::vector<int> fill_rows(mr - r);
    for (int k = 0; k < mr - r; ++k)
      fill_rows[k] = cqr.colsPermutation().indices()(k);
    for (int i = 0, k = 0; i < mr; ++i)
      if (!keep[i]) basis_[i] = n_ + row_ids_[fill_rows[k++]];
    B = basis_matrix();
    lu.compute(B);
    if (lu.rank() < mr) return false;
  }

  Eigen::MatrixXd rhs(mr, cols() + 1);
  for (int j = 0; j < n_; ++j)
    for (int r = 0; r < mr; ++r) rhs(r, j) = A_(row_ids_[r], j);
  rhs.middleCols(n_, m_).setZero();
  for (int r = 0; r < mr; ++r) rhs(r, n_ + row_ids_[r]) = 1.0;
  for (int r = 0; r < mr; ++r) rhs(r, cols()) = b_(row_ids_[r]);
  T_ = lu.solve(rhs);

  // Guard: a repaired basis is only usable if the point it represents is
  // still primal-feasible (and, in phase 2, free of artificial mass).
  const double scale = std::max(1.0, b_.lpNorm<Eigen::Infinity>());
  const bool phase_two = m_ == 0 || cost_(n_) == 0.0;
  for (int i = 0; i < rows(); ++i) {
    double v = T_(i, cols());
    if (v < -1e-7 * scale) return false;
    if (phase_two && is_artificial(basis_[i]) && std::abs(v) > 1e-7 * scale)
      return false;
  }
  // A basic artificial in phase 2 would corrupt ray certificates: pivot it
  // onto a real column (its value is ~0) or delete the now-redundant row.
  if (repaired && phase_two) drop_redundant_rows();

  Eigen::VectorXd cB(rows());
  for (int i = 0; i < rows(); ++i) cB(i) = cost_(basis_[i]);
  red_ = cost_ - (cB.transpose() * T_.leftCols(cols())).transpose();
  obj_ = cB.dot(T_.col(cols()));
  return true;
}

Tableau::Outcome Tableau::iterate(bool phase_one) {
  const double rtol = 1e-9;
  const int max_iters = 50 * (rows() + cols());
  bool bland = false;
  int stall = 0;
  int refactor_budget = 6;
  int since_refactor = 0;
  // Verdicts reached on incrementally updated data are confirmed against a
  // fresh factorization: drift in red_ must not decide optimal/unbounded.
  auto verify = [&]() {
    if (since_refactor == 0) return true;
    if (!refactorize() && --refactor_budget < 0) return true;
    since_refactor = 0;
    return false;
  };

  for (int it = 0; it < max_iters; ++it) {
    if (since_refactor >= 200) {
      if (!refactorize()) {
        if (--refactor_budget < 0) return Outcome::singular_basis;
      }
      since_refactor = 0;
    }
    // Pricing.
    int enter = -1;
    if (bland) {
      for (int j = 0; j < cols(); ++j) {
        if (!phase_one && is_artificial(j)) continue;
        if (red_(j) < -rtol) { enter = j; break; }
      }
    } else {
      double best = -rtol;
      for (int j = 0; j < cols(); ++j) {
        if (!phase_one && is_artificial(j)) continue;
        if (red_(j) < best) { best = red_(j); enter = j; }
      }
    }
    if (enter < 0) {
      if (!verify()) continue;
      return Outcome::optimal;
    }

    // Ratio test; ties go to the largest pivot for stability (to the
    // smallest basis index under Bland's rule, which needs it to be exact).
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows(); ++i) {
      double a = T_(i, enter);
      if (a <= 1e-9) continue;
      double ratio = T_(i, cols()) / a;
      bool better = ratio < best_ratio - 1e-12;
      if (!better && ratio < best_ratio + 1e-12 && leave >= 0) {
        if (bland)
          better = basis_[i] < basis_[leave];
        else
          better = a > T_(leave, enter);
      }
      if (better) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave < 0) {
      if (!verify()) continue;
      // Unbounded: record the improving ray in standard coordinates.
      // A certificate moving an artificial column is numerical garbage.
      if (!phase_one) {
        bool tainted = false;
        for (int i = 0; i < rows(); ++i)
          if (is_artificial(basis_[i]) && std::abs(T_(i, enter)) > 1e-9)
            tainted = true;
        if (tainted) return Outcome::singular_basis;
      }
      ray_ = Eigen::VectorXd::Zero(cols());
      ray_(enter) = 1.0;
      for (int i = 0; i < rows(); ++i) ray_(basis_[i]) = -T_(i, enter);
      return Outcome::unbounded;
    }
    if (best_ratio < 1e-12) {
      if (++stall > rows() + 10) bland = true;
    } else {
      stall = 0;
    }

    // Pivot.
    double p = T_(leave, enter);
    T_.row(leave) /= p;
    for (int r = 0; r < rows(); ++r) {
      if (r == leave) continue;
      double f = T_(r, enter);
      if (f != 0.0) T_.row(r) -= f * T_.row(leave);
    }
    double rc = red_(enter);
    red_ -= rc * T_.row(leave).head(cols()).transpose();
    obj_ += rc * T_(leave, cols());
    basis_[leave] = enter;
    ++total_pivots_;
    ++since_refactor;
  }
  return Outcome::iteration_limit;
}

Eigen::VectorXd Tableau::primal() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < rows(); ++i)
    if (!is_artificial(basis_[i])) x(basis_[i]) = T_(i, cols());
  return x;
}

Eigen::VectorXd Tableau::duals(const Eigen::VectorXd& cost) const {
  // y_r = -reduced cost of the artificial column of row r (cost 0 there).
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
  (void)cost;
  for (int r = 0; r < m_; ++r) y(r) = -red_(n_ + r);
  return y;
}

Eigen::VectorXd Tableau::phase1_duals() const {
  // Phase-1 artificial cost is 1: reduced = 1 - y_r.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
  for (int r = 0; r < m_; ++r) y(r) = 1.0 - red_(n_ + r);
  return y;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const Tolerances& tol) {
  lp.validate();
  const int n = lp.n_vars();
  const int me = static_cast<int>(lp.A_eq.rows());
  const int mg = static_cast<int>(lp.A_ge.rows());
  const int m = me + mg;

  // Standard-form columns: one per nonneg var, a (+,-) pair per free var,
  // one surplus per >= row.
  std::vector<int> col_of(n), neg_col_of(n, -1);
  int ns = 0;
  for (int i = 0; i < n; ++i) {
    col_of[i] = ns++;
    if (!lp.nonneg[i]) neg_col_of[i] = ns++;
  }
  const int surplus0 = ns;
  ns += mg;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, ns);
  Eigen::VectorXd b(m);
  Eigen::VectorXd sigma = Eigen::VectorXd::Ones(m);  // row sign flips
  for (int r = 0; r < m; ++r) {
    Eigen::RowVectorXd row =
        r < me ? lp.A_eq.row(r) : lp.A_ge.row(r - me);
    double rhs = r < me ? lp.b_eq(r) : lp.b_ge(r - me);
    for (int i = 0; i < n; ++i) {
      A(r, col_of[i]) = row(i);
      if (neg_col_of[i] >= 0) A(r, neg_col_of[i]) = -row(i);
    }
    if (r >= me) A(r, surplus0 + (r - me)) = -1.0;
    b(r) = rhs;
    if (rhs < 0) {
      A.row(r) = -A.row(r);
      b(r) = -rhs;
      sigma(r) = -1.0;
    }
  }

  Tableau tab(A, b, tol);
  LpResult res;

  double residual = 0.0;
  auto o1 = tab.phase1(&residual);
  if (o1 == Tableau::Outcome::iteration_limit ||
      o1 == Tableau::Outcome::singular_basis) {
    res.status = LpResult::Status::numerical_failure;
    return res;
  }
  double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
  if (residual > tol.feasibility * scale) {
    res.status = LpResult::Status::infeasible;
    Eigen::VectorXd y = tab.phase1_duals();
    Eigen::VectorXd f = sigma.cwiseProduct(y);
    res.farkas_eq = f.head(me);
    res.farkas_ge = f.tail(mg);
    return res;
  }

  Eigen::VectorXd cs = Eigen::VectorXd::Zero(ns);
  for (int i = 0; i < n; ++i) {
    cs(col_of[i]) = lp.c(i);
    if (neg_col_of[i] >= 0) cs(neg_col_of[i]) = -lp.c(i);
  }
  auto o2 = tab.phase2(cs);
  if (o2 == Tableau::Outcome::iteration_limit ||
      o2 == Tableau::Outcome::singular_basis) {
    res.status = LpResult::Status::numerical_failure;
    return res;
  }
  if (o2 == Tableau::Outcome::unbounded) {
    res.status = LpResult::Status::unbounded;
    Eigen::VectorXd rs = tab.ray();
    res.ray = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      res.ray(i) = rs(col_of[i]);
      if (neg_col_of[i] >= 0) res.ray(i) -= rs(neg_col_of[i]);
    }
    return res;
  }

  res.status = LpResult::Status::optimal;
  Eigen::VectorXd xs = tab.primal();
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    res.x(i) = xs(col_of[i]);
    if (neg_col_of[i] >= 0) res.x(i) -= xs(neg_col_of[i]);
  }
  res.value = lp.c.dot(res.x);

  Eigen::VectorXd y = sigma.cwiseProduct(tab.duals(cs));
  res.y_eq = y.head(me);
  res.y_ge = y.tail(mg);
  return res;
}

}  // namespace savar
