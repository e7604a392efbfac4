#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "rwb/error.hpp"
#include "rwb/lp.hpp"

namespace rwb {

std::size_t LpProblem::add_row(std::span<const double> coefficients, double b) {
  if (coefficients.size() != num_vars) throw Error(ErrorCode::InvalidInput, "row length differs");
  matrix.insert(matrix.end(), coefficients.begin(), coefficients.end());
  rhs.push_back(b);
  return rhs.size() - 1;
}

std::size_t LpProblem::add_sparse_row(std::span<const std::pair<std::size_t, double>> entries,
                                      double b) {
  const std::size_t base = matrix.size();
  matrix.resize(base + num_vars, 0.0);
  for (auto [col, v] : entries) {
    if (col >= num_vars) throw Error(ErrorCode::InvalidInput, "column index out of range");
    matrix[base + col] += v;
  }
  rhs.push_back(b);
  return rhs.size() - 1;
}

void write_lp_listing(std::ostream& os, const LpProblem& p) {
  os << "LP " << p.num_rows() << " " << p.num_vars << "\n";
  os << std::scientific << std::setprecision(17);
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    os << "C " << std::setw(8) << j << " " << std::setw(26) << p.objective[j];
    double u = p.upper.empty() ? kInf : p.upper[j];
    if (std::isinf(u))
      os << "                       INF\n";
    else
      os << " " << std::setw(25) << u << "\n";
  }
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    for (std::size_t j = 0; j < p.num_vars; ++j) {
      double a = p.at(i, j);
      if (a != 0.0) os << "A " << std::setw(8) << i << " " << std::setw(8) << j << " " << std::setw(26) << a << "\n";
    }
    os << "B " << std::setw(8) << i << " " << std::setw(26) << p.rhs[i] << "\n";
  }
  os << "END\n";
}

namespace {

// Standard form: min c^T x, A x = b (b >= 0), x >= 0. Upper bounds become rows with slacks.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t cols = 0;       // structural + bound slacks
  std::size_t original_rows = 0;
  std::size_t original_vars = 0;
  std::vector<double> a;      // rows x cols
  std::vector<double> b;
  std::vector<double> c;
  std::vector<double> row_sign;
};

StandardForm standardize(const LpProblem& p) {
  StandardForm s;
  s.original_rows = p.num_rows();
  s.original_vars = p.num_vars;
  std::vector<std::size_t> bounded;
  if (!p.upper.empty()) {
    if (p.upper.size() != p.num_vars) throw Error(ErrorCode::InvalidInput, "upper bound size");
    for (std::size_t j = 0; j < p.num_vars; ++j)
      if (std::isfinite(p.upper[j])) bounded.push_back(j);
  }
  s.rows = p.num_rows() + bounded.size();
  s.cols = p.num_vars + bounded.size();
  s.a.assign(s.rows * s.cols, 0.0);
  s.b.assign(s.rows, 0.0);
  s.c.assign(s.cols, 0.0);
  s.row_sign.assign(s.rows, 1.0);
  for (std::size_t j = 0; j < p.num_vars; ++j) s.c[j] = p.objective[j];
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    for (std::size_t j = 0; j < p.num_vars; ++j) s.a[i * s.cols + j] = p.at(i, j);
    s.b[i] = p.rhs[i];
  }
  for (std::size_t k = 0; k < bounded.size(); ++k) {
    const std::size_t i = p.num_rows() + k;
    s.a[i * s.cols + bounded[k]] = 1.0;
    s.a[i * s.cols + p.num_vars + k] = 1.0;
    s.b[i] = p.upper[bounded[k]];
  }
  for (std::size_t i = 0; i < s.rows; ++i) {
    if (s.b[i] < 0.0) {
      s.row_sign[i] = -1.0;
      s.b[i] = -s.b[i];
      for (std::size_t j = 0; j < s.cols; ++j) s.a[i * s.cols + j] = -s.a[i * s.cols + j];
    }
  }
  return s;
}

class Tableau {
 public:
  explicit Tableau(const StandardForm& sf)
      : m_(sf.rows), n_(sf.cols), width_(sf.cols + sf.rows + 1), t_(m_ * width_, 0.0),
        basis_(m_), rc_(width_ - 1, 0.0) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sf.a[i * n_ + j];
      at(i, n_ + i) = 1.0;
      at(i, width_ - 1) = sf.b[i];
      basis_[i] = n_ + i;
    }
    double scale = 1.0;
    for (double v : sf.a) scale = std::max(scale, std::abs(v));
    pivot_eps_ = 1e-9 * scale;
  }

  double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
  double rhs(std::size_t i) const { return at(i, width_ - 1); }
  std::size_t rows() const { return m_; }
  std::size_t structural() const { return n_; }
  const std::vector<std::size_t>& basis() const { return basis_; }
  bool is_artificial(std::size_t col) const { return col >= n_; }

  // Reduced costs and objective for costs `c` over all columns (artificials included).
  void price(const std::vector<double>& c) {
    objective_ = 0.0;
    for (std::size_t i = 0; i < m_; ++i) objective_ += c[basis_[i]] * rhs(i);
    for (std::size_t j = 0; j + 1 < width_; ++j) {
      double r = c[j];
      for (std::size_t i = 0; i < m_; ++i) r -= c[basis_[i]] * at(i, j);
      rc_[j] = r;
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    const double inv = 1.0 / at(r, col);
    double* prow = &t_[r * width_];
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[col] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = at(i, col);
      if (f == 0.0) continue;
      double* row = &t_[i * width_];
      for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[col] = 0.0;
    }
    const double f = rc_[col];
    if (f != 0.0) {
      for (std::size_t j = 0; j + 1 < width_; ++j) rc_[j] -= f * prow[j];
      objective_ += f * prow[width_ - 1];
      rc_[col] = 0.0;
    }
    basis_[r] = col;
    ++iterations_;
  }

  enum class Outcome { Optimal, Unbounded };

  // Bland's rule: lowest-index improving column, ratio ties broken by lowest basic index.
  Outcome run(double rc_eps, std::size_t max_iter) {
    while (true) {
      if (iterations_ > max_iter)
        throw Error(ErrorCode::NumericalBreakdown, "simplex iteration limit reached");
      std::size_t enter = width_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (rc_[j] < -rc_eps) {
          enter = j;
          break;
        }
      }
      if (enter == width_) return Outcome::Optimal;
      std::size_t leave = m_;
      double best = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        double a = at(i, enter);
        if (a <= pivot_eps_) continue;
        double ratio = rhs(i) / a;
        if (leave == m_ || ratio < best - 1e-12 * std::max(1.0, std::abs(best)) ||
            (std::abs(ratio - best) <= 1e-12 * std::max(1.0, std::abs(best)) &&
             basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return Outcome::Unbounded;
      pivot(leave, enter);
    }
  }

  // Drive zero-valued artificials out of the basis; rows where that is impossible are redundant.
  void expel_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      std::size_t col = n_;
      double best = pivot_eps_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(at(i, j)) > best) {
          best = std::abs(at(i, j));
          col = j;
          break;
        }
      }
      if (col < n_) pivot(i, col);
    }
  }

  double objective() const { return objective_; }
  std::size_t iterations() const { return iterations_; }

 private:
  std::size_t m_, n_, width_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<double> rc_;
  double objective_ = 0.0;
  double pivot_eps_ = 1e-9;
  std::size_t iterations_ = 0;
};

double residual_of(const LpProblem& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    double r = -p.rhs[i];
    for (std::size_t j = 0; j < p.num_vars; ++j) r += p.at(i, j) * x[j];
    worst = std::max(worst, std::abs(r));
  }
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    worst = std::max(worst, -x[j]);
    if (!p.upper.empty() && std::isfinite(p.upper[j])) worst = std::max(worst, x[j] - p.upper[j]);
  }
  return worst;
}

// Recompute the basic solution (and duals) directly from the original data.
void refactor(const StandardForm& sf, const std::vector<std::size_t>& basis, std::vector<double>& xs,
              std::vector<double>& ys) {
  const std::size_t m = sf.rows;
  Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  Eigen::VectorXd cb(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t col = basis[k];
    if (col < sf.cols) {
      for (std::size_t i = 0; i < m; ++i) bm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = sf.a[i * sf.cols + col];
      cb(static_cast<Eigen::Index>(k)) = sf.c[col];
    } else {
      bm(static_cast<Eigen::Index>(col - sf.cols), static_cast<Eigen::Index>(k)) = 1.0;
      cb(static_cast<Eigen::Index>(k)) = 0.0;
    }
  }
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(sf.b.data(), static_cast<Eigen::Index>(m));
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);
  Eigen::VectorXd xb = lu.solve(b);
  Eigen::VectorXd y = lu.transpose().solve(cb);
  xs.assign(sf.cols, 0.0);
  for (std::size_t k = 0; k < m; ++k)
    if (basis[k] < sf.cols) xs[basis[k]] = xb(static_cast<Eigen::Index>(k));
  ys.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) ys[i] = y(static_cast<Eigen::Index>(i));
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  if (problem.objective.size() != problem.num_vars ||
      problem.matrix.size() != problem.num_rows() * problem.num_vars)
    throw Error(ErrorCode::InvalidInput, "inconsistent LP dimensions");
  for (double v : problem.rhs)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "non-finite right-hand side");

  const StandardForm sf = standardize(problem);
  Tableau tab(sf);
  const std::size_t max_iter = 200 * (sf.rows + sf.cols) + 1000;

  double bnorm = 0.0;
  for (double v : problem.rhs) bnorm = std::max(bnorm, std::abs(v));
  double cnorm = 1.0;
  for (double v : sf.c) cnorm = std::max(cnorm, std::abs(v));

  LpSolution sol;

  // Phase 1: minimize the sum of artificials.
  std::vector<double> phase1(sf.cols + sf.rows, 0.0);
  for (std::size_t i = 0; i < sf.rows; ++i) phase1[sf.cols + i] = 1.0;
  tab.price(phase1);
  tab.run(1e-11 * std::max(1.0, bnorm), max_iter);
  if (tab.objective() > 1e-8 * (1.0 + bnorm)) {
    sol.status = LpStatus::Infeasible;
    sol.iterations = tab.iterations();
    return sol;
  }
  tab.expel_artificials();

  // Phase 2 on the original costs; artificials never re-enter (run() only scans structurals).
  std::vector<double> phase2(sf.cols + sf.rows, 0.0);
  std::copy(sf.c.begin(), sf.c.end(), phase2.begin());
  tab.price(phase2);
  if (tab.run(1e-10 * cnorm, max_iter) == Tableau::Outcome::Unbounded) {
    sol.status = LpStatus::Unbounded;
    sol.iterations = tab.iterations();
    return sol;
  }

  std::vector<double> xs(sf.cols, 0.0);
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] < sf.cols) xs[tab.basis()[i]] = tab.rhs(i);
  sol.x.assign(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(problem.num_vars));
  const double limit = 1e-8 * (1.0 + bnorm);
  sol.max_residual = residual_of(problem, sol.x);

  std::vector<double> ys;
  refactor(sf, tab.basis(), xs, ys);
  if (sol.max_residual > limit) {
    sol.x.assign(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(problem.num_vars));
    for (double& v : sol.x)
      if (v < 0.0 && v > -1e-10) v = 0.0;
    sol.max_residual = residual_of(problem, sol.x);
    if (sol.max_residual > limit)
      throw Error(ErrorCode::NumericalBreakdown,
                  "residual " + std::to_string(sol.max_residual) + " after refactorization");
  }
  for (double& v : sol.x)
    if (v < 0.0) v = 0.0;

  sol.duals.assign(problem.num_rows(), 0.0);
  for (std::size_t i = 0; i < problem.num_rows(); ++i) sol.duals[i] = ys[i] * sf.row_sign[i];
  for (std::size_t col : tab.basis())
    if (col < problem.num_vars) sol.basis.push_back(col);
  std::sort(sol.basis.begin(), sol.basis.end());
  sol.objective = 0.0;
  for (std::size_t j = 0; j < problem.num_vars; ++j) sol.objective += problem.objective[j] * sol.x[j];
  sol.status = LpStatus::Optimal;
  sol.iterations = tab.iterations();
  return sol;
}

}  // namespace rwb
