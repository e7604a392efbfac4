#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace rwb {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// minimize c^T x  subject to  A x = b,  0 <= x <= upper.
struct LpProblem {
  std::size_t num_vars = 0;
  std::vector<double> objective;  // size num_vars
  std::vector<double> matrix;     // row-major, rhs.size() x num_vars
  std::vector<double> rhs;
  std::vector<double> upper;      // empty, or size num_vars with kInf for "no bound"

  explicit LpProblem(std::size_t vars = 0) : num_vars(vars), objective(vars, 0.0) {}

  std::size_t num_rows() const noexcept { return rhs.size(); }
  /// Appends an equality row; returns its index.
  std::size_t add_row(std::span<const double> coefficients, double b);
  /// Appends a sparse equality row given (var, coefficient) pairs.
  std::size_t add_sparse_row(std::span<const std::pair<std::size_t, double>> entries, double b);
  double at(std::size_t row, std::size_t col) const { return matrix[row * num_vars + col]; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Indices of basic structural columns (slack/auxiliary columns excluded).
  std::vector<std::size_t> basis;
  /// Row duals y with c - A^T y >= 0 on the optimal basis (rows dropped as redundant get 0).
  std::vector<double> duals;
  double max_residual = 0.0;
  std::size_t iterations = 0;
};

/// Dense two-phase tableau simplex with Bland's rule. Deterministic.
/// Throws Error(NUMERICAL_BREAKDOWN) when residuals stay out of tolerance after a
/// refactorization from the original data.
LpSolution solve_lp(const LpProblem& problem);

/// Plain-text fixed-format listing, one coefficient per line, for external checking.
void write_lp_listing(std::ostream& os, const LpProblem& problem);

/// Balanced transportation problem. Arcs flagged in `forbidden` may carry no flow.
struct TransportationProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> cost;               // row-major rows x cols; entries >= 0
  std::vector<std::uint8_t> forbidden;    // same shape; 1 = arc unusable
  std::vector<double> supplies;           // size rows
  std::vector<double> demands;            // size cols

  /// Builds a problem whose infinite cost entries become forbidden arcs.
  static TransportationProblem from_costs(std::size_t rows, std::size_t cols,
                                          std::vector<double> cost, std::vector<double> supplies,
                                          std::vector<double> demands);

  double c(std::size_t i, std::size_t j) const { return cost[i * cols + j]; }
  bool is_forbidden(std::size_t i, std::size_t j) const { return forbidden[i * cols + j] != 0; }
};

struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> flow;  // row-major

  double at(std::size_t i, std::size_t j) const { return flow[i * cols + j]; }
  double row_sum(std::size_t i) const;
  double col_sum(std::size_t j) const;
  double total() const;
};

struct TransportResult {
  TransportPlan plan;
  double cost = 0.0;
};

/// Successive shortest paths with Johnson potentials. Throws INFEASIBLE_ARCS when forbidden
/// arcs disconnect remaining supply from remaining demand, UNBALANCED when totals differ.
TransportResult solve_transportation(const TransportationProblem& problem);

/// The same transportation problem written as an LpProblem (used for cross-checks).
LpProblem transportation_as_lp(const TransportationProblem& problem);

}  // namespace rwb
