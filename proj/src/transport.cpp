#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "rwb/error.hpp"
#include "rwb/lp.hpp"

namespace rwb {

TransportationProblem TransportationProblem::from_costs(std::size_t rows, std::size_t cols,
                                                        std::vector<double> cost,
                                                        std::vector<double> supplies,
                                                        std::vector<double> demands) {
  if (cost.size() != rows * cols || supplies.size() != rows || demands.size() != cols)
    throw Error(ErrorCode::InvalidInput, "transportation shapes do not match");
  TransportationProblem t;
  t.rows = rows;
  t.cols = cols;
  t.forbidden.assign(rows * cols, 0);
  for (std::size_t e = 0; e < cost.size(); ++e) {
    if (std::isinf(cost[e]) && cost[e] > 0) {
      t.forbidden[e] = 1;
      cost[e] = 0.0;
    }
  }
  t.cost = std::move(cost);
  t.supplies = std::move(supplies);
  t.demands = std::move(demands);
  return t;
}

double TransportPlan::row_sum(std::size_t i) const {
  double s = 0.0;
  for (std::size_t j = 0; j < cols; ++j) s += at(i, j);
  return s;
}

double TransportPlan::col_sum(std::size_t j) const {
  double s = 0.0;
  for (std::size_t i = 0; i < rows; ++i) s += at(i, j);
  return s;
}

double TransportPlan::total() const {
  double s = 0.0;
  for (double f : flow) s += f;
  return s;
}

namespace {

void check_problem(const TransportationProblem& t) {
  if (t.cost.size() != t.rows * t.cols || t.supplies.size() != t.rows ||
      t.demands.size() != t.cols)
    throw Error(ErrorCode::InvalidInput, "transportation shapes do not match");
  if (!t.forbidden.empty() && t.forbidden.size() != t.cost.size())
    throw Error(ErrorCode::InvalidInput, "forbidden mask shape does not match");
  for (double c : t.cost)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw Error(ErrorCode::InvalidInput, "arc costs must be finite and nonnegative");
  double s = 0.0, d = 0.0;
  for (double v : t.supplies) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "bad supply");
    s += v;
  }
  for (double v : t.demands) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidInput, "bad demand");
    d += v;
  }
  if (std::abs(s - d) > 1e-9 * std::max(1.0, std::max(s, d)))
    throw Error(ErrorCode::Unbalanced, "supplies total " + std::to_string(s) + " but demands total " +
                                           std::to_string(d));
}

}  // namespace

TransportResult solve_transportation(const TransportationProblem& t) {
  check_problem(t);
  const std::size_t R = t.rows, C = t.cols;
  const bool masked = !t.forbidden.empty();
  auto usable = [&](std::size_t i, std::size_t j) { return !masked || t.forbidden[i * C + j] == 0; };

  double total = 0.0;
  for (double v : t.supplies) total += v;
  const double eps = 1e-12 * std::max(1.0, total);

  std::vector<double> supply = t.supplies, demand = t.demands;
  std::vector<double> flow(R * C, 0.0);
  std::vector<double> pu(R, 0.0), pv(C, 0.0);
  std::vector<double> du(R), dv(C);
  std::vector<char> done_u(R), done_v(C);
  std::vector<std::size_t> parent_v(C), parent_u(R);  // parent row of a col / parent col of a row
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

  auto remaining = [&](const std::vector<double>& v) {
    for (double x : v)
      if (x > eps) return true;
    return false;
  };

  while (remaining(supply) && remaining(demand)) {
    std::fill(du.begin(), du.end(), inf);
    std::fill(dv.begin(), dv.end(), inf);
    std::fill(done_u.begin(), done_u.end(), 0);
    std::fill(done_v.begin(), done_v.end(), 0);
    std::fill(parent_u.begin(), parent_u.end(), none);
    for (std::size_t i = 0; i < R; ++i)
      if (supply[i] > eps) du[i] = 0.0;

    // heap keyed on (distance, column flag, index): rows before columns on ties, then lowest index
    using Key = std::tuple<double, int, std::size_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
    for (std::size_t i = 0; i < R; ++i)
      if (du[i] == 0.0) heap.emplace(0.0, 0, i);
    std::size_t sink = none;
    double dstar = 0.0;
    while (!heap.empty()) {
      const auto [dist, col, bi] = heap.top();
      heap.pop();
      if (col == 0) {
        if (done_u[bi] || dist > du[bi]) continue;
        done_u[bi] = 1;
        const std::size_t i = bi;
        for (std::size_t j = 0; j < C; ++j) {
          if (done_v[j] || !usable(i, j)) continue;
          double rc = t.cost[i * C + j] + pu[i] - pv[j];
          if (rc < 0.0) rc = 0.0;
          if (du[i] + rc < dv[j]) {
            dv[j] = du[i] + rc;
            parent_v[j] = i;
            heap.emplace(dv[j], 1, j);
          }
        }
      } else {
        if (done_v[bi] || dist > dv[bi]) continue;
        done_v[bi] = 1;
        const std::size_t j = bi;
        if (demand[j] > eps) {
          sink = j;
          dstar = dv[j];
          break;
        }
        for (std::size_t i = 0; i < R; ++i) {
          if (done_u[i] || flow[i * C + j] <= eps) continue;
          double rc = -t.cost[i * C + j] + pv[j] - pu[i];
          if (rc < 0.0) rc = 0.0;
          if (dv[j] + rc < du[i]) {
            du[i] = dv[j] + rc;
            parent_u[i] = j;
            heap.emplace(du[i], 0, i);
          }
        }
      }
    }
    if (sink == none)
      throw Error(ErrorCode::InfeasibleArcs, "forbidden arcs disconnect remaining supply from demand");

    for (std::size_t i = 0; i < R; ++i) pu[i] += std::min(du[i], dstar);
    for (std::size_t j = 0; j < C; ++j) pv[j] += std::min(dv[j], dstar);

    // bottleneck along the path sink <- row <- col <- ... <- source row
    double delta = demand[sink];
    std::size_t j = sink;
    std::size_t i = parent_v[j];
    while (true) {
      if (parent_u[i] == none) {
        delta = std::min(delta, supply[i]);
        break;
      }
      const std::size_t jj = parent_u[i];
      delta = std::min(delta, flow[i * C + jj]);
      j = jj;
      i = parent_v[j];
    }
    j = sink;
    i = parent_v[j];
    demand[sink] -= delta;
    while (true) {
      flow[i * C + j] += delta;
      if (parent_u[i] == none) {
        supply[i] -= delta;
        break;
      }
      const std::size_t jj = parent_u[i];
      flow[i * C + jj] -= delta;
      if (flow[i * C + jj] < eps) flow[i * C + jj] = 0.0;
      j = jj;
      i = parent_v[j];
    }
    if (supply[i] < eps) supply[i] = 0.0;
    if (demand[sink] < eps) demand[sink] = 0.0;
  }

  TransportResult res;
  res.plan.rows = R;
  res.plan.cols = C;
  res.plan.flow = std::move(flow);
  for (std::size_t e = 0; e < R * C; ++e) res.cost += res.plan.flow[e] * t.cost[e];

  // feasibility is asserted on every solve
  const double tol = 1e-9 * std::max(1.0, total);
  for (std::size_t r = 0; r < R; ++r)
    if (std::abs(res.plan.row_sum(r) - t.supplies[r]) > tol)
      throw Error(ErrorCode::NumericalBreakdown, "transport row marginal violated");
  for (std::size_t c = 0; c < C; ++c)
    if (std::abs(res.plan.col_sum(c) - t.demands[c]) > tol)
      throw Error(ErrorCode::NumericalBreakdown, "transport column marginal violated");
  if (masked)
    for (std::size_t e = 0; e < R * C; ++e)
      if (t.forbidden[e] && res.plan.flow[e] != 0.0)
        throw Error(ErrorCode::Internal, "flow on a forbidden arc");
  return res;
}

LpProblem transportation_as_lp(const TransportationProblem& t) {
  check_problem(t);
  const std::size_t R = t.rows, C = t.cols;
  LpProblem lp(R * C);
  lp.objective = t.cost;
  lp.upper.assign(R * C, kInf);
  if (!t.forbidden.empty())
    for (std::size_t e = 0; e < R * C; ++e)
      if (t.forbidden[e]) lp.upper[e] = 0.0;
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t i = 0; i < R; ++i) {
    row.clear();
    for (std::size_t j = 0; j < C; ++j) row.emplace_back(i * C + j, 1.0);
    lp.add_sparse_row(row, t.supplies[i]);
  }
  for (std::size_t j = 0; j < C; ++j) {
    row.clear();
    for (std::size_t i = 0; i < R; ++i) row.emplace_back(i * C + j, 1.0);
    lp.add_sparse_row(row, t.demands[j]);
  }
  return lp;
}

}  // namespace rwb
