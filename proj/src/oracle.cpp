#include "rwb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "rwb/ot.hpp"

namespace rwb {

double integral_scale(const std::vector<double>& values, double max_denominator) {
  for (int D = 1; D <= static_cast<int>(max_denominator); ++D) {
    bool ok = true;
    for (double v : values) {
      const double s = v * D;
      if (std::abs(s - std::round(s)) > 1e-9 * std::max(1.0, std::abs(s))) {
        ok = false;
        break;
      }
    }
    if (ok) return D;
  }
  throw Error(ErrorCode::NonIntegral, "no common denominator within the oracle budget");
}

std::size_t count_allocations(const std::vector<long long>& w, long long z, std::size_t limit) {
  // ways[t] = number of allocations of total t over the points seen so far
  std::vector<std::size_t> ways(static_cast<std::size_t>(z) + 1, 0);
  ways[0] = 1;
  for (long long wi : w) {
    std::vector<std::size_t> next(ways.size(), 0);
    for (std::size_t t = 0; t < ways.size(); ++t) {
      if (!ways[t]) continue;
      for (long long o = 0; o <= wi && t + static_cast<std::size_t>(o) < ways.size(); ++o)
        next[t + static_cast<std::size_t>(o)] = std::min(limit, next[t + static_cast<std::size_t>(o)] + ways[t]);
    }
    ways.swap(next);
  }
  return ways.back();
}

namespace {

std::vector<long long> to_integers(const std::vector<double>& w, double scale) {
  std::vector<long long> out;
  for (double v : w) out.push_back(std::llround(v * scale));
  return out;
}

// Calls f(o) for every integral o with 0 <= o <= w, sum o = z, in lexicographic order.
void for_each_allocation(const std::vector<long long>& w, long long z,
                         const std::function<void(const std::vector<long long>&)>& f) {
  const std::size_t n = w.size();
  std::vector<long long> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + w[i];
  std::vector<long long> o(n, 0);
  std::function<void(std::size_t, long long)> rec = [&](std::size_t i, long long left) {
    if (i == n) {
      if (left == 0) f(o);
      return;
    }
    const long long lo = std::max(0LL, left - suffix[i + 1]);
    const long long hi = std::min(w[i], left);
    for (long long v = lo; v <= hi; ++v) {
      o[i] = v;
      rec(i + 1, left - v);
    }
    o[i] = 0;
  };
  rec(0, z);
}

// Calls f(labels, groups) for every set partition of {0..n-1} into at most k blocks
// (restricted growth strings).
void for_each_partition(std::size_t n, std::size_t k,
                        const std::function<void(const std::vector<std::size_t>&, std::size_t)>& f) {
  std::vector<std::size_t> a(n, 0);
  if (n == 0) {
    f(a, 0);
    return;
  }
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      f(a, used);
      return;
    }
    for (std::size_t b = 0; b <= used && b < k; ++b) {
      a[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
}

}  // namespace

double brute_force_robust_ot(const WeightedPointSet& P, const WeightedPointSet& Q, double z, double l,
                             const OracleBudget& budget) {
  if (P.size() > budget.max_support || Q.size() > budget.max_support)
    throw Error(ErrorCode::BudgetExceeded, "support larger than the oracle budget");
  if (!tol::close_rel(Q.total(), P.total() - z, P.total()))
    throw Error(ErrorCode::Unbalanced, "w(Q) must equal w(P) - z");
  std::vector<double> all(P.weights());
  all.insert(all.end(), Q.weights().begin(), Q.weights().end());
  all.push_back(z);
  const double D = integral_scale(all, budget.max_total);
  if (P.total() * D > budget.max_total + 1e-9)
    throw Error(ErrorCode::BudgetExceeded, "integral total weight exceeds the oracle budget");
  const auto w = to_integers(P.weights(), D);
  const long long zi = std::llround(z * D);
  if (count_allocations(w, zi, budget.max_enumeration + 1) > budget.max_enumeration)
    throw Error(ErrorCode::BudgetExceeded, "too many outlier allocations");

  std::vector<double> qd;
  for (double v : Q.weights()) qd.push_back(std::round(v * D));
  const std::vector<double> cost = cost_matrix(P.points(), Q.points(), l);
  double best = std::numeric_limits<double>::infinity();
  for_each_allocation(w, zi, [&](const std::vector<long long>& o) {
    std::vector<double> sup(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) sup[i] = static_cast<double>(w[i] - o[i]);
    auto t = TransportationProblem::from_costs(P.size(), Q.size(), cost, std::move(sup), qd);
    best = std::min(best, solve_transportation(t).cost);
  });
  return best / D;
}

KMeansOracleResult brute_force_kmeans_outliers(const WeightedPointSet& P, std::size_t k, double z,
                                               const OracleBudget& budget) {
  if (k == 0) throw Error(ErrorCode::InvalidInput, "k must be at least 1");
  if (P.size() > budget.max_support || k > budget.max_k)
    throw Error(ErrorCode::BudgetExceeded, "instance larger than the oracle budget");
  std::vector<double> all(P.weights());
  all.push_back(z);
  const double D = integral_scale(all, budget.max_total);
  if (P.total() * D > budget.max_total + 1e-9)
    throw Error(ErrorCode::BudgetExceeded, "integral total weight exceeds the oracle budget");
  const auto w = to_integers(P.weights(), D);
  const long long zi = std::llround(z * D);
  if (zi >= std::llround(P.total() * D)) throw Error(ErrorCode::TooFewPoints, "no inlier mass left");
  const std::size_t d = P.dim();

  KMeansOracleResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for_each_allocation(w, zi, [&](const std::vector<long long>& o) {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] - o[i] > 0) live.push_back(i);
    for_each_partition(live.size(), k, [&](const std::vector<std::size_t>& lab, std::size_t groups) {
      std::vector<double> mass(groups, 0.0), sum(groups * d, 0.0);
      for (std::size_t t = 0; t < live.size(); ++t) {
        const double m = static_cast<double>(w[live[t]] - o[live[t]]);
        mass[lab[t]] += m;
        auto p = P.point(live[t]);
        for (std::size_t u = 0; u < d; ++u) sum[lab[t] * d + u] += m * p[u];
      }
      for (std::size_t g = 0; g < groups; ++g)
        for (std::size_t u = 0; u < d; ++u) sum[g * d + u] /= mass[g];
      double c = 0.0;
      for (std::size_t t = 0; t < live.size(); ++t) {
        const double m = static_cast<double>(w[live[t]] - o[live[t]]);
        c += m * squared_distance(P.point(live[t]), std::span<const double>(&sum[lab[t] * d], d));
      }
      if (c < best.cost) {
        best.cost = c;
        best.centers = PointMatrix(d, sum);
        best.center_weights.assign(mass.begin(), mass.end());
        for (double& v : best.center_weights) v /= D;
        best.inlier_weights.assign(w.size(), 0.0);
        for (std::size_t i = 0; i < w.size(); ++i) best.inlier_weights[i] = static_cast<double>(w[i] - o[i]) / D;
      }
    });
  });
  best.cost /= D;
  return best;
}

SparseWbOracleResult brute_force_sparse_wb(const Instance& inst, const PointMatrix& candidates,
                                           const OracleBudget& budget) {
  if (candidates.empty()) throw Error(ErrorCode::EmptySupport, "no candidate points");
  const std::size_t c = candidates.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(inst.k()), c);
  // number of k-subsets, saturating
  double subsets = 1.0;
  for (std::size_t t = 0; t < k; ++t) subsets = subsets * static_cast<double>(c - t) / static_cast<double>(t + 1);
  if (subsets > static_cast<double>(budget.max_enumeration))
    throw Error(ErrorCode::BudgetExceeded, "too many candidate subsets");

  SparseWbOracleResult best;
  best.cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(k);
  WbLpOptions lp;
  lp.backend = "simplex";
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t t, std::size_t from) {
    if (t == k) {
      PointMatrix G(candidates.dim());
      for (std::size_t s : pick) G.push_back(candidates[s]);
      BarycenterSolution sol = fixed_support_wb(inst, G, inst.z(), 0.0, lp);
      if (sol.cost < best.cost) {
        best.cost = sol.cost;
        best.support = std::move(sol.support);
        best.weights = std::move(sol.weights);
      }
      return;
    }
    for (std::size_t s = from; s + (k - t) <= c; ++s) {
      pick[t] = s;
      rec(t + 1, s + 1);
    }
  };
  rec(0, 0);
  return best;
}

PointMatrix subset_centroids(const WeightedPointSet& P) {
  const std::size_t n = P.size(), d = P.dim();
  if (n > 20) throw Error(ErrorCode::BudgetExceeded, "too many points for subset enumeration");
  PointMatrix out(d);
  std::vector<double> c(d);
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::fill(c.begin(), c.end(), 0.0);
    double cnt = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        auto p = P.point(i);
        for (std::size_t u = 0; u < d; ++u) c[u] += p[u];
        cnt += 1.0;
      }
    for (double& v : c) v /= cnt;
    out.push_back(c);
  }
  return out;
}

double brute_force_fair_one_center(const Instance& inst, const OracleBudget& budget) {
  const std::size_t m = inst.m(), d = inst.dim();
  std::vector<std::vector<long long>> w;
  std::vector<double> all{inst.z()};
  for (const auto& P : inst.distributions()) all.insert(all.end(), P.weights().begin(), P.weights().end());
  const double D = integral_scale(all, budget.max_total);
  for (const auto& P : inst.distributions()) {
    if (P.size() > budget.max_support) throw Error(ErrorCode::BudgetExceeded, "support larger than the budget");
    w.push_back(to_integers(P.weights(), D));
  }
  const long long zi = std::llround(inst.z() * D);
  double combos = 1.0;
  for (const auto& wj : w) combos *= static_cast<double>(count_allocations(wj, zi, budget.max_enumeration + 1));
  if (combos > static_cast<double>(budget.max_enumeration))
    throw Error(ErrorCode::BudgetExceeded, "too many outlier allocations");

  // enumerate the allocations of each color, then their product
  std::vector<std::vector<std::vector<long long>>> per(m);
  for (std::size_t j = 0; j < m; ++j)
    for_each_allocation(w[j], zi, [&](const std::vector<long long>& o) { per[j].push_back(o); });

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> choice(m, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == m) {
      std::vector<double> c(d, 0.0);
      double mass = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        const auto& P = inst.distribution(t);
        const auto& o = per[t][choice[t]];
        for (std::size_t i = 0; i < P.size(); ++i) {
          const double mm = static_cast<double>(w[t][i] - o[i]);
          mass += mm;
          for (std::size_t u = 0; u < d; ++u) c[u] += mm * P.point(i)[u];
        }
      }
      for (double& v : c) v /= mass;
      double cost = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        const auto& P = inst.distribution(t);
        const auto& o = per[t][choice[t]];
        for (std::size_t i = 0; i < P.size(); ++i)
          cost += static_cast<double>(w[t][i] - o[i]) * squared_distance(P.point(i), c);
      }
      best = std::min(best, cost);
      return;
    }
    for (std::size_t a = 0; a < per[j].size(); ++a) {
      choice[j] = a;
      rec(j + 1);
    }
  };
  rec(0);
  return best / D;
}

}  // namespace rwb
