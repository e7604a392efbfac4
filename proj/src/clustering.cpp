#include "rwb/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rwb {

WeightedPointSet ClusteringResult::summary() const { return WeightedPointSet(centers, center_weights); }

SubWeighting ClusteringResult::inliers(std::shared_ptr<const WeightedPointSet> base) const {
  return SubWeighting(std::move(base), inlier_weights);
}

PointMatrix gather(const WeightedPointSet& P, const std::vector<std::size_t>& idx) {
  PointMatrix out(P.dim());
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(P.point(i));
  return out;
}

std::vector<std::size_t> kmeanspp_seed(const WeightedPointSet& P, std::size_t t, std::uint64_t seed) {
  const std::size_t n = P.size();
  if (t == 0) throw Error(ErrorCode::InvalidInput, "t must be at least 1");
  if (t > n)
    throw Error(ErrorCode::TooFewPoints, "asked for " + std::to_string(t) + " seeds from " +
                                             std::to_string(n) + " support points");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  std::vector<char> taken(n, 0);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  auto draw = [&](const std::vector<double>& score) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i]) total += score[i];
    if (total > 0.0) {
      const double u = uniform01(rng) * total;
      double acc = 0.0;
      std::size_t last = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || score[i] <= 0.0) continue;
        acc += score[i];
        last = i;
        if (u < acc) return i;
      }
      return last;
    }
    // nothing left with positive score: farthest remaining point, lowest index
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i] && (best == n || d2[i] > d2[best])) best = i;
    return best;
  };

  std::vector<double> score(P.weights());
  while (chosen.size() < t) {
    const std::size_t c = draw(score);
    chosen.push_back(c);
    taken[c] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(P.point(i), P.point(c)));
      score[i] = taken[i] ? 0.0 : P.weight(i) * d2[i];
    }
  }
  return chosen;
}

namespace {

void assign(const WeightedPointSet& P, const PointMatrix& centers, std::vector<std::size_t>& a,
            std::vector<double>& d2) {
  const std::size_t n = P.size();
  a.assign(n, 0);
  d2.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bs = 0;
    for (std::size_t s = 0; s < centers.size(); ++s) {
      double d = squared_distance(P.point(i), centers[s]);
      if (d < best) best = d, bs = s;
    }
    a[i] = bs;
    d2[i] = best;
  }
}

// Drop the farthest z mass: whole points by descending distance (ties: ascending index),
// the boundary point fractionally.
std::vector<double> trim(const WeightedPointSet& P, const std::vector<double>& d2, double z) {
  std::vector<double> w(P.weights());
  if (z <= 0.0) return w;
  std::vector<std::size_t> order(P.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d2[x] > d2[y]; });
  double left = z;
  for (std::size_t i : order) {
    if (left <= 0.0) break;
    const double take = std::min(left, w[i]);
    w[i] -= take;
    left -= take;
    if (w[i] < 1e-15 * P.weight(i)) w[i] = 0.0;
  }
  return w;
}

}  // namespace

ClusteringResult refine_with_outliers(const WeightedPointSet& P, PointMatrix centers, double z,
                                      RefineOptions opt) {
  if (centers.empty()) throw Error(ErrorCode::InvalidInput, "no centers given");
  if (centers.dim() != P.dim()) throw Error(ErrorCode::DimMismatch, "center dimension differs");
  if (!(z >= 0.0) || !(z < P.total()))
    throw Error(ErrorCode::TooFewPoints, "outlier mass leaves no inliers");
  const std::size_t d = P.dim(), k = centers.size();

  ClusteringResult r;
  std::vector<double> d2;
  while (true) {
    assign(P, centers, r.assignment, d2);
    r.inlier_weights = trim(P, d2, z);
    double cost = 0.0;
    for (std::size_t i = 0; i < P.size(); ++i) cost += r.inlier_weights[i] * d2[i];
    r.cost = cost;
    const bool first = r.cost_history.empty();
    const double prev = first ? 0.0 : r.cost_history.back();
    r.cost_history.push_back(cost);
    if (cost == 0.0) break;
    if (!first && prev - cost < opt.tol * prev) break;
    if (static_cast<int>(r.iterations) >= opt.max_iter) break;

    // centroid update over inlier mass
    std::vector<double> sums(k * d, 0.0), mass(k, 0.0);
    for (std::size_t i = 0; i < P.size(); ++i) {
      const double w = r.inlier_weights[i];
      if (w <= 0.0) continue;
      const std::size_t s = r.assignment[i];
      mass[s] += w;
      auto p = P.point(i);
      for (std::size_t t = 0; t < d; ++t) sums[s * d + t] += w * p[t];
    }
    PointMatrix next = centers;
    std::vector<char> used(P.size(), 0);
    for (std::size_t s = 0; s < k; ++s) {
      if (mass[s] > 0.0) {
        for (std::size_t t = 0; t < d; ++t) next[s][t] = sums[s * d + t] / mass[s];
        continue;
      }
      // empty cluster: move it onto the farthest inlier not already used for a repair
      std::size_t far = P.size();
      for (std::size_t i = 0; i < P.size(); ++i) {
        if (r.inlier_weights[i] <= 0.0 || used[i]) continue;
        if (far == P.size() || d2[i] > d2[far]) far = i;
      }
      if (far == P.size() || d2[far] == 0.0) continue;
      used[far] = 1;
      auto p = P.point(far);
      std::copy(p.begin(), p.end(), next[s].begin());
    }
    if (next == centers) break;
    centers = std::move(next);
    ++r.iterations;
  }

  r.centers = std::move(centers);
  r.center_weights.assign(k, 0.0);
  double inl = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    r.center_weights[r.assignment[i]] += r.inlier_weights[i];
    inl += r.inlier_weights[i];
  }
  r.outlier_weight = P.total() - inl;
  return r;
}

ClusteringResult lloyd_weighted(const WeightedPointSet& P, PointMatrix centers, RefineOptions opt) {
  return refine_with_outliers(P, std::move(centers), 0.0, opt);
}

ClusteringResult kmeans_minus_minus(const WeightedPointSet& P, std::size_t k, double z,
                                    std::uint64_t seed, RefineOptions opt) {
  if (k == 0) throw Error(ErrorCode::InvalidInput, "k must be at least 1");
  if (!(z >= 0.0) || !(z < P.total()))
    throw Error(ErrorCode::TooFewPoints, "outlier mass leaves no inliers");
  auto seeds = kmeanspp_seed(P, k, seed);
  return refine_with_outliers(P, gather(P, seeds), z, opt);
}

std::vector<std::size_t> gonzalez_kcenter(const WeightedPointSet& P, std::size_t t) {
  const std::size_t n = P.size();
  if (t == 0) throw Error(ErrorCode::InvalidInput, "t must be at least 1");
  if (t > n) throw Error(ErrorCode::TooFewPoints, "t exceeds the support size");
  std::size_t first = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (P.weight(i) > P.weight(first)) first = i;
  std::vector<std::size_t> chosen{first};
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(P.point(i), P.point(first));
  d2[first] = -1.0;
  while (chosen.size() < t) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (d2[i] > d2[far]) far = i;
    chosen.push_back(far);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], squared_distance(P.point(i), P.point(far)));
    d2[far] = -1.0;  // never pick twice even if duplicates were present
  }
  return chosen;
}

WeightedPointSet cluster_summary(const WeightedPointSet& P, const PointMatrix& centers) {
  if (centers.empty()) throw Error(ErrorCode::InvalidInput, "no centers given");
  std::vector<std::size_t> a;
  std::vector<double> d2;
  assign(P, centers, a, d2);
  std::vector<double> w(centers.size(), 0.0);
  for (std::size_t i = 0; i < P.size(); ++i) w[a[i]] += P.weight(i);
  return WeightedPointSet(centers, std::move(w));
}

}  // namespace rwb
