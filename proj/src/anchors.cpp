#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "rwb/barycenter.hpp"

namespace rwb {

AnchorSet build_anchor_points(const WeightedPointSet& P, const ClusteringResult& clustering,
                              double eps1, double alpha_assumed, std::size_t cap) {
  if (!(eps1 > 0.0)) throw Error(ErrorCode::InvalidInput, "eps1 must be positive");
  if (!(alpha_assumed >= 1.0)) throw Error(ErrorCode::InvalidInput, "alpha must be at least 1");
  if (clustering.centers.empty() || clustering.assignment.size() != P.size())
    throw Error(ErrorCode::InvalidInput, "clustering does not belong to this point set");
  const std::size_t d = P.dim();
  const double n = P.total();

  AnchorSet as;
  as.eps1 = eps1;
  as.alpha = alpha_assumed;
  for (std::size_t i = 0; i < P.size(); ++i)
    as.clustering_cost += P.weight(i) * squared_distance(P.point(i), clustering.centers[clustering.assignment[i]]);
  as.r_bar = std::sqrt(as.clustering_cost / n);
  as.layers = n > 1.0 ? static_cast<std::size_t>(std::ceil(std::log2(n))) : 0;
  for (std::size_t h = 0; h <= as.layers; ++h) {
    as.layer_radius.push_back(as.r_bar * std::ldexp(1.0, static_cast<int>(h)));
    as.layer_side.push_back(as.r_bar * eps1 * std::ldexp(1.0, static_cast<int>(h) - 1) /
                            std::sqrt(alpha_assumed * static_cast<double>(d)));
  }

  PointMatrix snapped(d);
  snapped.reserve(P.size());
  std::vector<double> w;
  std::vector<double> q(d);
  for (std::size_t i = 0; i < P.size(); ++i) {
    auto p = P.point(i);
    auto c = clustering.centers[clustering.assignment[i]];
    if (as.r_bar == 0.0) {
      snapped.push_back(c);
    } else {
      const double r = std::sqrt(squared_distance(p, c));
      std::size_t h = 0;
      if (r > as.r_bar) {
        h = static_cast<std::size_t>(std::ceil(std::log2(r / as.r_bar)));
        h = std::min(h, as.layers);  // beyond the outer ring: outermost grid
      }
      const double side = as.layer_side[h];
      for (std::size_t t = 0; t < d; ++t) q[t] = c[t] + side * std::round((p[t] - c[t]) / side);
      as.snap_cost += P.weight(i) * squared_distance(p, q);
      snapped.push_back(q);
    }
    w.push_back(P.weight(i));
  }
  WeightedPointSet merged(std::move(snapped), std::move(w));
  if (merged.size() > cap)
    throw Error(ErrorCode::GridBudgetExceeded, std::to_string(merged.size()) + " anchors exceed the cap");
  as.points = merged.points();
  as.weights = merged.weights();

  const double bound = 1.25 * eps1 * eps1 / alpha_assumed * as.clustering_cost;
  if (as.snap_cost > bound * (1.0 + 1e-12) + 1e-300)
    throw Error(ErrorCode::Internal, "anchor snapping broke its error bound");
  return as;
}

PairwiseExtent pairwise_extent(const Instance& inst) {
  PointMatrix pts(inst.dim());
  std::vector<double> w;
  for (const auto& P : inst.distributions())
    for (std::size_t i = 0; i < P.size(); ++i) {
      pts.push_back(P.point(i));
      w.push_back(1.0);
    }
  const WeightedPointSet u(std::move(pts), std::move(w));
  PairwiseExtent e;
  double lo = 0.0, hi = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a)
    for (std::size_t b = a + 1; b < u.size(); ++b) {
      const double d2 = squared_distance(u.point(a), u.point(b));
      if (d2 > 0.0 && (lo == 0.0 || d2 < lo)) lo = d2;
      hi = std::max(hi, d2);
    }
  e.min_positive = std::sqrt(lo);
  e.max = std::sqrt(hi);
  return e;
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<long long>& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (long long v : k) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

double ball_volume(std::size_t d) {
  const double half = 0.5 * static_cast<double>(d);
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

}  // namespace

SupportGrid build_support_grid(const PointMatrix& anchors, double eps2, double unit, double delta,
                               std::size_t cap) {
  if (anchors.empty()) throw Error(ErrorCode::InvalidInput, "no anchor points");
  if (!(eps2 > 0.0)) throw Error(ErrorCode::InvalidInput, "eps2 must be positive");
  if (!(unit > 0.0)) throw Error(ErrorCode::InvalidInput, "unit length must be positive");
  const std::size_t d = anchors.dim();
  SupportGrid g;
  g.unit = unit;
  g.delta = std::max(1.0, delta);
  g.top_layer = g.delta <= 1.0 ? 0 : static_cast<int>(std::ceil(std::log2(g.delta) - 1e-12));

  // Every ball holds about vol_d * (2 sqrt(d) / eps2)^d lattice points whatever h is.
  const double per_ball = ball_volume(d) * std::pow(2.0 * std::sqrt(static_cast<double>(d)) / eps2,
                                                    static_cast<double>(d));
  const double per_anchor = per_ball * (g.top_layer + 1);
  if (per_anchor > static_cast<double>(cap))
    throw Error(ErrorCode::GridBudgetExceeded,
                "one anchor alone needs about " + std::to_string(per_anchor) + " grid points; cap is " +
                    std::to_string(cap));

  g.points = PointMatrix(d);
  std::unordered_set<std::vector<long long>, KeyHash> seen;
  const double merge = tol::kGridMerge * unit;
  std::vector<long long> idx(d), key(d);
  std::vector<double> pt(d);

  for (std::size_t a = 0; a < anchors.size(); ++a) {
    auto q = anchors[a];
    for (int h = 0; h <= g.top_layer; ++h) {
      const double side = unit * eps2 * std::ldexp(1.0, h - 1) / std::sqrt(static_cast<double>(d));
      const double R = unit * std::ldexp(1.0, h);
      const double R2 = R * R * (1.0 + 1e-12);
      const long long kmax = static_cast<long long>(std::floor(R / side + 1e-9));
      // odometer over integer offsets with pruning on the partial squared radius
      std::function<void(std::size_t, double)> rec = [&](std::size_t t, double used) {
        if (t == d) {
          for (std::size_t u = 0; u < d; ++u) {
            pt[u] = q[u] + side * static_cast<double>(idx[u]);
            key[u] = std::llround(pt[u] / merge);
          }
          if (seen.insert(key).second) {
            g.points.push_back(pt);
            if (g.points.size() > cap)
              throw Error(ErrorCode::GridBudgetExceeded,
                          "support grid exceeds " + std::to_string(cap) + " points");
          }
          return;
        }
        const double left = R2 - used;
        const long long lim = std::min(kmax, static_cast<long long>(std::floor(std::sqrt(std::max(0.0, left)) / side + 1e-9)));
        for (long long k = -lim; k <= lim; ++k) {
          const double off = side * static_cast<double>(k);
          if (used + off * off > R2) continue;
          idx[t] = k;
          rec(t + 1, used + off * off);
        }
      };
      rec(0, 0.0);
    }
  }
  return g;
}

}  // namespace rwb
