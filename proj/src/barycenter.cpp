#include "rwb/barycenter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rwb/log.hpp"
#include "rwb/ot.hpp"

namespace rwb {

double BarycenterSolution::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::size_t BarycenterSolution::positive_support() const {
  return static_cast<std::size_t>(std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Remove zero-weight support points together with their plan columns.
void drop_zero_support(BarycenterSolution& sol) {
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < sol.weights.size(); ++s)
    if (sol.weights[s] > 0.0) keep.push_back(s);
  if (keep.size() == sol.weights.size()) return;
  const std::size_t K = sol.weights.size();
  PointMatrix pts(sol.support.dim());
  std::vector<double> w;
  for (std::size_t s : keep) {
    pts.push_back(sol.support[s]);
    w.push_back(sol.weights[s]);
  }
  for (auto& plan : sol.plans) {
    const std::size_t extra = plan.cols - K;  // dummy column, if any
    TransportPlan np;
    np.rows = plan.rows;
    np.cols = keep.size() + extra;
    np.flow.assign(np.rows * np.cols, 0.0);
    for (std::size_t i = 0; i < plan.rows; ++i) {
      for (std::size_t t = 0; t < keep.size(); ++t) np.flow[i * np.cols + t] = plan.at(i, keep[t]);
      for (std::size_t e = 0; e < extra; ++e) np.flow[i * np.cols + keep.size() + e] = plan.at(i, K + e);
    }
    plan = std::move(np);
  }
  sol.support = std::move(pts);
  sol.weights = std::move(w);
}

}  // namespace

std::uint64_t distribution_seed(std::uint64_t seed, std::size_t j) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(j) + 1));
}

ClusteringResult bicriteria_clustering(const WeightedPointSet& P, std::size_t t, std::uint64_t seed,
                                       RefineOptions refine) {
  t = std::min(t, P.size());
  auto seeds = kmeanspp_seed(P, t, seed);
  return lloyd_weighted(P, gather(P, seeds), refine);
}

BarycenterSolution fixed_support_wb(const Instance& inst, const PointMatrix& G, double z_remove,
                                    double z2, const WbLpOptions& opt) {
  WbLpResult lp = solve_wb_lp(inst, G, z_remove, z2, opt);
  const double n = inst.n();
  const double target = n - z_remove;
  double sum = 0.0;
  for (double& w : lp.weights) {
    if (w < 1e-9 * n) w = 0.0;
    sum += w;
  }
  if (!(sum > 0.0)) throw Error(ErrorCode::Internal, "LP returned an all-zero barycenter");
  for (double& w : lp.weights) w *= target / sum;

  BarycenterSolution sol;
  sol.discarded = z_remove;
  sol.z2 = z2;
  if (opt.drop_zero) {
    sol.support = PointMatrix(G.dim());
    for (std::size_t s = 0; s < G.size(); ++s)
      if (lp.weights[s] > 0.0) {
        sol.support.push_back(G[s]);
        sol.weights.push_back(lp.weights[s]);
      }
  } else {
    sol.support = G;
    sol.weights = lp.weights;
  }

  double total = 0.0;
  for (std::size_t j = 0; j < inst.m(); ++j) {
    const auto& P = inst.distribution(j);
    TransportResult tr =
        robust_transport(P.points(), P.weights(), sol.support, sol.weights, z_remove + z2, z2, inst.l());
    total += tr.cost;
    sol.plan_costs.push_back(tr.cost);
    sol.plans.push_back(std::move(tr.plan));
  }
  sol.cost = total / static_cast<double>(inst.m());
  sol.meta.algo = "fixed";
  sol.meta.z_remove = z_remove;
  sol.meta.candidate_support = G.size();
  sol.meta.lp_backend = lp.backend;
  sol.meta.lp_iterations = lp.iterations;
  log_debug("fixed_support_wb |G|=" + std::to_string(G.size()) + " backend=" + lp.backend +
            " lp=" + std::to_string(lp.objective) + " cost=" + std::to_string(sol.cost));
  return sol;
}

double cost_of(const Instance& inst, const PointMatrix& support, std::span<const double> weights,
               double z) {
  if (support.size() != weights.size())
    throw Error(ErrorCode::InvalidInput, "support and weight counts differ");
  if (support.empty()) throw Error(ErrorCode::EmptySupport, "empty barycenter support");
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (!tol::close_rel(sum, inst.n() - z, inst.n()))
    throw Error(ErrorCode::WeightMismatch, "barycenter weight " + std::to_string(sum) +
                                               " but n - z = " + std::to_string(inst.n() - z));
  double total = 0.0;
  for (const auto& P : inst.distributions())
    total += robust_transport(P.points(), P.weights(), support, weights, z, 0.0, inst.l()).cost;
  return total / static_cast<double>(inst.m());
}

BarycenterSolution cluster_lp_barycenter(const Instance& inst, const ClusterLpOptions& opt) {
  if (opt.lambda < 1) throw Error(ErrorCode::InvalidInput, "lambda must be at least 1");
  const std::size_t k = static_cast<std::size_t>(inst.k());
  const double z = inst.z();
  const bool a = opt.variant == Variant::A;
  const double z_remove = opt.z_remove.value_or(a ? z : 2.0 * z);
  if (!(z_remove >= 0.0) || !(z_remove < inst.n()))
    throw Error(ErrorCode::BadOutlierMass, "discarded mass " + std::to_string(z_remove) +
                                               " must stay below n=" + std::to_string(inst.n()));
  const std::size_t t = static_cast<std::size_t>(opt.lambda) * (k + inst.z_hat());

  auto keep_top_k = [&](BarycenterSolution sol) {
    if (a && sol.support.size() > k) {
      std::vector<std::size_t> order(sol.support.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) { return sol.weights[x] > sol.weights[y]; });
      order.resize(k);
      std::sort(order.begin(), order.end());
      PointMatrix top(sol.support.dim());
      for (std::size_t s : order) top.push_back(sol.support[s]);
      sol = fixed_support_wb(inst, top, z_remove);
    }
    drop_zero_support(sol);
    return sol;
  };

  // With strict k the post-processing is applied to every candidate before the minimum is taken.
  BarycenterSolution best;
  std::vector<double> costs;
  for (std::size_t j = 0; j < inst.m(); ++j) {
    const auto& P = inst.distribution(j);
    const auto seed = distribution_seed(opt.seed, j);
    ClusteringResult cl = a ? bicriteria_clustering(P, t, seed, opt.refine)
                            : kmeans_minus_minus(P, k, z, seed, opt.refine);
    BarycenterSolution cand = fixed_support_wb(inst, cl.centers, z_remove);
    if (opt.strict_k) cand = keep_top_k(std::move(cand));
    costs.push_back(cand.cost);
    log_debug("candidate j=" + std::to_string(j) + " cost=" + std::to_string(cand.cost));
    if (j == 0 || cand.cost < best.cost) {
      best = std::move(cand);
      best.meta.j0 = j;
    }
  }
  const auto j0 = best.meta.j0;

  best.meta.algo = a ? "cluster-a" : "cluster-b";
  best.meta.seed = opt.seed;
  best.meta.lambda = opt.lambda;
  best.meta.strict_k = opt.strict_k;
  best.meta.z_remove = z_remove;
  best.meta.j0 = j0;
  best.meta.candidate_costs = std::move(costs);
  return best;
}

BarycenterSolution grid_barycenter(const Instance& inst, const GridOptions& opt,
                                   std::vector<AnchorSet>* anchors_out) {
  if (!(opt.eps > 0.0)) throw Error(ErrorCode::InvalidInput, "eps must be positive");
  if (opt.lambda < 1) throw Error(ErrorCode::InvalidInput, "lambda must be at least 1");
  const double e = opt.eps / 16.0;
  const std::size_t t = static_cast<std::size_t>(opt.lambda) * (static_cast<std::size_t>(inst.k()) + inst.z_hat());

  PointMatrix pooled(inst.dim());
  std::vector<double> pooled_w;
  std::vector<AnchorSet> anchors;
  for (std::size_t j = 0; j < inst.m(); ++j) {
    const auto& P = inst.distribution(j);
    ClusteringResult cl = bicriteria_clustering(P, t, distribution_seed(opt.seed, j), opt.refine);
    AnchorSet as = build_anchor_points(P, cl, e, opt.alpha_assumed, opt.cap);
    for (std::size_t s = 0; s < as.points.size(); ++s) {
      pooled.push_back(as.points[s]);
      pooled_w.push_back(as.weights[s]);
    }
    anchors.push_back(std::move(as));
  }
  const WeightedPointSet all_anchors(pooled, pooled_w);
  const PairwiseExtent ext = pairwise_extent(inst);
  const double unit = ext.min_positive > 0.0 ? ext.min_positive : 1.0;
  SupportGrid grid = build_support_grid(all_anchors.points(), e, unit, ext.delta(), opt.cap);
  log_info("grid: " + std::to_string(all_anchors.size()) + " anchors, |G|=" + std::to_string(grid.points.size()));

  WbLpOptions lp;
  lp.drop_zero = true;
  BarycenterSolution sol = fixed_support_wb(inst, grid.points, inst.z(), 0.0, lp);
  sol.meta.algo = "grid";
  sol.meta.seed = opt.seed;
  sol.meta.lambda = opt.lambda;
  sol.meta.eps = opt.eps;
  sol.meta.candidate_support = grid.points.size();
  if (anchors_out) *anchors_out = std::move(anchors);
  return sol;
}

}  // namespace rwb
