#pragma once

#include <optional>
#include <string>

#include "rwb/clustering.hpp"
#include "rwb/config.hpp"
#include "rwb/lp.hpp"

namespace rwb {

struct SolutionMeta {
  std::string algo;          // "fixed", "cluster-a", "cluster-b", "grid", baselines
  std::uint64_t seed = 0;
  int lambda = 0;
  double eps = 0.0;
  double z_remove = 0.0;
  bool strict_k = false;
  std::optional<std::size_t> j0;       // winning candidate
  std::vector<double> candidate_costs;  // one per candidate, in j order
  std::size_t candidate_support = 0;    // |G| handed to the LP
  std::string lp_backend;
  std::size_t lp_iterations = 0;
};

struct BarycenterSolution {
  PointMatrix support;
  std::vector<double> weights;
  double discarded = 0.0;  // mass dropped from every distribution
  double z2 = 0.0;         // dummy mass on the barycenter side (two-side variant)
  double cost = 0.0;       // (1/m) sum_j raw robust transport cost
  /// Plan j: rows supp(P_j) (+ dummy row if z2 > 0), columns support (+ dummy if any discard).
  std::vector<TransportPlan> plans;
  std::vector<double> plan_costs;
  SolutionMeta meta;

  double total_weight() const;
  std::size_t positive_support() const;
};

struct WbLpOptions {
  /// Drop zero-weight points from the returned support.
  bool drop_zero = false;
  /// Above this many candidates, support points enter the LP by column generation.
  std::size_t colgen_threshold = 400;
  /// Force a backend: "", "simplex" or "ipm".
  std::string backend;
};

/// Optimal weights on the fixed support G with z_remove mass discarded from each P_j
/// (plus z2 dummy barycenter mass per distribution for the two-side variant).
BarycenterSolution fixed_support_wb(const Instance& inst, const PointMatrix& G, double z_remove,
                                    double z2 = 0.0, const WbLpOptions& opt = {});

/// (1/m) sum_j W^l_{-z}(P_j, S). Throws WEIGHT_MISMATCH unless sum(weights) = n - z.
double cost_of(const Instance& inst, const PointMatrix& support, std::span<const double> weights,
               double z);

enum class Variant { A, B };

struct ClusterLpOptions {
  Variant variant = Variant::A;
  int lambda = 2;
  std::uint64_t seed = 0;
  bool strict_k = false;
  /// Mass discarded by the LP; default z for variant A and 2z for variant B.
  std::optional<double> z_remove;
  RefineOptions refine;
};

BarycenterSolution cluster_lp_barycenter(const Instance& inst, const ClusterLpOptions& opt);

/// Per-distribution seed stream shared by every algorithm that clusters P_j.
std::uint64_t distribution_seed(std::uint64_t seed, std::size_t j);

/// T_j of variant A: k-means++ with min(t, |supp P_j|) centers, Lloyd-refined.
ClusteringResult bicriteria_clustering(const WeightedPointSet& P, std::size_t t, std::uint64_t seed,
                                       RefineOptions refine = {});

struct AnchorSet {
  PointMatrix points;
  std::vector<double> weights;
  double r_bar = 0.0;
  std::size_t layers = 0;               // ceil(log2 n)
  std::vector<double> layer_radius;     // r_bar * 2^h, h = 0..layers
  std::vector<double> layer_side;       // r_bar * eps1 * 2^(h-1) / sqrt(alpha d)
  double clustering_cost = 0.0;         // W(P_j, T_j)^2
  double snap_cost = 0.0;               // sum w * |p - snap(p)|^2 (upper bound on W(P_j, H_j)^2)
  double eps1 = 0.0;
  double alpha = 1.0;

  WeightedPointSet as_point_set() const { return WeightedPointSet(points, weights); }
};

AnchorSet build_anchor_points(const WeightedPointSet& P, const ClusteringResult& clustering,
                              double eps1, double alpha_assumed = 1.0,
                              std::size_t cap = tol::kDefaultGridCap);

struct PairwiseExtent {
  double min_positive = 0.0;
  double max = 0.0;
  double delta() const { return min_positive > 0.0 ? max / min_positive : 1.0; }
};

PairwiseExtent pairwise_extent(const Instance& inst);

struct SupportGrid {
  PointMatrix points;
  double unit = 1.0;  // length that was rescaled to 1
  double delta = 1.0;
  int top_layer = 0;  // ceil(log2 delta)
};

/// Union over anchors q and h = 0..ceil(log2 delta) of the lattice of side
/// unit * eps2 * 2^(h-1) / sqrt(d) anchored at q, clipped to the closed ball B(q, unit * 2^h).
SupportGrid build_support_grid(const PointMatrix& anchors, double eps2, double unit, double delta,
                               std::size_t cap = tol::kDefaultGridCap);

struct GridOptions {
  double eps = 0.5;
  int lambda = 2;
  std::uint64_t seed = 0;
  double alpha_assumed = 1.0;
  std::size_t cap = tol::kDefaultGridCap;
  RefineOptions refine;
};

BarycenterSolution grid_barycenter(const Instance& inst, const GridOptions& opt,
                                   std::vector<AnchorSet>* anchors_out = nullptr);

// Low-level LP over the weights; exposed for tests.
struct WbLpResult {
  std::vector<double> weights;  // one per point of G
  double objective = 0.0;
  std::string backend;
  std::size_t iterations = 0;
};

WbLpResult solve_wb_lp(const Instance& inst, const PointMatrix& G, double z_remove, double z2,
                       const WbLpOptions& opt = {});

/// The same LP written out densely (small instances only; used for cross-checks and dumps).
LpProblem wb_as_lp(const Instance& inst, const PointMatrix& G, double z_remove, double z2);

}  // namespace rwb
