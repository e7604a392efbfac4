#pragma once

#include <cstdint>
#include <random>

#include "rwb/core.hpp"

namespace rwb {

/// Uniform double in [0,1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct ClusteringResult {
  PointMatrix centers;                  // one row per center, in center order
  std::vector<double> center_weights;   // inlier mass of each cluster
  std::vector<std::size_t> assignment;  // nearest center of every support point
  std::vector<double> inlier_weights;   // per support point, 0 <= w' <= w
  double outlier_weight = 0.0;
  double cost = 0.0;                    // sum of w' * min_s |p - c_s|^2
  std::vector<double> cost_history;     // cost after every assignment step
  std::size_t iterations = 0;           // center updates that moved something

  std::size_t k() const noexcept { return center_weights.size(); }
  /// Centers as a point set weighted by cluster mass (T_j of the clustering LP algorithm).
  WeightedPointSet summary() const;
  SubWeighting inliers(std::shared_ptr<const WeightedPointSet> base) const;
};

struct RefineOptions {
  int max_iter = 100;
  double tol = 1e-6;
};

/// Weighted D^2 sampling of t distinct support indices.
std::vector<std::size_t> kmeanspp_seed(const WeightedPointSet& P, std::size_t t, std::uint64_t seed);

PointMatrix gather(const WeightedPointSet& P, const std::vector<std::size_t>& idx);

ClusteringResult lloyd_weighted(const WeightedPointSet& P, PointMatrix centers,
                                RefineOptions opt = {});

/// Lloyd iterations where the farthest z mass is dropped before each centroid update.
/// Seeds with kmeanspp_seed(P, k, seed).
ClusteringResult kmeans_minus_minus(const WeightedPointSet& P, std::size_t k, double z,
                                    std::uint64_t seed, RefineOptions opt = {});

/// Same refinement from explicit starting centers.
ClusteringResult refine_with_outliers(const WeightedPointSet& P, PointMatrix centers, double z,
                                      RefineOptions opt = {});

/// Farthest-point traversal from the heaviest point; ties by lowest index.
std::vector<std::size_t> gonzalez_kcenter(const WeightedPointSet& P, std::size_t t);

/// Full weight of every point moved to its nearest center (lower index on ties).
WeightedPointSet cluster_summary(const WeightedPointSet& P, const PointMatrix& centers);

}  // namespace rwb
