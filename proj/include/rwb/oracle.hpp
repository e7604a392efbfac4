#pragma once

#include "rwb/barycenter.hpp"

namespace rwb {

// Exhaustive references for tiny instances. Everything here refuses work beyond the budget.
struct OracleBudget {
  std::size_t max_support = 8;
  std::size_t max_k = 3;
  double max_total = 8.0;             // after scaling weights to integers
  std::size_t max_enumeration = 2'000'000;
  std::size_t grid_resolution = 16;   // cells per axis for candidate grids
};

/// Smallest integer D <= budget.max_total such that D*v is integral for every v.
/// Throws NON_INTEGRAL when there is none.
double integral_scale(const std::vector<double>& values, double max_denominator);

/// min over integral P' <= P with w(P') = w(P) - z of W^l(P', Q), as a raw cost.
double brute_force_robust_ot(const WeightedPointSet& P, const WeightedPointSet& Q, double z,
                             double l = 2.0, const OracleBudget& budget = {});

struct KMeansOracleResult {
  double cost = 0.0;
  PointMatrix centers;
  std::vector<double> center_weights;
  std::vector<double> inlier_weights;
};

/// Exact k-means with z outliers on integral weights: every integral outlier allocation times
/// every partition of the inliers into at most k groups.
KMeansOracleResult brute_force_kmeans_outliers(const WeightedPointSet& P, std::size_t k, double z,
                                               const OracleBudget& budget = {});

struct SparseWbOracleResult {
  double cost = 0.0;
  PointMatrix support;
  std::vector<double> weights;
};

/// Best k-subset of `candidates` (all of them when k >= |candidates|), each scored by the exact
/// fixed-support LP with z discarded per distribution.
SparseWbOracleResult brute_force_sparse_wb(const Instance& inst, const PointMatrix& candidates,
                                           const OracleBudget& budget = {});

/// Centroids of every nonempty subset of supp(P) (unit weights per point).
PointMatrix subset_centroids(const WeightedPointSet& P);

/// One-center clustering of the pooled distributions where exactly z mass is removed from
/// each distribution (equal shares per color), squared Euclidean cost. Integral weights.
double brute_force_fair_one_center(const Instance& inst, const OracleBudget& budget = {});

/// Number of integral vectors 0 <= o <= w with sum o = z (saturating at `limit`).
std::size_t count_allocations(const std::vector<long long>& w, long long z, std::size_t limit);

}  // namespace rwb
