#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rwb/error.hpp"

namespace rwb {

/// Row-major block of d-dimensional points. No invariants beyond a fixed dimension;
/// duplicates are allowed (use WeightedPointSet when a canonical support is needed).
class PointMatrix {
 public:
  PointMatrix() = default;
  explicit PointMatrix(std::size_t dim) : dim_(dim) {}
  PointMatrix(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<double> operator[](std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

  void push_back(std::span<const double> p);
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  const std::vector<double>& coords() const noexcept { return coords_; }

  bool operator==(const PointMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Finite support in R^d with nonnegative weights. Points that agree to 12 significant
/// digits in every coordinate are merged at construction (weights summed, first
/// occurrence's coordinates kept).
class WeightedPointSet {
 public:
  WeightedPointSet() = default;
  WeightedPointSet(PointMatrix points, std::vector<double> weights);
  static WeightedPointSet from_rows(const std::vector<std::vector<double>>& rows,
                                    std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  std::size_t dim() const noexcept { return points_.dim(); }
  bool empty() const noexcept { return weights_.empty(); }

  std::span<const double> point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const PointMatrix& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double total() const noexcept { return total_; }

  /// Smallest strictly positive weight (0 if the set is empty).
  double min_positive_weight() const;
  bool integral() const;

  bool operator==(const WeightedPointSet& o) const {
    return points_ == o.points_ && weights_ == o.weights_;
  }

 private:
  PointMatrix points_;
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Raw instance as read from disk, before validation.
struct InstanceSpec {
  std::vector<WeightedPointSet> distributions;
  int k = 1;
  double z = 0.0;
  double l = 2.0;
};

class Instance {
 public:
  std::size_t m() const noexcept { return distributions_.size(); }
  std::size_t dim() const noexcept { return distributions_.front().dim(); }
  int k() const noexcept { return k_; }
  double z() const noexcept { return z_; }
  double l() const noexcept { return l_; }
  double n() const noexcept { return n_; }
  double w_min() const noexcept { return w_min_; }
  /// ceil(z / w_min): bound on the number of support points an optimal outlier set touches.
  std::size_t z_hat() const noexcept { return z_hat_; }

  const WeightedPointSet& distribution(std::size_t j) const { return distributions_[j]; }
  const std::vector<WeightedPointSet>& distributions() const noexcept { return distributions_; }

  /// Same distributions, different k / z (re-validated).
  Instance with_parameters(int k, double z) const;

 private:
  friend Instance validate_instance(InstanceSpec raw);

  std::vector<WeightedPointSet> distributions_;
  int k_ = 1;
  double z_ = 0.0;
  double l_ = 2.0;
  double n_ = 0.0;
  double w_min_ = 0.0;
  std::size_t z_hat_ = 0;
};

/// Throws InstanceError listing every violated invariant.
Instance validate_instance(InstanceSpec raw);

/// P' ⪯ P: same support as `base`, pointwise weight bound.
class SubWeighting {
 public:
  SubWeighting(std::shared_ptr<const WeightedPointSet> base, std::vector<double> sub_weights);
  static SubWeighting full(std::shared_ptr<const WeightedPointSet> base);

  const WeightedPointSet& base() const noexcept { return *base_; }
  const std::shared_ptr<const WeightedPointSet>& base_ptr() const noexcept { return base_; }
  const std::vector<double>& weights() const noexcept { return sub_; }
  double weight(std::size_t i) const { return sub_[i]; }
  double total() const noexcept { return total_; }

  bool same_base(const SubWeighting& o) const;
  /// this ⪯ other (pointwise, exact).
  bool precedes(const SubWeighting& o) const;

  /// Materialize as a point set (zero-weight points dropped).
  WeightedPointSet to_point_set() const;

 private:
  std::shared_ptr<const WeightedPointSet> base_;
  std::vector<double> sub_;
  double total_ = 0.0;
};

/// Pointwise minimum of two sub-weightings of the same base.
SubWeighting meet(const SubWeighting& a, const SubWeighting& b);

}  // namespace rwb
