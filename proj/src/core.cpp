#include "rwb/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "rwb/config.hpp"

namespace rwb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::UnequalTotals: return "UNEQUAL_TOTALS";
    case ErrorCode::BadOutlierMass: return "BAD_OUTLIER_MASS";
    case ErrorCode::DimMismatch: return "DIM_MISMATCH";
    case ErrorCode::BaseMismatch: return "BASE_MISMATCH";
    case ErrorCode::NumericalBreakdown: return "NUMERICAL_BREAKDOWN";
    case ErrorCode::InfeasibleArcs: return "INFEASIBLE_ARCS";
    case ErrorCode::Unbalanced: return "UNBALANCED";
    case ErrorCode::TooFewPoints: return "TOO_FEW_POINTS";
    case ErrorCode::LpInfeasible: return "LP_INFEASIBLE";
    case ErrorCode::EmptySupport: return "EMPTY_SUPPORT";
    case ErrorCode::WeightMismatch: return "WEIGHT_MISMATCH";
    case ErrorCode::GridBudgetExceeded: return "GRID_BUDGET_EXCEEDED";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::NonIntegral: return "NON_INTEGRAL";
    case ErrorCode::EmptyImage: return "EMPTY_IMAGE";
    case ErrorCode::DimNot2D: return "DIM_NOT_2D";
    case ErrorCode::Io: return "IO";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

namespace {

std::string join_issues(const std::vector<Issue>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << to_string(issues[i].code) << " (" << issues[i].message << ")";
  }
  return os.str();
}

double round_significant(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", tol::kMergeDigits - 1, x);
  return std::strtod(buf, nullptr);
}

}  // namespace

InstanceError::InstanceError(std::vector<Issue> issues)
    : Error(issues.empty() ? ErrorCode::InvalidInput : issues.front().code, join_issues(issues)),
      issues_(std::move(issues)) {}

PointMatrix::PointMatrix(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0 && !coords_.empty()) throw Error(ErrorCode::InvalidInput, "zero dimension");
  if (dim_ != 0 && coords_.size() % dim_ != 0)
    throw Error(ErrorCode::DimMismatch, "coordinate count is not a multiple of the dimension");
}

void PointMatrix::push_back(std::span<const double> p) {
  if (p.size() != dim_) throw Error(ErrorCode::DimMismatch, "point dimension differs");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    double d = a[t] - b[t];
    s += d * d;
  }
  return s;
}

WeightedPointSet::WeightedPointSet(PointMatrix points, std::vector<double> weights) {
  if (points.size() != weights.size())
    throw Error(ErrorCode::InvalidInput, "point and weight counts differ");
  if (!weights.empty() && points.dim() == 0)
    throw Error(ErrorCode::InvalidInput, "dimension must be positive");
  for (double c : points.coords())
    if (!std::isfinite(c)) throw Error(ErrorCode::InvalidInput, "non-finite coordinate");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::InvalidInput, "weights must be finite and nonnegative");

  const std::size_t d = points.dim();
  points_ = PointMatrix(d);
  points_.reserve(points.size());
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<double> key(d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points[i];
    for (std::size_t t = 0; t < d; ++t) key[t] = round_significant(p[t]);
    auto [it, inserted] = seen.try_emplace(key, weights_.size());
    if (inserted) {
      points_.push_back(p);
      weights_.push_back(weights[i]);
    } else {
      weights_[it->second] += weights[i];
    }
  }
  for (double w : weights_) total_ += w;
  if (!weights_.empty() && !(total_ > 0.0))
    throw Error(ErrorCode::InvalidInput, "a nonempty point set needs positive total weight");
}

WeightedPointSet WeightedPointSet::from_rows(const std::vector<std::vector<double>>& rows,
                                             std::vector<double> weights) {
  if (rows.empty()) return WeightedPointSet(PointMatrix(1), std::move(weights));
  PointMatrix pm(rows.front().size());
  for (const auto& r : rows) pm.push_back(r);
  return WeightedPointSet(std::move(pm), std::move(weights));
}

double WeightedPointSet::min_positive_weight() const {
  double best = 0.0;
  for (double w : weights_)
    if (w > 0.0 && (best == 0.0 || w < best)) best = w;
  return best;
}

bool WeightedPointSet::integral() const {
  return std::all_of(weights_.begin(), weights_.end(),
                     [](double w) { return std::floor(w) == w; });
}

Instance Instance::with_parameters(int k, double z) const {
  InstanceSpec spec{distributions_, k, z, l_};
  return validate_instance(std::move(spec));
}

Instance validate_instance(InstanceSpec raw) {
  std::vector<Issue> issues;
  if (raw.distributions.empty()) {
    issues.push_back({ErrorCode::InvalidInput, "at least one distribution is required"});
    throw InstanceError(std::move(issues));
  }
  if (raw.k < 1) issues.push_back({ErrorCode::InvalidInput, "k must be at least 1"});
  if (!(raw.l >= 1.0) || !std::isfinite(raw.l))
    issues.push_back({ErrorCode::InvalidInput, "exponent l must be >= 1"});

  const auto& first = raw.distributions.front();
  for (std::size_t j = 0; j < raw.distributions.size(); ++j) {
    const auto& p = raw.distributions[j];
    if (p.empty()) {
      issues.push_back({ErrorCode::InvalidInput, "distribution " + std::to_string(j) + " is empty"});
      continue;
    }
    if (p.dim() != first.dim())
      issues.push_back({ErrorCode::DimMismatch, "distribution " + std::to_string(j) + " has dimension " +
                                                    std::to_string(p.dim()) + ", expected " +
                                                    std::to_string(first.dim())});
    if (!tol::close_rel(p.total(), first.total(), first.total()))
      issues.push_back({ErrorCode::UnequalTotals, "distribution " + std::to_string(j) + " totals " +
                                                      std::to_string(p.total()) + ", expected " +
                                                      std::to_string(first.total())});
  }
  const double n = first.total();
  if (!(raw.z >= 0.0) || !(raw.z < n))
    issues.push_back({ErrorCode::BadOutlierMass,
                      "z=" + std::to_string(raw.z) + " must satisfy 0 <= z < n=" + std::to_string(n)});
  if (!issues.empty()) throw InstanceError(std::move(issues));

  Instance inst;
  inst.k_ = raw.k;
  inst.z_ = raw.z;
  inst.l_ = raw.l;
  inst.n_ = n;
  double w_min = 0.0;
  for (const auto& p : raw.distributions) {
    double w = p.min_positive_weight();
    if (w_min == 0.0 || w < w_min) w_min = w;
  }
  inst.w_min_ = w_min;
  const double ratio = raw.z / w_min;
  inst.z_hat_ = static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
  inst.distributions_ = std::move(raw.distributions);
  return inst;
}

SubWeighting::SubWeighting(std::shared_ptr<const WeightedPointSet> base, std::vector<double> sub)
    : base_(std::move(base)), sub_(std::move(sub)) {
  if (!base_) throw Error(ErrorCode::InvalidInput, "sub-weighting without base");
  if (sub_.size() != base_->size())
    throw Error(ErrorCode::BaseMismatch, "sub-weight count differs from base support size");
  for (std::size_t i = 0; i < sub_.size(); ++i) {
    const double cap = base_->weight(i);
    const double slack = tol::kRelative * std::max(1.0, cap);
    if (sub_[i] < -slack || sub_[i] > cap + slack || !std::isfinite(sub_[i]))
      throw Error(ErrorCode::InvalidInput, "sub-weight outside [0, base weight] at index " +
                                               std::to_string(i));
    sub_[i] = std::clamp(sub_[i], 0.0, cap);
    total_ += sub_[i];
  }
}

SubWeighting SubWeighting::full(std::shared_ptr<const WeightedPointSet> base) {
  auto w = base->weights();
  return SubWeighting(std::move(base), std::move(w));
}

bool SubWeighting::same_base(const SubWeighting& o) const {
  return base_ == o.base_ || *base_ == *o.base_;
}

bool SubWeighting::precedes(const SubWeighting& o) const {
  if (!same_base(o)) return false;
  for (std::size_t i = 0; i < sub_.size(); ++i)
    if (sub_[i] > o.sub_[i]) return false;
  return true;
}

WeightedPointSet SubWeighting::to_point_set() const {
  PointMatrix pts(base_->dim());
  std::vector<double> w;
  for (std::size_t i = 0; i < sub_.size(); ++i) {
    if (sub_[i] > 0.0) {
      pts.push_back(base_->point(i));
      w.push_back(sub_[i]);
    }
  }
  return WeightedPointSet(std::move(pts), std::move(w));
}

SubWeighting meet(const SubWeighting& a, const SubWeighting& b) {
  if (!a.same_base(b)) throw Error(ErrorCode::BaseMismatch, "meet needs a common base");
  std::vector<double> w(a.weights().size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::min(a.weight(i), b.weight(i));
  return SubWeighting(a.base_ptr(), std::move(w));
}

}  // namespace rwb
