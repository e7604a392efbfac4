#pragma once

#include <optional>

#include "rwb/core.hpp"
#include "rwb/lp.hpp"

namespace rwb {

/// ||p-q||^l given the squared distance. l == 2 returns the input untouched.
double cost_from_squared(double squared, double l);

/// Dense |a| x |b| matrix of ||a_i - b_j||^l, row-major.
std::vector<double> cost_matrix(const PointMatrix& a, const PointMatrix& b, double l);

struct OtResult {
  double distance = 0.0;  // raw_cost^(1/l)
  double raw_cost = 0.0;
  /// Plan over supp P x supp Q; a trailing dummy row (z2 > 0) and/or dummy column (z1 > 0).
  TransportPlan plan;
  std::optional<SubWeighting> inliers_P;
  std::optional<SubWeighting> inliers_Q;
};

OtResult wasserstein(const WeightedPointSet& P, const WeightedPointSet& Q, double l = 2.0);

/// Balanced problem on (P + p_*) x (Q + q_*): dummy row only if z2 > 0, dummy column only if
/// z1 > 0, zero dummy costs, dummy-dummy arc forbidden.
TransportationProblem augment_with_dummies(const WeightedPointSet& P, const WeightedPointSet& Q,
                                           double z1, double z2, double l = 2.0);

/// W_{-z}(P, Q) with w(Q) = w(P) - z.
OtResult robust_wasserstein(const WeightedPointSet& P, const WeightedPointSet& Q, double z,
                            double l = 2.0);

/// Two-side version with w(Q) = w(P) - z1 + z2.
OtResult robust_wasserstein_two_side(const WeightedPointSet& P, const WeightedPointSet& Q,
                                     double z1, double z2, double l = 2.0);

/// Raw-coordinate entry point used by the barycenter code: the same dummy reduction on
/// explicit weights, skipping all validation except marginal balance.
TransportResult robust_transport(const PointMatrix& P, std::span<const double> wp,
                                 const PointMatrix& Q, std::span<const double> wq, double z1,
                                 double z2, double l);

}  // namespace rwb
