#include "rwb/ot.hpp"

#include <cmath>
#include <memory>

#include "rwb/config.hpp"

namespace rwb {

double cost_from_squared(double squared, double l) {
  if (l == 2.0) return squared;
  if (squared == 0.0) return 0.0;
  const double r = std::sqrt(squared);
  if (l == std::floor(l) && l <= 16.0) {
    double v = 1.0;
    for (int e = 0; e < static_cast<int>(l); ++e) v *= r;
    return v;
  }
  return std::exp(0.5 * l * std::log(squared));
}

std::vector<double> cost_matrix(const PointMatrix& a, const PointMatrix& b, double l) {
  std::vector<double> c(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i * b.size() + j] = cost_from_squared(squared_distance(a[i], b[j]), l);
  return c;
}

namespace {

TransportationProblem build_augmented(const PointMatrix& P, std::span<const double> wp,
                                      const PointMatrix& Q, std::span<const double> wq, double z1,
                                      double z2, double l) {
  const std::size_t n1 = P.size(), n2 = Q.size();
  const bool drow = z2 > 0.0, dcol = z1 > 0.0;
  const std::size_t R = n1 + (drow ? 1 : 0), C = n2 + (dcol ? 1 : 0);
  TransportationProblem t;
  t.rows = R;
  t.cols = C;
  t.cost.assign(R * C, 0.0);
  t.forbidden.assign(R * C, 0);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      t.cost[i * C + j] = cost_from_squared(squared_distance(P[i], Q[j]), l);
  if (drow && dcol) t.forbidden[R * C - 1] = 1;
  t.supplies.assign(wp.begin(), wp.end());
  if (drow) t.supplies.push_back(z2);
  t.demands.assign(wq.begin(), wq.end());
  if (dcol) t.demands.push_back(z1);
  return t;
}

void check_pair(const WeightedPointSet& P, const WeightedPointSet& Q) {
  if (P.empty() || Q.empty()) throw Error(ErrorCode::InvalidInput, "empty point set");
  if (P.dim() != Q.dim())
    throw Error(ErrorCode::DimMismatch, "dimensions " + std::to_string(P.dim()) + " and " +
                                            std::to_string(Q.dim()) + " differ");
}

OtResult finish(const WeightedPointSet& P, const WeightedPointSet& Q, TransportResult tr, double l,
                bool with_p, bool with_q) {
  OtResult r;
  r.raw_cost = tr.cost;
  r.distance = r.raw_cost <= 0.0 ? 0.0 : std::pow(r.raw_cost, 1.0 / l);
  const std::size_t n1 = P.size(), n2 = Q.size();
  if (with_p) {
    std::vector<double> w(n1, 0.0);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n2; ++j) w[i] += tr.plan.at(i, j);
    r.inliers_P.emplace(std::make_shared<const WeightedPointSet>(P), std::move(w));
  }
  if (with_q) {
    std::vector<double> w(n2, 0.0);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n2; ++j) w[j] += tr.plan.at(i, j);
    r.inliers_Q.emplace(std::make_shared<const WeightedPointSet>(Q), std::move(w));
  }
  r.plan = std::move(tr.plan);
  return r;
}

}  // namespace

TransportationProblem augment_with_dummies(const WeightedPointSet& P, const WeightedPointSet& Q,
                                           double z1, double z2, double l) {
  check_pair(P, Q);
  if (z1 < 0.0 || z1 > P.total() * (1.0 + tol::kRelative))
    throw Error(ErrorCode::BadOutlierMass, "z1 must lie in [0, w(P)]");
  if (z2 < 0.0 || z2 > Q.total() * (1.0 + tol::kRelative))
    throw Error(ErrorCode::BadOutlierMass, "z2 must lie in [0, w(Q)]");
  return build_augmented(P.points(), P.weights(), Q.points(), Q.weights(), z1, z2, l);
}

TransportResult robust_transport(const PointMatrix& P, std::span<const double> wp,
                                 const PointMatrix& Q, std::span<const double> wq, double z1,
                                 double z2, double l) {
  return solve_transportation(build_augmented(P, wp, Q, wq, z1, z2, l));
}

OtResult wasserstein(const WeightedPointSet& P, const WeightedPointSet& Q, double l) {
  check_pair(P, Q);
  if (!tol::close_rel(P.total(), Q.total(), P.total()))
    throw Error(ErrorCode::Unbalanced, "w(P)=" + std::to_string(P.total()) +
                                           " differs from w(Q)=" + std::to_string(Q.total()));
  auto tr = robust_transport(P.points(), P.weights(), Q.points(), Q.weights(), 0.0, 0.0, l);
  return finish(P, Q, std::move(tr), l, false, false);
}

OtResult robust_wasserstein(const WeightedPointSet& P, const WeightedPointSet& Q, double z,
                            double l) {
  return robust_wasserstein_two_side(P, Q, z, 0.0, l);
}

OtResult robust_wasserstein_two_side(const WeightedPointSet& P, const WeightedPointSet& Q,
                                     double z1, double z2, double l) {
  check_pair(P, Q);
  const double n = P.total();
  if (!(z1 >= 0.0) || !(z1 < n))
    throw Error(ErrorCode::BadOutlierMass, "z1 must satisfy 0 <= z1 < w(P)");
  if (!(z2 >= 0.0)) throw Error(ErrorCode::BadOutlierMass, "z2 must be nonnegative");
  const double expected = n - z1 + z2;
  if (!tol::close_rel(Q.total(), expected, n))
    throw Error(ErrorCode::Unbalanced, "w(Q)=" + std::to_string(Q.total()) + " but expected " +
                                           std::to_string(expected));
  auto tr = robust_transport(P.points(), P.weights(), Q.points(), Q.weights(), z1, z2, l);
  return finish(P, Q, std::move(tr), l, z1 > 0.0, z2 > 0.0);
}

}  // namespace rwb
