#pragma once

#include <initializer_list>
#include <random>
#include <vector>

#include "rwb/core.hpp"

namespace testing_util {

inline rwb::WeightedPointSet line(std::initializer_list<double> xs, std::vector<double> w = {}) {
  std::vector<std::vector<double>> rows;
  for (double x : xs) rows.push_back({x});
  if (w.empty()) w.assign(rows.size(), 1.0);
  return rwb::WeightedPointSet::from_rows(rows, std::move(w));
}

inline rwb::PointMatrix line_points(std::initializer_list<double> xs) {
  rwb::PointMatrix m(1);
  for (double x : xs) m.push_back(std::vector<double>{x});
  return m;
}

inline rwb::Instance make_instance(std::vector<rwb::WeightedPointSet> ds, int k, double z, double l = 2.0) {
  rwb::InstanceSpec s;
  s.distributions = std::move(ds);
  s.k = k;
  s.z = z;
  s.l = l;
  return rwb::validate_instance(std::move(s));
}

// Random integral point set: `size` distinct points in [0,10)^d with weights in 1..maxw.
inline rwb::WeightedPointSet random_integral(std::mt19937_64& rng, std::size_t size, std::size_t d, int maxw) {
  std::uniform_int_distribution<int> wdist(1, maxw);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  rwb::PointMatrix pts(d);
  std::vector<double> w;
  std::vector<double> x(d);
  for (std::size_t i = 0; i < size; ++i) {
    for (double& v : x) v = coord(rng);
    pts.push_back(x);
    w.push_back(wdist(rng));
  }
  return rwb::WeightedPointSet(std::move(pts), std::move(w));
}

}  // namespace testing_util
