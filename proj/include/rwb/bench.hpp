#pragma once

#include <string>
#include <vector>

#include "rwb/data.hpp"
#include "rwb/barycenter.hpp"

namespace rwb {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Algorithms the harness knows, in report order.
const std::vector<std::string>& bench_algorithms();

struct BenchConfig {
  std::size_t n = 500;
  std::vector<std::size_t> ms{2, 4};
  std::vector<std::size_t> ds{2, 10};
  std::vector<std::size_t> ks{5, 10};
  std::vector<double> z_fracs{0.0, 0.05, 0.1};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  std::vector<std::string> algos = bench_algorithms();
  double side = 10.0;
  double ball_scale = -1.0;
  int lambda = 2;
  bool strict_k = true;  // variant A keeps the k heaviest points, as in the experiments
  std::size_t jobs = 1;
};

struct CellKey {
  std::size_t m = 0, d = 0, k = 0;
  double z_over_n = 0.0;
  std::uint64_t seed = 0;
  auto operator<=>(const CellKey&) const = default;
};

struct BenchRecord {
  CellKey cell;
  std::string algo;
  double cost = 0.0;
  double planted_cost = 0.0;
  double ratio = 0.0;
  double z_remove = 0.0;
  std::size_t support = 0;       // positive-weight support points
  double total_weight = 0.0;
  double wall_seconds = 0.0;
  bool structure_ok = true;      // variant B: exactly k positive points, sum w = n - z_remove
};

struct BenchAggregate {
  std::size_t m = 0, d = 0, k = 0;
  double z_over_n = 0.0;
  std::string algo;
  std::size_t count = 0;
  double median_cost = 0.0;
  double median_ratio = 0.0;
  double p95_ratio = 0.0;
  double frac_ratio_below_1_5 = 0.0;
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchRecord> records;  // sorted by (cell, algo order)
  std::vector<BenchAggregate> aggregates;

  std::string to_csv(bool with_time = true) const;
  std::string to_json(bool with_time = true) const;
};

/// Runs one algorithm on one synthetic instance.
BenchRecord run_algorithm(const SynthInstance& inst, const CellKey& cell, const std::string& algo,
                          double planted_cost, const BenchConfig& cfg);

/// Cost of the fixed-support LP on the planted support with z removed (ratio denominator).
double planted_cost(const SynthInstance& inst);

SynthInstance bench_instance(const BenchConfig& cfg, const CellKey& cell);

BenchReport run_bench(const BenchConfig& cfg);

/// Linear-interpolation quantile (q in [0,1]) of unsorted values.
double quantile(std::vector<double> v, double q);
double median(std::vector<double> v);

}  // namespace rwb
