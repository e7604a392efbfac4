#include "rwb/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "rwb/io.hpp"
#include "rwb/log.hpp"

namespace rwb {

const std::vector<std::string>& bench_algorithms() {
  static const std::vector<std::string> algos{"random", "random_o", "kmm", "kmm_o", "our_a", "our_b"};
  return algos;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

namespace {

WeightedPointSet pooled(const Instance& inst) {
  PointMatrix pts(inst.dim());
  std::vector<double> w;
  for (const auto& P : inst.distributions())
    for (std::size_t i = 0; i < P.size(); ++i) {
      pts.push_back(P.point(i));
      w.push_back(P.weight(i));
    }
  return WeightedPointSet(std::move(pts), std::move(w));
}

// k distinct pooled support points, uniformly at random
PointMatrix random_support(const Instance& inst, std::size_t k, std::uint64_t seed) {
  const WeightedPointSet U = pooled(inst);
  std::vector<std::size_t> idx(U.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  const std::size_t take = std::min(k, idx.size());
  for (std::size_t i = 0; i < take; ++i) {
    const auto r = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(idx.size() - i));
    std::swap(idx[i], idx[std::min(r, idx.size() - 1)]);
  }
  idx.resize(take);
  return gather(U, idx);
}

PointMatrix kmm_support(const Instance& inst, std::size_t k, std::uint64_t seed) {
  const WeightedPointSet U = pooled(inst);
  const double z = std::min(static_cast<double>(inst.m()) * inst.z(), U.total() - U.min_positive_weight());
  return kmeans_minus_minus(U, k, std::max(0.0, z), seed).centers;
}

}  // namespace

SynthInstance bench_instance(const BenchConfig& cfg, const CellKey& cell) {
  SynthParams p;
  p.m = cell.m;
  p.n = cfg.n;
  p.d = cell.d;
  p.k_true = cell.k;
  p.side = cfg.side;
  p.ball_scale = cfg.ball_scale;
  p.outlier_fraction = cell.z_over_n;
  p.seed = cell.seed;
  return synth_instance(p);
}

double planted_cost(const SynthInstance& inst) {
  return fixed_support_wb(inst.instance, inst.planted.points(), inst.instance.z()).cost;
}

BenchRecord run_algorithm(const SynthInstance& si, const CellKey& cell, const std::string& algo,
                          double planted, const BenchConfig& cfg) {
  const Instance& inst = si.instance;
  const auto k = static_cast<std::size_t>(inst.k());
  const std::uint64_t seed = cell.seed;
  const auto t0 = std::chrono::steady_clock::now();
  BarycenterSolution sol;
  if (algo == "random" || algo == "random_o") {
    sol = fixed_support_wb(inst, random_support(inst, k, seed), algo == "random" ? 0.0 : inst.z());
  } else if (algo == "kmm" || algo == "kmm_o") {
    sol = fixed_support_wb(inst, kmm_support(inst, k, seed), algo == "kmm" ? 0.0 : inst.z());
  } else if (algo == "our_a" || algo == "our_b") {
    ClusterLpOptions o;
    o.variant = algo == "our_a" ? Variant::A : Variant::B;
    o.lambda = cfg.lambda;
    o.seed = seed;
    o.strict_k = o.variant == Variant::A ? cfg.strict_k : true;
    o.z_remove = inst.z();
    sol = cluster_lp_barycenter(inst, o);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown bench algorithm '" + algo + "'");
  }
  const auto t1 = std::chrono::steady_clock::now();

  BenchRecord r;
  r.cell = cell;
  r.algo = algo;
  r.cost = sol.cost;
  r.planted_cost = planted;
  r.ratio = planted > 0.0 ? sol.cost / planted : (sol.cost > 0.0 ? INFINITY : 1.0);
  r.z_remove = sol.discarded;
  r.support = sol.positive_support();
  r.total_weight = sol.total_weight();
  r.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  if (algo == "our_b") {
    const double want = inst.n() - r.z_remove;
    r.structure_ok = r.support == k && std::abs(r.total_weight - want) <= 1e-9 * inst.n();
  }
  return r;
}

BenchReport run_bench(const BenchConfig& cfg) {
  for (const auto& a : cfg.algos)
    if (std::find(bench_algorithms().begin(), bench_algorithms().end(), a) == bench_algorithms().end())
      throw Error(ErrorCode::InvalidInput, "unknown bench algorithm '" + a + "'");
  for (double f : cfg.z_fracs)
    if (!(f >= 0.0) || !(f < 1.0)) throw Error(ErrorCode::InvalidInput, "z/n must lie in [0, 1)");
  if (cfg.n == 0 || cfg.ms.empty() || cfg.ds.empty() || cfg.ks.empty() || cfg.z_fracs.empty() ||
      cfg.seeds.empty() || cfg.algos.empty())
    throw Error(ErrorCode::InvalidInput, "empty sweep");

  std::vector<CellKey> cells;
  for (auto m : cfg.ms)
    for (auto d : cfg.ds)
      for (auto k : cfg.ks)
        for (double f : cfg.z_fracs)
          for (auto s : cfg.seeds) cells.push_back({m, d, k, f, s});
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  std::vector<std::vector<BenchRecord>> per_cell(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells.size()) return;
      try {
        const auto& key = cells[c];
        log_info("bench cell m=" + std::to_string(key.m) + " d=" + std::to_string(key.d) + " k=" +
                 std::to_string(key.k) + " z/n=" + format_double(key.z_over_n) + " seed=" + std::to_string(key.seed));
        const SynthInstance si = bench_instance(cfg, key);
        const double pc = planted_cost(si);
        for (const auto& a : bench_algorithms())
          if (std::find(cfg.algos.begin(), cfg.algos.end(), a) != cfg.algos.end())
            per_cell[c].push_back(run_algorithm(si, key, a, pc, cfg));
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, cells.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  BenchReport rep;
  rep.config = cfg;
  for (auto& v : per_cell)
    for (auto& r : v) rep.records.push_back(std::move(r));

  for (auto m : cfg.ms)
    for (auto d : cfg.ds)
      for (auto k : cfg.ks)
        for (double f : cfg.z_fracs)
          for (const auto& a : bench_algorithms()) {
            std::vector<double> costs, ratios;
            for (const auto& r : rep.records)
              if (r.cell.m == m && r.cell.d == d && r.cell.k == k && r.cell.z_over_n == f && r.algo == a) {
                costs.push_back(r.cost);
                ratios.push_back(r.ratio);
              }
            if (costs.empty()) continue;
            BenchAggregate g{m, d, k, f, a, costs.size()};
            g.median_cost = median(costs);
            g.median_ratio = median(ratios);
            g.p95_ratio = quantile(ratios, 0.95);
            g.frac_ratio_below_1_5 =
                static_cast<double>(std::count_if(ratios.begin(), ratios.end(), [](double x) { return x < 1.5; })) /
                static_cast<double>(ratios.size());
            rep.aggregates.push_back(std::move(g));
          }
  // canonical aggregate order (cell key, then algorithm order)
  std::stable_sort(rep.aggregates.begin(), rep.aggregates.end(), [](const auto& a, const auto& b) {
    return std::tie(a.m, a.d, a.k, a.z_over_n) < std::tie(b.m, b.d, b.k, b.z_over_n);
  });
  return rep;
}

std::string BenchReport::to_csv(bool with_time) const {
  std::string out = "m,d,k,z_over_n,seed,algo,cost,planted_cost,ratio,z_remove,support,total_weight,structure_ok";
  if (with_time) out += ",wall_seconds";
  out += "\n";
  for (const auto& r : records) {
    out += std::to_string(r.cell.m) + "," + std::to_string(r.cell.d) + "," + std::to_string(r.cell.k) + "," +
           format_double(r.cell.z_over_n) + "," + std::to_string(r.cell.seed) + "," + r.algo + "," +
           format_double(r.cost) + "," + format_double(r.planted_cost) + "," + format_double(r.ratio) + "," +
           format_double(r.z_remove) + "," + std::to_string(r.support) + "," + format_double(r.total_weight) + "," +
           (r.structure_ok ? "1" : "0");
    if (with_time) out += "," + format_double(r.wall_seconds);
    out += "\n";
  }
  return out;
}

std::string BenchReport::to_json(bool with_time) const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["version"] = kLibraryVersion;
  ordered_json env;
#if defined(__clang__)
  env["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = std::string("gcc ") + __VERSION__;
#else
  env["compiler"] = "unknown";
#endif
  env["cplusplus"] = static_cast<long>(__cplusplus);
  if (with_time) env["jobs"] = config.jobs;  // machine detail, like the timings
  j["environment"] = env;
  ordered_json c;
  c["n"] = config.n;
  c["m"] = config.ms;
  c["d"] = config.ds;
  c["k"] = config.ks;
  c["z_over_n"] = config.z_fracs;
  c["seeds"] = config.seeds;
  c["algos"] = config.algos;
  c["side"] = config.side;
  c["ball_scale"] = config.ball_scale < 0.0 ? config.side / 20.0 : config.ball_scale;
  c["lambda"] = config.lambda;
  c["strict_k"] = config.strict_k;
  c["reserved_algos"] = {"fc", "fc_o"};
  j["config"] = c;
  ordered_json recs = ordered_json::array();
  for (const auto& r : records) {
    ordered_json o;
    o["m"] = r.cell.m;
    o["d"] = r.cell.d;
    o["k"] = r.cell.k;
    o["z_over_n"] = r.cell.z_over_n;
    o["seed"] = r.cell.seed;
    o["algo"] = r.algo;
    o["cost"] = r.cost;
    o["planted_cost"] = r.planted_cost;
    o["ratio"] = r.ratio;
    o["z_remove"] = r.z_remove;
    o["support"] = r.support;
    o["total_weight"] = r.total_weight;
    o["structure_ok"] = r.structure_ok;
    if (with_time) o["wall_seconds"] = r.wall_seconds;
    recs.push_back(std::move(o));
  }
  j["records"] = recs;
  ordered_json aggs = ordered_json::array();
  for (const auto& g : aggregates) {
    aggs.push_back({{"m", g.m}, {"d", g.d}, {"k", g.k}, {"z_over_n", g.z_over_n}, {"algo", g.algo},
                    {"count", g.count}, {"median_cost", g.median_cost}, {"median_ratio", g.median_ratio},
                    {"p95_ratio", g.p95_ratio}, {"frac_ratio_below_1_5", g.frac_ratio_below_1_5}});
  }
  j["aggregates"] = aggs;
  return j.dump(2) + "\n";
}

}  // namespace rwb
