// Acceptance run: one PASS/FAIL line per criterion, tolerances printed with each line.
// Exit status is 0 when the set of failing criteria equals --expect-fail (empty by default).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwb/barycenter.hpp"
#include "rwb/bench.hpp"
#include "rwb/clustering.hpp"
#include "rwb/data.hpp"
#include "rwb/io.hpp"
#include "rwb/lp.hpp"
#include "rwb/oracle.hpp"
#include "rwb/ot.hpp"

using namespace rwb;

namespace {

struct Outcome {
  std::string id;
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

std::mt19937_64 seeded(std::uint64_t criterion, std::uint64_t i) { return std::mt19937_64(criterion * 1'000'003ull + i); }

WeightedPointSet random_set(std::mt19937_64& rng, std::size_t size, std::size_t d, std::vector<double> w) {
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  PointMatrix pts(d);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < size; ++i) {
    for (double& v : x) v = coord(rng);
    pts.push_back(x);
  }
  return WeightedPointSet(std::move(pts), std::move(w));
}

// `total` integral units over `parts` entries, each in 1..cap
std::vector<double> random_composition(std::mt19937_64& rng, long total, std::size_t parts, long cap) {
  std::vector<double> w(parts, 1.0);
  long left = total - static_cast<long>(parts);
  std::uniform_int_distribution<std::size_t> pick(0, parts - 1);
  while (left > 0) {
    const std::size_t s = pick(rng);
    if (w[s] < static_cast<double>(cap)) {
      w[s] += 1.0;
      --left;
    }
  }
  return w;
}

// ---------------------------------------------------------------------------------------------

Outcome robust_ot_vs_definition() {
  const double tol = 1e-7;
  OracleBudget budget;
  budget.max_support = 12;
  budget.max_total = 30.0;
  double worst = 0.0;
  std::size_t bad = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rng = seeded(1, i);
    const double l = i % 2 == 0 ? 2.0 : 1.0;
    const std::size_t d = 1 + rng() % 3;
    const std::size_t np = 1 + rng() % 6;
    std::vector<double> wp(np);
    for (double& v : wp) v = static_cast<double>(1 + rng() % 5);
    long n = 0;
    for (double v : wp) n += static_cast<long>(v);
    const long z = static_cast<long>(rng() % static_cast<std::uint64_t>(n / 2 + 1));
    const long mass = n - z;
    const std::size_t lo = static_cast<std::size_t>((mass + 4) / 5);
    const std::size_t hi = std::min<std::size_t>(12, static_cast<std::size_t>(mass));
    const std::size_t nq = lo + rng() % (hi - lo + 1);
    WeightedPointSet P = random_set(rng, np, d, wp);
    WeightedPointSet Q = random_set(rng, nq, d, random_composition(rng, mass, nq, 5));
    const double got = robust_wasserstein(P, Q, static_cast<double>(z), l).raw_cost;
    const double want = brute_force_robust_ot(P, Q, static_cast<double>(z), l, budget);
    const double e = rel_err(got, want);
    worst = std::max(worst, e);
    if (e > tol) ++bad;
  }
  return {"1", bad == 0, fmt("200 instances, %zu over tolerance, max rel err %.3g (tol %.0e rel)", bad, worst, tol)};
}

Outcome simplex_vs_flow() {
  const double tol = 1e-8;
  double worst = 0.0;
  std::size_t bad = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = seeded(2, i);
    const std::size_t rows = 1 + rng() % 12;
    std::size_t cols = 1 + rng() % 12;
    // quarter units so some masses are fractional
    std::vector<double> supplies(rows);
    long units = 0;
    for (double& s : supplies) {
      const long u = 1 + static_cast<long>(rng() % 20);
      s = static_cast<double>(u) / 4.0;
      units += u;
    }
    cols = std::min<std::size_t>(cols, static_cast<std::size_t>(units));
    std::vector<double> demands = random_composition(rng, units, cols, units);
    for (double& v : demands) v /= 4.0;
    std::uniform_real_distribution<double> c(0.0, 10.0);
    std::vector<double> cost(rows * cols);
    for (double& v : cost) v = c(rng);
    auto t = TransportationProblem::from_costs(rows, cols, cost, supplies, demands);
    const double flow = solve_transportation(t).cost;
    const double lp = solve_lp(transportation_as_lp(t)).objective;
    const double e = rel_err(flow, lp);
    worst = std::max(worst, e);
    if (e > tol) ++bad;
  }
  return {"2", bad == 0, fmt("100 instances up to 12x12, %zu over tolerance, max rel err %.3g (tol %.0e rel)", bad, worst, tol)};
}

struct TinyCase {
  WeightedPointSet P;
  int k;
  double z;
};

std::vector<TinyCase> tiny_corpus() {
  std::vector<TinyCase> out;
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto rng = seeded(3, i);
    const std::size_t n = 3 + rng() % 4;
    const std::size_t d = 1 + rng() % 2;
    const int k = 1 + static_cast<int>(rng() % 2);
    const double z = static_cast<double>(rng() % 3);
    out.push_back({random_set(rng, n, d, std::vector<double>(n, 1.0)), k, z});
  }
  return out;
}

OracleBudget tiny_budget() {
  OracleBudget b;
  b.max_support = 6;
  b.max_k = 4;
  b.max_total = 6.0;
  return b;
}

Outcome sparse_wb_vs_kmeans(const std::vector<TinyCase>& corpus) {
  const double tol = 1e-9;
  const OracleBudget budget = tiny_budget();
  double worst = 0.0;
  std::size_t bad = 0;
  for (const TinyCase& c : corpus) {
    InstanceSpec spec;
    spec.distributions = {c.P};
    spec.k = c.k;
    spec.z = c.z;
    const Instance inst = validate_instance(std::move(spec));
    const double wb = brute_force_sparse_wb(inst, subset_centroids(c.P), budget).cost;
    const double km = brute_force_kmeans_outliers(c.P, static_cast<std::size_t>(c.k), c.z, budget).cost;
    const double e = std::abs(wb - km) / std::max(1.0, std::abs(km));
    worst = std::max(worst, e);
    if (e > tol) ++bad;
  }
  return {"3", bad == 0,
          fmt("%zu instances, %zu over tolerance, max err %.3g (tol %.0e rel, floor 1)", corpus.size(), bad, worst, tol)};
}

Outcome more_centers_beat_outliers(const std::vector<TinyCase>& corpus) {
  const OracleBudget budget = tiny_budget();
  std::size_t bad = 0;
  for (const TinyCase& c : corpus) {
    // unit weights: z_hat = ceil(z / 1) = z
    const auto z_hat = static_cast<std::size_t>(std::ceil(c.z));
    const std::size_t more = std::min(c.P.size(), static_cast<std::size_t>(c.k) + z_hat);
    const double lhs = brute_force_kmeans_outliers(c.P, more, 0.0, budget).cost;
    const double rhs = brute_force_kmeans_outliers(c.P, static_cast<std::size_t>(c.k), c.z, budget).cost;
    if (lhs > rhs * (1.0 + 1e-12) + 1e-12) ++bad;
  }
  return {"4", bad == 0, fmt("%zu instances, %zu violations (slack 1e-12 rel + 1e-12 abs)", corpus.size(), bad)};
}

// Anchor sets from the grid runs only know the clustering cost, not the clustering itself.
struct AnchorCheck {
  WeightedPointSet P;
  AnchorSet anchors;
  std::optional<WeightedPointSet> T;
};

std::vector<AnchorCheck> g_anchor_log;

void log_grid_anchors(const Instance& inst, const std::vector<AnchorSet>& sets) {
  for (std::size_t j = 0; j < sets.size() && j < inst.m(); ++j)
    g_anchor_log.push_back({inst.distributions()[j], sets[j], std::nullopt});
}

Outcome anchor_inequality() {
  for (std::uint64_t i = 0; i < 60; ++i) {
    auto rng = seeded(5, i);
    const std::size_t d = 1 + rng() % 3;
    const std::size_t n = 5 + rng() % 36;
    std::uniform_real_distribution<double> wd(0.5, 3.0);
    std::vector<double> w(n);
    for (double& v : w) v = wd(rng);
    WeightedPointSet P = random_set(rng, n, d, w);
    const std::size_t t = 1 + rng() % 6;
    const double eps1 = std::array{1.0, 0.5, 0.25, 0.1}[i % 4];
    const double alpha = i % 3 == 0 ? 2.0 : 1.0;
    ClusteringResult cl = bicriteria_clustering(P, t, i);
    AnchorSet as = build_anchor_points(P, cl, eps1, alpha);
    g_anchor_log.push_back({P, std::move(as), cluster_summary(P, cl.centers)});
  }
  const double slack = 1e-9;
  std::size_t bad = 0, exact = 0;
  double worst = 0.0;
  for (const AnchorCheck& a : g_anchor_log) {
    const double lhs = wasserstein(a.P, a.anchors.as_point_set(), 2.0).raw_cost;
    double wpt = a.anchors.clustering_cost;
    if (a.T) {
      wpt = wasserstein(a.P, *a.T, 2.0).raw_cost;
      ++exact;
    }
    const double bound = 1.25 * a.anchors.eps1 * a.anchors.eps1 / a.anchors.alpha * wpt;
    if (bound > 0.0) worst = std::max(worst, lhs / bound);
    if (lhs > bound * (1.0 + slack) + 1e-12) ++bad;
  }
  return {"5", bad == 0,
          fmt("%zu anchor sets (%zu with exact W(P,T), %zu from grid runs), %zu violations, max lhs/bound %.3f "
              "(slack %.0e rel)",
              g_anchor_log.size(), exact, g_anchor_log.size() - exact, bad, worst, slack)};
}

// ---------------------------------------------------------------------------------------------

struct RatioStats {
  double median = 0.0, p95 = 0.0, below_1_5 = 0.0;
};

RatioStats stats(const std::vector<double>& r) {
  RatioStats s;
  s.median = median(r);
  s.p95 = quantile(r, 0.95);
  for (double v : r) s.below_1_5 += v < 1.5 ? 1.0 : 0.0;
  s.below_1_5 /= static_cast<double>(r.size());
  return s;
}

std::pair<Outcome, Outcome> planted_ratio(std::size_t seeds) {
  BenchConfig cfg;
  cfg.strict_k = true;
  bool ok_default = true, ok_strict = true;
  std::string det_default, det_strict;
  for (double zf : {0.0, 0.05, 0.1}) {
    std::vector<double> plain, strict;
    for (std::uint64_t s = 0; s < seeds; ++s) {
      const CellKey cell{4, 10, 5, zf, s};
      const SynthInstance si = bench_instance(cfg, cell);
      const double planted = planted_cost(si);
      ClusterLpOptions o;
      o.variant = Variant::A;
      o.seed = s;
      plain.push_back(cluster_lp_barycenter(si.instance, o).cost / planted);
      strict.push_back(run_algorithm(si, cell, "our_a", planted, cfg).ratio);
    }
    const RatioStats a = stats(plain), b = stats(strict);
    ok_default = ok_default && a.median <= 2.0 && a.p95 <= 4.0;
    ok_strict = ok_strict && b.median <= 2.0 && b.p95 <= 4.0;
    det_default += fmt(" z/n=%.2f: median %.3f p95 %.3f <1.5: %.0f%%;", zf, a.median, a.p95, 100 * a.below_1_5);
    det_strict += fmt(" z/n=%.2f: median %.3f p95 %.3f;", zf, b.median, b.p95);
  }
  const std::string head = fmt("variant A, n=500 m=4 d=10 k=5, %zu seeds per z/n (need median <= 2.0, p95 <= 4.0 each)", seeds);
  return {{"6", ok_default, head + " [lambda=2, all LP support kept]" + det_default},
          {"6b", ok_strict, "monitor: same with the k heaviest points kept (bench Our_A)" + det_strict}};
}

bool b_structure(const BarycenterSolution& sol, const Instance& inst, double z_remove) {
  std::size_t positive = 0;
  double sum = 0.0;
  for (double w : sol.weights) {
    positive += w > 0.0 ? 1 : 0;
    sum += w;
  }
  return positive == static_cast<std::size_t>(inst.k()) &&
         std::abs(sum - (inst.n() - z_remove)) <= 1e-9 * inst.n();
}

std::pair<Outcome, Outcome> variant_b_structure(const BenchReport& fig2) {
  std::size_t runs = 0, bad = 0, runs2 = 0, bad2 = 0;
  std::string det2;
  for (const BenchRecord& r : fig2.records)
    if (r.algo == "our_b") {
      ++runs;
      bad += r.structure_ok ? 0 : 1;
    }
  BenchConfig cfg;
  for (std::size_t m : {2, 4})
    for (std::size_t d : {2, 10})
      for (std::size_t k : {5, 10})
        for (double zf : {0.0, 0.05, 0.1}) {
          const CellKey cell{m, d, k, zf, 0};
          const SynthInstance si = bench_instance(cfg, cell);
          // the bench configuration (z removed) first, then the library default (2z)
          ClusterLpOptions o;
          o.variant = Variant::B;
          o.strict_k = true;
          o.seed = cell.seed;
          o.z_remove = si.instance.z();
          const BarycenterSolution sol = cluster_lp_barycenter(si.instance, o);
          ++runs;
          bad += b_structure(sol, si.instance, sol.discarded) ? 0 : 1;
          if (zf == 0.0) continue;
          o.z_remove.reset();
          const BarycenterSolution sol2 = cluster_lp_barycenter(si.instance, o);
          ++runs2;
          if (!b_structure(sol2, si.instance, sol2.discarded)) {
            ++bad2;
            det2 += fmt(" m=%zu d=%zu k=%zu z/n=%.2f -> %zu points;", m, d, k, zf, sol2.positive_support());
          }
        }
  return {{"7", bad == 0,
           fmt("%zu variant B bench runs (10-seed noisy cell + 24-cell sweep, z_remove = z), %zu with != k positive "
               "points or sum w != n - z_remove (tol 1e-9 n)",
               runs, bad)},
          {"7b", bad2 == 0, fmt("monitor: z_remove = 2z on the 16 noisy sweep cells, %zu of %zu short of k;", bad2, runs2) + det2}};
}

Outcome noise_direction(const BenchReport& rep) {
  auto med = [&](const std::string& algo) {
    for (const BenchAggregate& a : rep.aggregates)
      if (a.algo == algo) return a.median_cost;
    return std::nan("");
  };
  const double rnd = med("random"), kmm = med("kmm"), a = med("our_a"), b = med("our_b");
  const bool ok = a < rnd && a < kmm && b < rnd && b < kmm;
  return {"8", ok,
          fmt("m=4 d=10 k=5 z/n=0.05, 10 seeds, median cost: random %.1f random_o %.1f kmm %.1f kmm_o %.1f our_a %.1f "
              "our_b %.1f (need our_a, our_b < random, kmm)",
              rnd, med("random_o"), kmm, med("kmm_o"), a, b)};
}

Outcome grid_monotone() {
  SynthParams p;
  p.m = 3;
  p.n = 60;
  p.d = 2;
  p.k_true = 2;
  p.ball_scale = 0.0;
  p.outlier_fraction = 0.0;
  p.seed = 9;
  const SynthInstance si = synth_instance(p);
  const double planted = planted_cost(si);
  std::vector<double> costs;
  std::string det;
  for (double eps : {1.0, 0.5, 0.25}) {
    GridOptions o;
    o.eps = eps;
    std::vector<AnchorSet> anchors;
    const auto t0 = std::chrono::steady_clock::now();
    const BarycenterSolution sol = grid_barycenter(si.instance, o, &anchors);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log_grid_anchors(si.instance, anchors);
    costs.push_back(sol.cost);
    det += fmt(" eps=%.2f cost %.6g |G|=%zu %.1fs;", eps, sol.cost, sol.meta.candidate_support, secs);
  }
  const double slack = 1e-9;
  const bool mono = costs[1] <= costs[0] * (1 + slack) + 1e-12 && costs[2] <= costs[1] * (1 + slack) + 1e-12;
  const bool near = costs[2] <= 1.1 * planted;
  return {"9", mono && near,
          fmt("2-D, m=3 n=60 k=2, planted cost %.6g;", planted) + det +
              fmt(" non-increasing %s (slack %.0e rel), eps=0.25 within 1.1x planted %s", mono ? "yes" : "no", slack,
                  near ? "yes" : "no")};
}

// A spread-out 2-D instance: reports how far the grid gets under the default cap.
Outcome grid_monitor() {
  SynthParams p;
  p.m = 2;
  p.n = 4;
  p.d = 2;
  p.k_true = 2;
  p.outlier_fraction = 0.0;
  p.seed = 4;
  const SynthInstance si = synth_instance(p);
  const double planted = planted_cost(si);
  std::string det = fmt(" planted cost %.6g;", planted);
  std::vector<double> costs;
  for (double eps : {1.0, 0.5, 0.25}) {
    GridOptions o;
    o.eps = eps;
    try {
      std::vector<AnchorSet> anchors;
      const BarycenterSolution sol = grid_barycenter(si.instance, o, &anchors);
      log_grid_anchors(si.instance, anchors);
      costs.push_back(sol.cost);
      det += fmt(" eps=%.2f cost %.6g |G|=%zu;", eps, sol.cost, sol.meta.candidate_support);
    } catch (const Error& e) {
      det += fmt(" eps=%.2f %s;", eps, std::string(to_string(e.code())).c_str());
    }
  }
  bool ok = costs.size() == 3 && costs[1] <= costs[0] * (1 + 1e-9) && costs[2] <= costs[1] * (1 + 1e-9) &&
            costs[2] <= 1.1 * planted;
  return {"9b", ok, "monitor: 2-D m=2 n=4 k=2 with Gaussian balls, cap 1e6;" + det};
}

Outcome determinism(const std::filesystem::path& fixtures) {
  std::size_t compared = 0, differ = 0;
  std::string det;
  for (const char* name : {"tiny_line.json", "planted_2d.json", "planted_10d.json"}) {
    const Instance inst = read_instance_json(fixtures / name);
    for (const char* algo : {"cluster-a", "cluster-b", "grid"}) {
      auto once = [&]() -> std::string {
        try {
          BarycenterSolution sol;
          if (std::string(algo) == "grid") {
            GridOptions o;
            o.seed = 3;
            std::vector<AnchorSet> anchors;
            sol = grid_barycenter(inst, o, &anchors);
            log_grid_anchors(inst, anchors);
          } else {
            ClusterLpOptions o;
            o.variant = std::string(algo) == "cluster-a" ? Variant::A : Variant::B;
            o.seed = 3;
            sol = cluster_lp_barycenter(inst, o);
          }
          return solution_to_json(sol);
        } catch (const Error& e) {
          return std::string("error ") + e.what();
        }
      };
      const std::string a = once(), b = once();
      ++compared;
      if (a != b) {
        ++differ;
        det += fmt(" %s/%s differs;", name, algo);
      }
      if (a.rfind("error", 0) == 0) det += fmt(" %s/%s -> %s;", name, algo, a.substr(6, a.find(':') - 6).c_str());
    }
  }
  return {"10", differ == 0,
          fmt("3 fixtures x 3 algorithms rerun in process, %zu of %zu outputs differ (byte compare);", differ, compared) +
              det};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("acceptance run");
  std::string fixtures = RWB_FIXTURE_DIR;
  std::vector<std::string> expect_fail;
  std::vector<std::string> only;
  std::size_t seeds6 = 20;
  std::string report;
  app.add_option("--fixtures", fixtures, "fixture directory");
  app.add_option("--expect-fail", expect_fail, "criteria known to fail")->delimiter(',');
  app.add_option("--only", only, "run a subset of criteria")->delimiter(',');
  app.add_option("--seeds6", seeds6, "seeds per noise level for criterion 6");
  app.add_option("--report", report, "also write the criterion lines to this file");
  CLI11_PARSE(app, argc, argv);

  const std::set<std::string> want(only.begin(), only.end());
  auto enabled = [&](const std::string& id) { return want.empty() || want.contains(id); };
  std::vector<Outcome> results;
  auto timed = [&](const std::string& id, const std::function<std::vector<Outcome>()>& f) {
    if (!enabled(id)) return;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Outcome> out;
    try {
      out = f();
    } catch (const std::exception& e) {
      out = {{id, false, std::string("threw: ") + e.what()}};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (Outcome& o : out) {
      std::printf("criterion %-3s %s  %s [%.1fs]\n", o.id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
      std::fflush(stdout);
      results.push_back(std::move(o));
    }
  };

  const auto corpus = tiny_corpus();
  timed("1", [] { return std::vector{robust_ot_vs_definition()}; });
  timed("2", [] { return std::vector{simplex_vs_flow()}; });
  timed("3", [&] { return std::vector{sparse_wb_vs_kmeans(corpus)}; });
  timed("4", [&] { return std::vector{more_centers_beat_outliers(corpus)}; });

  // 9 and 10 feed grid anchor sets into 5, so they run first and print in order afterwards
  std::vector<Outcome> deferred;
  auto hold = [&](const std::string& id, auto f) {
    if (!enabled(id) && !enabled("5")) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {id, false, std::string("threw: ") + e.what()};
    }
    o.detail += fmt(" [%.1fs]", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (enabled(id)) deferred.push_back(std::move(o));
  };
  hold("9", grid_monotone);
  hold("9b", grid_monitor);
  hold("10", [&] { return determinism(fixtures); });
  timed("5", [] { return std::vector{anchor_inequality()}; });

  timed("6", [&] {
    auto [a, b] = planted_ratio(seeds6);
    return std::vector{a, b};
  });

  BenchReport fig2;
  if (enabled("7") || enabled("8")) {
    BenchConfig cfg;
    cfg.ms = {4};
    cfg.ds = {10};
    cfg.ks = {5};
    cfg.z_fracs = {0.05};
    cfg.seeds.clear();
    for (std::uint64_t s = 0; s < 10; ++s) cfg.seeds.push_back(s);
    const auto t0 = std::chrono::steady_clock::now();
    fig2 = run_bench(cfg);
    std::printf("  (contaminated bench cell took %.1fs)\n",
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  timed("7", [&] {
    auto [a, b] = variant_b_structure(fig2);
    return std::vector{a, b};
  });
  timed("8", [&] { return std::vector{noise_direction(fig2)}; });
  for (Outcome& o : deferred) {
    std::printf("criterion %-3s %s  %s\n", o.id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    results.push_back(std::move(o));
  }

  std::set<std::string> failed;
  for (const Outcome& o : results)
    if (!o.pass && o.id.find('b') == std::string::npos) failed.insert(o.id);
  std::set<std::string> expected;
  for (const std::string& e : expect_fail)
    if (enabled(e)) expected.insert(e);
  std::printf("summary: %zu criteria run, failing {", results.size());
  for (const auto& f : failed) std::printf(" %s", f.c_str());
  std::printf(" }, expected failing {");
  for (const auto& f : expected) std::printf(" %s", f.c_str());
  std::printf(" }; monitors (b) are informational\n");
  if (!report.empty()) {
    std::FILE* f = std::fopen(report.c_str(), "w");
    if (!f) return 1;
    for (const Outcome& o : results)
      std::fprintf(f, "criterion %-3s %s  %s\n", o.id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fclose(f);
  }
  return failed == expected ? 0 : 1;
}
