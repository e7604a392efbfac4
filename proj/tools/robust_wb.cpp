#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwb/bench.hpp"
#include "rwb/data.hpp"
#include "rwb/io.hpp"
#include "rwb/log.hpp"
#include "rwb/oracle.hpp"
#include "rwb/ot.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

int exit_code_for(rwb::ErrorCode c) {
  switch (c) {
    case rwb::ErrorCode::GridBudgetExceeded:
    case rwb::ErrorCode::BudgetExceeded:
      return 3;
    case rwb::ErrorCode::NumericalBreakdown:
    case rwb::ErrorCode::Internal:
      return 4;
    default:
      return 2;
  }
}

struct DistArgs {
  std::string a, b, json;
  double z = 0.0, z2 = 0.0, l = 2.0;
};

int cmd_dist(const DistArgs& args) {
  const auto P = rwb::read_point_set_csv(args.a);
  const auto Q = rwb::read_point_set_csv(args.b);
  const auto r = rwb::robust_wasserstein_two_side(P, Q, args.z, args.z2, args.l);
  std::cout << "distance " << rwb::format_double(r.distance) << "\n";
  std::cout << "raw_cost " << rwb::format_double(r.raw_cost) << "\n";
  if (!args.json.empty()) {
    ordered_json j;
    j["distance"] = r.distance;
    j["raw_cost"] = r.raw_cost;
    j["z"] = args.z;
    j["z2"] = args.z2;
    j["l"] = args.l;
    ordered_json flows = ordered_json::array();
    for (std::size_t i = 0; i < r.plan.rows; ++i)
      for (std::size_t c = 0; c < r.plan.cols; ++c)
        if (r.plan.at(i, c) > 0.0) flows.push_back({i, c, r.plan.at(i, c)});
    j["plan_shape"] = {r.plan.rows, r.plan.cols};
    j["plan"] = flows;  // [row, col, mass]; the last row/column is the dummy when present
    if (r.inliers_P) j["inliers_a"] = r.inliers_P->weights();
    if (r.inliers_Q) j["inliers_b"] = r.inliers_Q->weights();
    rwb::write_text_file(args.json, j.dump(2) + "\n");
  }
  return 0;
}

struct SolveArgs {
  std::string instance, out, algo = "cluster-a";
  std::optional<int> k;
  std::optional<double> z, z_remove;
  int lambda = 2;
  double eps = 0.5;
  std::uint64_t seed = 0;
  bool strict_k = false;
  std::size_t cap = rwb::tol::kDefaultGridCap;
};

rwb::BarycenterSolution solve_instance(const rwb::Instance& inst, const SolveArgs& a) {
  if (a.algo == "cluster-a" || a.algo == "cluster-b") {
    rwb::ClusterLpOptions o;
    o.variant = a.algo == "cluster-a" ? rwb::Variant::A : rwb::Variant::B;
    o.lambda = a.lambda;
    o.seed = a.seed;
    o.strict_k = a.strict_k;
    o.z_remove = a.z_remove ? *a.z_remove : inst.z();
    return rwb::cluster_lp_barycenter(inst, o);
  }
  if (a.algo == "grid") {
    rwb::GridOptions o;
    o.eps = a.eps;
    o.lambda = a.lambda;
    o.seed = a.seed;
    o.cap = a.cap;
    return rwb::grid_barycenter(inst, o);
  }
  throw rwb::Error(rwb::ErrorCode::InvalidInput, "unknown algorithm '" + a.algo + "'");
}

int cmd_solve(const SolveArgs& a) {
  rwb::Instance inst = rwb::read_instance_json(a.instance);
  if (a.k || a.z) inst = inst.with_parameters(a.k.value_or(inst.k()), a.z.value_or(inst.z()));
  const auto sol = solve_instance(inst, a);
  const std::string json = rwb::solution_to_json(sol);
  if (a.out.empty())
    std::cout << json;
  else
    rwb::write_text_file(a.out, json);
  std::cerr << "cost " << rwb::format_double(sol.cost) << "\n";
  return 0;
}

struct BenchArgs {
  rwb::BenchConfig cfg;
  std::size_t seed_count = 5;
  std::uint64_t seed_base = 0;
  std::string out = "bench";
  bool no_time = false;
};

int cmd_bench(BenchArgs a) {
  a.cfg.seeds.clear();
  for (std::size_t s = 0; s < a.seed_count; ++s) a.cfg.seeds.push_back(a.seed_base + s);
  const auto rep = rwb::run_bench(a.cfg);
  rwb::write_text_file(a.out + ".csv", rep.to_csv(!a.no_time));
  rwb::write_text_file(a.out + ".json", rep.to_json(!a.no_time));
  for (const auto& g : rep.aggregates)
    std::cout << "m=" << g.m << " d=" << g.d << " k=" << g.k << " z/n=" << rwb::format_double(g.z_over_n)
              << " " << g.algo << " median_cost=" << rwb::format_double(g.median_cost)
              << " median_ratio=" << rwb::format_double(g.median_ratio) << "\n";
  for (const auto& r : rep.records)
    if (!r.structure_ok) {
      std::cerr << "variant B structure violated at seed " << r.cell.seed << "\n";
      return 4;
    }
  return 0;
}

struct VizArgs {
  std::string dir, out = "viz", algo = "cluster-a";
  int k = 40;
  double outlier_frac = 0.0;
  double total = 1000.0;
  double splat = 0.5;
  int lambda = 2;
  double eps = 0.5;
  std::uint64_t seed = 0;
};

int cmd_viz(const VizArgs& a) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".pgm" || ext == ".csv")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw rwb::Error(rwb::ErrorCode::InvalidInput, "no .pgm or .csv images in " + a.dir);
  rwb::InstanceSpec spec;
  std::size_t width = 0, height = 0;
  for (const auto& f : files) {
    const auto img = rwb::read_image(f);
    try {
      spec.distributions.push_back(rwb::image_to_pointset(img, a.total));
    } catch (const rwb::Error& e) {
      const std::string msg = e.what();
      throw rwb::Error(e.code(), f.string() + ": " + msg.substr(rwb::to_string(e.code()).size() + 2));
    }
    width = std::max(width, img.width);
    height = std::max(height, img.height);
  }
  spec.k = a.k;
  spec.z = a.outlier_frac * a.total;
  const rwb::Instance inst = rwb::validate_instance(std::move(spec));
  SolveArgs s;
  s.algo = a.algo;
  s.lambda = a.lambda;
  s.eps = a.eps;
  s.seed = a.seed;
  s.strict_k = true;
  const auto sol = solve_instance(inst, s);
  const auto img = rwb::solution_to_image(sol.support, sol.weights, width, height, a.splat);
  {
    std::ofstream pgm(a.out + ".pgm", std::ios::binary);
    if (!pgm) throw rwb::Error(rwb::ErrorCode::Io, "cannot write " + a.out + ".pgm");
    rwb::write_pgm(pgm, img);
  }
  {
    std::ofstream csv(a.out + ".csv");
    rwb::write_image_csv(csv, img);
  }
  rwb::write_text_file(a.out + ".json", rwb::solution_to_json(sol));
  std::cout << "images " << files.size() << " support " << sol.positive_support() << " cost "
            << rwb::format_double(sol.cost) << "\n";
  return 0;
}

struct SynthArgs {
  rwb::SynthParams p;
  std::string out = "instance";
};

int cmd_synth(const SynthArgs& a) {
  const auto si = rwb::synth_instance(a.p);
  rwb::write_text_file(a.out + ".json", rwb::instance_to_json(si.instance));
  std::ofstream planted(a.out + "_planted.csv");
  rwb::write_point_set_csv(planted, si.planted);
  return 0;
}

struct OracleArgs {
  std::string kind = "robust-ot", a, b;
  double z = 0.0, l = 2.0;
  int k = 1;
};

int cmd_oracle(const OracleArgs& a) {
  const auto P = rwb::read_point_set_csv(a.a);
  if (a.kind == "robust-ot") {
    const auto Q = rwb::read_point_set_csv(a.b);
    std::cout << "raw_cost " << rwb::format_double(rwb::brute_force_robust_ot(P, Q, a.z, a.l)) << "\n";
  } else if (a.kind == "kmeans") {
    const auto r = rwb::brute_force_kmeans_outliers(P, static_cast<std::size_t>(a.k), a.z);
    std::cout << "cost " << rwb::format_double(r.cost) << "\n";
    for (std::size_t c = 0; c < r.centers.size(); ++c) {
      std::cout << "center";
      for (double v : r.centers[c]) std::cout << " " << rwb::format_double(v);
      std::cout << " weight " << rwb::format_double(r.center_weights[c]) << "\n";
    }
  } else {
    throw rwb::Error(rwb::ErrorCode::InvalidInput, "unknown oracle kind '" + a.kind + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust Wasserstein distances and k-sparse barycenters with outliers"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rwb::kLibraryVersion));

  DistArgs dist;
  auto* c_dist = app.add_subcommand("dist", "robust Wasserstein distance between two point sets");
  c_dist->add_option("--a", dist.a, "first point-set CSV")->required()->check(CLI::ExistingFile);
  c_dist->add_option("--b", dist.b, "second point-set CSV")->required()->check(CLI::ExistingFile);
  c_dist->add_option("--z", dist.z, "outlier mass removed from the first set");
  c_dist->add_option("--z2", dist.z2, "outlier mass removed from the second set");
  c_dist->add_option("--l", dist.l, "ground cost exponent");
  c_dist->add_option("--json", dist.json, "write distance, plan and inliers here");

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "k-sparse barycenter with outliers");
  c_solve->add_option("instance,--instance", solve.instance, "instance JSON")->required()->check(CLI::ExistingFile);
  c_solve->add_option("--algo", solve.algo, "algorithm")->check(CLI::IsMember({"cluster-a", "cluster-b", "grid"}));
  c_solve->add_option("--k", solve.k, "override k");
  c_solve->add_option("--z", solve.z, "override z");
  c_solve->add_option("--z-remove", solve.z_remove, "mass the LP discards (default z)");
  c_solve->add_option("--lambda", solve.lambda, "clusters per distribution = lambda (k + z_hat)");
  c_solve->add_option("--eps", solve.eps, "grid accuracy");
  c_solve->add_option("--seed", solve.seed, "random seed");
  c_solve->add_flag("--strict-k", solve.strict_k, "keep only the k heaviest support points (cluster-a)");
  c_solve->add_option("--cap", solve.cap, "grid point budget");
  c_solve->add_option("--out", solve.out, "solution JSON (stdout when omitted)");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "seeded synthetic sweep with baselines");
  c_bench->add_option("--n", bench.cfg.n, "points per distribution");
  c_bench->add_option("--m", bench.cfg.ms, "distribution counts (comma list)")->delimiter(',');
  c_bench->add_option("--d", bench.cfg.ds, "dimensions (comma list)")->delimiter(',');
  c_bench->add_option("--k", bench.cfg.ks, "sparsity levels (comma list)")->delimiter(',');
  c_bench->add_option("--z-frac", bench.cfg.z_fracs, "outlier fractions (comma list)")->delimiter(',');
  c_bench->add_option("--seeds", bench.seed_count, "number of seeds");
  c_bench->add_option("--seed", bench.seed_base, "first seed");
  c_bench->add_option("--algos", bench.cfg.algos, "algorithms (comma list)")->delimiter(',');
  c_bench->add_option("--lambda", bench.cfg.lambda, "bi-criteria factor of the clustering");
  c_bench->add_option("--side", bench.cfg.side, "cube side of the planted centers");
  c_bench->add_option("--ball-scale", bench.cfg.ball_scale, "ball std; negative means side/20");
  c_bench->add_option("--strict-k", bench.cfg.strict_k, "variant A keeps k points (default true)");
  c_bench->add_option("--jobs", bench.cfg.jobs, "worker threads");
  c_bench->add_option("--out", bench.out, "output prefix for .csv and .json");
  c_bench->add_flag("--no-time", bench.no_time, "omit wall times (reproducible reports)");

  VizArgs viz;
  auto* c_viz = app.add_subcommand("viz", "barycenter image of a directory of images");
  c_viz->add_option("--dir", viz.dir, "directory of .pgm or .csv images")->required()->check(CLI::ExistingDirectory);
  c_viz->add_option("--k", viz.k, "support size");
  c_viz->add_option("--outlier-frac", viz.outlier_frac, "outlier mass as a fraction of --total");
  c_viz->add_option("--algo", viz.algo, "algorithm")->check(CLI::IsMember({"cluster-a", "cluster-b", "grid"}));
  c_viz->add_option("--out", viz.out, "output prefix");
  c_viz->add_option("--total", viz.total, "common total mass per image");
  c_viz->add_option("--splat", viz.splat, "Gaussian splat std in pixels");
  c_viz->add_option("--lambda", viz.lambda, "bi-criteria factor of the clustering");
  c_viz->add_option("--eps", viz.eps, "grid accuracy");
  c_viz->add_option("--seed", viz.seed, "random seed");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "write a planted synthetic instance");
  c_synth->add_option("--m", synth.p.m, "number of distributions");
  c_synth->add_option("--n", synth.p.n, "points per distribution");
  c_synth->add_option("--d", synth.p.d, "dimension");
  c_synth->add_option("--k", synth.p.k_true, "planted support size");
  c_synth->add_option("--side", synth.p.side, "cube side of the planted centers");
  c_synth->add_option("--ball-scale", synth.p.ball_scale, "ball std; negative means side/20");
  c_synth->add_option("--z-frac", synth.p.outlier_fraction, "outlier fraction");
  c_synth->add_option("--seed", synth.p.seed, "random seed");
  c_synth->add_option("--out", synth.out, "output prefix");

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "");  // empty description keeps it out of --help
  c_oracle->group("");
  c_oracle->add_option("--kind", oracle.kind)->check(CLI::IsMember({"robust-ot", "kmeans"}));
  c_oracle->add_option("--a", oracle.a)->required();
  c_oracle->add_option("--b", oracle.b);
  c_oracle->add_option("--z", oracle.z);
  c_oracle->add_option("--l", oracle.l);
  c_oracle->add_option("--k", oracle.k);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*c_dist) return cmd_dist(dist);
    if (*c_solve) return cmd_solve(solve);
    if (*c_bench) return cmd_bench(bench);
    if (*c_viz) return cmd_viz(viz);
    if (*c_synth) return cmd_synth(synth);
    if (*c_oracle) return cmd_oracle(oracle);
  } catch (const rwb::InstanceError& e) {
    for (const auto& issue : e.issues())
      std::cerr << "error: " << rwb::to_string(issue.code) << ": " << issue.message << "\n";
    return 2;
  } catch (const rwb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: INTERNAL: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
