#include "rwb/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rwb {

using nlohmann::ordered_json;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (ch != '\r' && ch != ' ' && ch != '\t') {
      cell.push_back(ch);
    }
  }
  out.push_back(cell);
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (!s.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || s.empty())
    throw Error(ErrorCode::InvalidInput, where + ": '" + s + "' is not a number");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

WeightedPointSet read_point_set_csv(std::istream& is, const std::string& name) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::Io, name + ": empty file");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "weight" || header.size() < 2)
    throw Error(ErrorCode::InvalidInput, name + ": header must be weight,x0,...");
  for (std::size_t t = 1; t < header.size(); ++t)
    if (header[t] != "x" + std::to_string(t - 1))
      throw Error(ErrorCode::InvalidInput, name + ": column " + std::to_string(t) + " must be x" + std::to_string(t - 1));
  const std::size_t d = header.size() - 1;
  PointMatrix pts(d);
  std::vector<double> w;
  std::vector<double> x(d);
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    const std::string where = name + ":" + std::to_string(row);
    if (cells.size() != d + 1)
      throw Error(ErrorCode::DimMismatch, where + ": expected " + std::to_string(d + 1) + " columns");
    w.push_back(parse_number(cells[0], where));
    for (std::size_t t = 0; t < d; ++t) x[t] = parse_number(cells[t + 1], where);
    pts.push_back(x);
  }
  return WeightedPointSet(std::move(pts), std::move(w));
}

WeightedPointSet read_point_set_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return read_point_set_csv(in, path.string());
}

void write_point_set_csv(std::ostream& os, const PointMatrix& points, std::span<const double> weights) {
  os << "weight";
  for (std::size_t t = 0; t < points.dim(); ++t) os << ",x" << t;
  os << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    os << format_double(weights[i]);
    for (double v : points[i]) os << ',' << format_double(v);
    os << '\n';
  }
}

void write_point_set_csv(std::ostream& os, const WeightedPointSet& P) {
  write_point_set_csv(os, P.points(), P.weights());
}

InstanceSpec parse_instance_json(const std::string& text, const std::filesystem::path& base_dir) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("instance JSON: ") + e.what());
  }
  InstanceSpec spec;
  try {
    spec.l = j.value("l", 2.0);
    spec.k = j.at("k").get<int>();
    spec.z = j.value("z", 0.0);
    for (const auto& d : j.at("distributions")) {
      if (d.contains("csv")) {
        std::filesystem::path p = d.at("csv").get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        spec.distributions.push_back(read_point_set_csv(p));
        continue;
      }
      std::vector<std::vector<double>> rows = d.at("points").get<std::vector<std::vector<double>>>();
      std::vector<double> w = d.contains("weights") ? d.at("weights").get<std::vector<double>>()
                                                    : std::vector<double>(rows.size(), 1.0);
      spec.distributions.push_back(WeightedPointSet::from_rows(rows, std::move(w)));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("instance JSON: ") + e.what());
  }
  return spec;
}

Instance read_instance_json(const std::filesystem::path& path) {
  return validate_instance(parse_instance_json(read_text_file(path), path.parent_path()));
}

std::string instance_to_json(const Instance& inst) {
  ordered_json j;
  j["l"] = inst.l();
  j["k"] = inst.k();
  j["z"] = inst.z();
  ordered_json ds = ordered_json::array();
  for (const auto& P : inst.distributions()) {
    ordered_json pts = ordered_json::array();
    for (std::size_t i = 0; i < P.size(); ++i)
      pts.push_back(std::vector<double>(P.point(i).begin(), P.point(i).end()));
    ds.push_back({{"points", pts}, {"weights", P.weights()}});
  }
  j["distributions"] = ds;
  return j.dump() + "\n";
}

std::string solution_to_json(const BarycenterSolution& sol) {
  ordered_json j;
  ordered_json sup = ordered_json::array();
  for (std::size_t i = 0; i < sol.support.size(); ++i)
    sup.push_back(std::vector<double>(sol.support[i].begin(), sol.support[i].end()));
  j["support"] = sup;
  j["weights"] = sol.weights;
  j["cost"] = sol.cost;
  j["discarded"] = sol.discarded;
  j["algo"] = sol.meta.algo;
  j["seed"] = sol.meta.seed;
  ordered_json params;
  params["lambda"] = sol.meta.lambda;
  params["eps"] = sol.meta.eps;
  params["z_remove"] = sol.meta.z_remove;
  params["z2"] = sol.z2;
  params["strict_k"] = sol.meta.strict_k;
  if (sol.meta.j0) params["j0"] = *sol.meta.j0;
  params["candidate_costs"] = sol.meta.candidate_costs;
  params["candidate_support"] = sol.meta.candidate_support;
  params["lp_backend"] = sol.meta.lp_backend;
  params["plan_costs"] = sol.plan_costs;
  j["params"] = params;
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace rwb
