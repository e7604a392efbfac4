#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rwb/barycenter.hpp"

namespace rwb {

/// Point-set CSV: header `weight,x0,...,x{d-1}`, one row per support point.
WeightedPointSet read_point_set_csv(std::istream& is, const std::string& name = "<stream>");
WeightedPointSet read_point_set_csv(const std::filesystem::path& path);
void write_point_set_csv(std::ostream& os, const PointMatrix& points, std::span<const double> weights);
void write_point_set_csv(std::ostream& os, const WeightedPointSet& P);

/// Instance JSON. Each distribution is either {"csv": path} (relative to `base_dir`) or
/// {"points": [[...]], "weights": [...]}.
InstanceSpec parse_instance_json(const std::string& text, const std::filesystem::path& base_dir);
Instance read_instance_json(const std::filesystem::path& path);
std::string instance_to_json(const Instance& inst);

/// Deterministic solution JSON (fixed key order, shortest round-trip doubles).
std::string solution_to_json(const BarycenterSolution& sol);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rwb
