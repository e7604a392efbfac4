#pragma once

#include <filesystem>
#include <iosfwd>
#include <random>

#include "rwb/core.hpp"

namespace rwb {

struct SynthParams {
  std::size_t m = 4;
  std::size_t n = 500;
  std::size_t d = 10;
  std::size_t k_true = 5;
  double side = 10.0;
  double ball_scale = -1.0;  // negative: side / 20
  double outlier_fraction = 0.05;
  std::uint64_t seed = 0;
};

struct SynthInstance {
  Instance instance;
  WeightedPointSet planted;  // planted centers, weights summing to n - z
};

/// Planted centers uniform in [0, side]^d with U[0.5, 1.5] weights; each distribution gets
/// multinomial inlier counts around them (Gaussian balls) plus round(z) uniform outliers.
SynthInstance synth_instance(const SynthParams& p);

/// Standard normal via Box-Muller on uniform01 (same stream on every platform).
double standard_normal(std::mt19937_64& rng);

struct ImageGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> intensity;  // row-major, height x width

  ImageGrid() = default;
  ImageGrid(std::size_t w, std::size_t h) : width(w), height(h), intensity(w * h, 0.0) {}
  double& at(std::size_t row, std::size_t col) { return intensity[row * width + col]; }
  double at(std::size_t row, std::size_t col) const { return intensity[row * width + col]; }
  double total() const;
};

/// One point per positive pixel at (col + 0.5, row + 0.5), weights scaled to `total`.
WeightedPointSet image_to_pointset(const ImageGrid& img, double total);

/// Gaussian splat (std = splat_radius pixels) of every weighted point; each point's kernel is
/// normalized over the raster so the image total equals the total weight.
ImageGrid solution_to_image(const PointMatrix& support, std::span<const double> weights,
                            std::size_t width, std::size_t height, double splat_radius);

void write_pgm(std::ostream& os, const ImageGrid& img);  // P5, maxval 255, scaled by the max
ImageGrid read_pgm(std::istream& is);                    // P5 or P2
void write_image_csv(std::ostream& os, const ImageGrid& img);
ImageGrid read_image_csv(std::istream& is);
/// Dispatches on the extension (.pgm or .csv).
ImageGrid read_image(const std::filesystem::path& path);

}  // namespace rwb
