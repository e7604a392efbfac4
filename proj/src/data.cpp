#include "rwb/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rwb/clustering.hpp"

namespace rwb {

double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SynthInstance synth_instance(const SynthParams& p) {
  if (p.m == 0 || p.n == 0 || p.d == 0 || p.k_true == 0 || !(p.side > 0.0))
    throw Error(ErrorCode::InvalidInput, "synthetic parameters must be positive");
  if (!(p.outlier_fraction >= 0.0) || !(p.outlier_fraction < 1.0))
    throw Error(ErrorCode::InvalidInput, "outlier fraction must lie in [0, 1)");
  const double std_dev = p.ball_scale < 0.0 ? p.side / 20.0 : p.ball_scale;
  std::mt19937_64 rng(p.seed);

  const auto z = static_cast<std::size_t>(std::llround(p.outlier_fraction * static_cast<double>(p.n)));
  if (z >= p.n) throw Error(ErrorCode::InvalidInput, "outlier count leaves no inliers");
  const std::size_t inliers = p.n - z;

  PointMatrix centers(p.d);
  std::vector<double> cw;
  std::vector<double> x(p.d);
  for (std::size_t s = 0; s < p.k_true; ++s) {
    for (double& v : x) v = uniform01(rng) * p.side;
    centers.push_back(x);
    cw.push_back(0.5 + uniform01(rng));
  }
  double sum = 0.0;
  for (double w : cw) sum += w;
  std::vector<double> cum;
  double acc = 0.0;
  for (double& w : cw) {
    w /= sum;
    acc += w;
    cum.push_back(acc);
  }

  InstanceSpec spec;
  spec.k = static_cast<int>(p.k_true);
  spec.z = static_cast<double>(z);
  spec.l = 2.0;
  for (std::size_t j = 0; j < p.m; ++j) {
    PointMatrix pts(p.d);
    pts.reserve(p.n);
    for (std::size_t i = 0; i < inliers; ++i) {
      const double u = uniform01(rng);
      std::size_t s = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
      s = std::min(s, p.k_true - 1);
      for (std::size_t t = 0; t < p.d; ++t) x[t] = centers[s][t] + std_dev * standard_normal(rng);
      pts.push_back(x);
    }
    for (std::size_t i = 0; i < z; ++i) {
      for (double& v : x) v = uniform01(rng) * p.side;
      pts.push_back(x);
    }
    spec.distributions.emplace_back(std::move(pts), std::vector<double>(p.n, 1.0));
  }

  std::vector<double> planted_w;
  for (double w : cw) planted_w.push_back(w * static_cast<double>(inliers));
  SynthInstance out{validate_instance(std::move(spec)), WeightedPointSet(std::move(centers), std::move(planted_w))};
  return out;
}

double ImageGrid::total() const {
  double s = 0.0;
  for (double v : intensity) s += v;
  return s;
}

WeightedPointSet image_to_pointset(const ImageGrid& img, double total) {
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidInput, "total must be positive");
  for (double v : img.intensity)
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidInput, "intensities must be finite and >= 0");
  const double sum = img.total();
  if (!(sum > 0.0)) throw Error(ErrorCode::EmptyImage, "image has no positive pixel");
  PointMatrix pts(2);
  std::vector<double> w;
  for (std::size_t r = 0; r < img.height; ++r)
    for (std::size_t c = 0; c < img.width; ++c) {
      const double v = img.at(r, c);
      if (v <= 0.0) continue;
      const double xy[2] = {static_cast<double>(c) + 0.5, static_cast<double>(r) + 0.5};
      pts.push_back(xy);
      w.push_back(v / sum * total);
    }
  return WeightedPointSet(std::move(pts), std::move(w));
}

ImageGrid solution_to_image(const PointMatrix& support, std::span<const double> weights,
                            std::size_t width, std::size_t height, double splat_radius) {
  if (support.dim() != 2) throw Error(ErrorCode::DimNot2D, "images need 2-dimensional points");
  if (width == 0 || height == 0) throw Error(ErrorCode::InvalidInput, "empty raster");
  ImageGrid img(width, height);
  std::vector<double> kernel;
  for (std::size_t s = 0; s < support.size(); ++s) {
    const double w = weights[s];
    if (w <= 0.0) continue;
    const double px = support[s][0], py = support[s][1];
    auto nearest = [&](double v, std::size_t lim) {
      const double f = std::floor(v);
      if (f < 0.0) return std::size_t{0};
      return std::min(static_cast<std::size_t>(f), lim - 1);
    };
    if (splat_radius <= 1e-9) {
      img.at(nearest(py, height), nearest(px, width)) += w;
      continue;
    }
    const double s2 = 2.0 * splat_radius * splat_radius;
    const double reach = 4.0 * splat_radius + 1.0;
    const long r0 = std::max(0L, static_cast<long>(std::floor(py - reach)));
    const long r1 = std::min(static_cast<long>(height) - 1, static_cast<long>(std::ceil(py + reach)));
    const long c0 = std::max(0L, static_cast<long>(std::floor(px - reach)));
    const long c1 = std::min(static_cast<long>(width) - 1, static_cast<long>(std::ceil(px + reach)));
    double ksum = 0.0;
    kernel.clear();
    for (long r = r0; r <= r1; ++r)
      for (long c = c0; c <= c1; ++c) {
        const double dx = static_cast<double>(c) + 0.5 - px, dy = static_cast<double>(r) + 0.5 - py;
        const double k = std::exp(-(dx * dx + dy * dy) / s2);
        kernel.push_back(k);
        ksum += k;
      }
    if (!(ksum > 0.0)) {
      img.at(nearest(py, height), nearest(px, width)) += w;
      continue;
    }
    std::size_t t = 0;
    for (long r = r0; r <= r1; ++r)
      for (long c = c0; c <= c1; ++c) img.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) += w * kernel[t++] / ksum;
  }
  return img;
}

void write_pgm(std::ostream& os, const ImageGrid& img) {
  double mx = 0.0;
  for (double v : img.intensity) mx = std::max(mx, v);
  os << "P5\n" << img.width << " " << img.height << "\n255\n";
  for (double v : img.intensity) {
    const double s = mx > 0.0 ? v / mx * 255.0 : 0.0;
    os.put(static_cast<char>(static_cast<unsigned char>(std::clamp(std::lround(s), 0L, 255L))));
  }
}

namespace {

// PGM header tokens, skipping '#' comments
std::string pgm_token(std::istream& is) {
  std::string tok;
  char ch;
  while (is.get(ch)) {
    if (ch == '#') {
      std::string rest;
      std::getline(is, rest);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(ch);
  }
  return tok;
}

}  // namespace

ImageGrid read_pgm(std::istream& is) {
  const std::string magic = pgm_token(is);
  if (magic != "P5" && magic != "P2") throw Error(ErrorCode::Io, "not a PGM file");
  std::size_t w = 0, h = 0;
  long maxval = 0;
  try {
    w = std::stoul(pgm_token(is));
    h = std::stoul(pgm_token(is));
    maxval = std::stol(pgm_token(is));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Io, "malformed PGM header");
  }
  if (w == 0 || h == 0 || maxval <= 0 || maxval > 65535) throw Error(ErrorCode::Io, "bad PGM dimensions");
  ImageGrid img(w, h);
  if (magic == "P2") {
    for (double& v : img.intensity) {
      long x;
      if (!(is >> x)) throw Error(ErrorCode::Io, "truncated PGM data");
      v = static_cast<double>(x);
    }
    return img;
  }
  const bool wide = maxval > 255;
  for (double& v : img.intensity) {
    unsigned char b[2];
    if (!is.read(reinterpret_cast<char*>(b), wide ? 2 : 1)) throw Error(ErrorCode::Io, "truncated PGM data");
    v = wide ? static_cast<double>(b[0] << 8 | b[1]) : static_cast<double>(b[0]);
  }
  return img;
}

void write_image_csv(std::ostream& os, const ImageGrid& img) {
  char buf[40];
  for (std::size_t r = 0; r < img.height; ++r) {
    for (std::size_t c = 0; c < img.width; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", img.at(r, c));
      if (c) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

ImageGrid read_image_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Io, "non-numeric image cell '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw Error(ErrorCode::Io, "ragged image rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyImage, "image file has no rows");
  ImageGrid img(rows.front().size(), rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) img.at(r, c) = rows[r][c];
  return img;
}

ImageGrid read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  if (path.extension() == ".pgm") return read_pgm(in);
  return read_image_csv(in);
}

}  // namespace rwb
