#include "saddle/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace saddle {

GrayImage chessboard(int width, int height, int square) {
  if (square < 4) throw ParamError("chessboard square must be >= 4, got " + std::to_string(square));
  GrayImage img(width, height);
  for (int y = 0; y < height; ++y) {
    std::uint8_t* row = &img.data[std::size_t(y) * width];
    const int py = (y / square) & 1;
    for (int x = 0; x < width; ++x) row[x] = ((x / square) & 1) == py ? 255 : 0;
  }
  return img;
}

std::vector<PlanePoint> chessboard_corners(int width, int height, int square) {
  if (square < 4) throw ParamError("chessboard square must be >= 4, got " + std::to_string(square));
  std::vector<PlanePoint> out;
  for (int y = square; y < height; y += square)
    for (int x = square; x < width; x += square)
      out.push_back({double(x), double(y), double(x), double(y)});
  return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  if (sigma < 0.0) throw ParamError("blur sigma must be >= 0, got " + std::to_string(sigma));
  if (sigma == 0.0) return img;

  const int radius = int(std::ceil(3.0 * sigma));
  std::vector<double> kernel(std::size_t(2 * radius + 1));
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    kernel[std::size_t(k + radius)] = std::exp(-0.5 * (k / sigma) * (k / sigma));
    total += kernel[std::size_t(k + radius)];
  }
  for (double& w : kernel) w /= total;

  const int w = img.width;
  const int h = img.height;
  std::vector<double> tmp(std::size_t(w) * h);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = &img.data[std::size_t(y) * w];
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[std::size_t(k + radius)] * row[std::clamp(x + k, 0, w - 1)];
      tmp[std::size_t(y) * w + x] = acc;
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k)
        acc += kernel[std::size_t(k + radius)] * tmp[std::size_t(std::clamp(y + k, 0, h - 1)) * w + x];
      out.data[std::size_t(y) * w + x] = std::uint8_t(std::clamp(std::floor(acc + 0.5), 0.0, 255.0));
    }
  }
  return out;
}

namespace {

void validate(const SinusoidSpec& spec) {
  if (spec.width < 1 || spec.height < 1) throw ParamError("sinusoid dimensions must be positive");
  if (!(spec.wavelength >= 8.0))
    throw ParamError("sinusoid wavelength must be >= 8, got " + std::to_string(spec.wavelength));
  if (!(spec.contrast >= 0.0 && spec.contrast <= 1.0))
    throw ParamError("sinusoid contrast must be in [0, 1], got " + std::to_string(spec.contrast));
}

double intensity_at_plane(const SinusoidSpec& spec, double u, double v) {
  const double k = 2.0 * std::numbers::pi / spec.wavelength;
  return 127.5 + 127.5 * spec.contrast * std::sin(k * u) * std::sin(k * v);
}

}  // namespace

double sinusoid_intensity(const SinusoidSpec& spec, double x, double y) {
  validate(spec);
  const Homography inv = spec.homography.inverse();
  const Point2 p = project(inv, x, y);
  return intensity_at_plane(spec, p.x, p.y);
}

SinusoidResult sinusoid(const SinusoidSpec& spec) {
  validate(spec);
  const Homography inv = spec.homography.inverse();

  SinusoidResult res;
  res.image = GrayImage(spec.width, spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const Point2 p = project(inv, x, y);
      const double v = intensity_at_plane(spec, p.x, p.y);
      res.image.data[std::size_t(y) * spec.width + x] =
          std::uint8_t(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
    }
  }

  if (spec.contrast == 0.0) return res;  // flat surface, no saddles

  // Saddles of sin(ku) sin(kv) sit where both factors vanish: the lattice
  // (j, k) * wavelength / 2. Bound the lattice range by the plane-space
  // preimages of the image corners.
  double u_min = 1e300, u_max = -1e300, v_min = 1e300, v_max = -1e300;
  const double xs[] = {-0.5, spec.width - 0.5};
  const double ys[] = {-0.5, spec.height - 0.5};
  for (double cx : xs) {
    for (double cy : ys) {
      const Point2 p = project(inv, cx, cy);
      u_min = std::min(u_min, p.x);
      u_max = std::max(u_max, p.x);
      v_min = std::min(v_min, p.y);
      v_max = std::max(v_max, p.y);
    }
  }
  const double half = spec.wavelength / 2.0;
  const long j_min = long(std::floor(u_min / half)) - 1;
  const long j_max = long(std::ceil(u_max / half)) + 1;
  const long k_min = long(std::floor(v_min / half)) - 1;
  const long k_max = long(std::ceil(v_max / half)) + 1;

  constexpr double kInteriorMargin = 8.0;
  for (long k = k_min; k <= k_max; ++k) {
    for (long j = j_min; j <= j_max; ++j) {
      const double u = j * half;
      const double v = k * half;
      const Point2 p = project(spec.homography, u, v);
      if (p.x < kInteriorMargin || p.x > spec.width - 1 - kInteriorMargin) continue;
      if (p.y < kInteriorMargin || p.y > spec.height - 1 - kInteriorMargin) continue;
      res.saddles.push_back({u, v, p.x, p.y});
    }
  }
  return res;
}

}  // namespace saddle
