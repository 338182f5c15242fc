#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saddle/errors.hpp"

namespace saddle {

// 8-bit single-channel raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0);

  std::uint8_t& at(int x, int y) { return data[std::size_t(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return data[std::size_t(y) * width + x]; }

  bool operator==(const GrayImage&) const = default;
};

// P2 (ASCII) and P5 (binary) PGM, maxval up to 255. Pixel values are kept
// exactly as stored. IoError names the offending field on malformed input.
GrayImage load_pgm(const std::string& path);

// Binary P5 with maxval 255. Round-trips through load_pgm bit for bit.
void save_pgm(const GrayImage& img, const std::string& path);

// Shrinks by 1/factor with pixel-center alignment: output pixel (x, y) samples
// the input bilinearly at ((x + 0.5) * factor - 0.5, likewise for y), clamped
// to the border. Output dimensions are round(input / factor); intensities
// round half-up. factor must be > 1.
GrayImage downsample(const GrayImage& img, double factor);

constexpr int kMinLevelSize = 16;

struct Pyramid {
  std::vector<GrayImage> levels;
  double scale_factor = 1.0;
  std::vector<double> level_scales;  // scale_factor^n per level
};

// Level 0 is the input; level n shrinks level n-1 by factor. Stops after
// n_levels or once the next level would fall under kMinLevelSize on a side,
// whichever comes first.
Pyramid build_pyramid(const GrayImage& img, int n_levels, double factor);

}  // namespace saddle
