#pragma once

#include <vector>

#include "saddle/geometry.hpp"
#include "saddle/image.hpp"

namespace saddle {

// Alternating squares: 255 where floor(x/square) + floor(y/square) is even,
// 0 elsewhere, so (0, 0) is light. Partial squares at the right/bottom edges
// are fine. square must be >= 4.
GrayImage chessboard(int width, int height, int square);

// A point on the synthetic plane and its projection into the image.
struct PlanePoint {
  double u = 0.0;
  double v = 0.0;
  double x = 0.0;
  double y = 0.0;
};

// Interior corner lattice of chessboard(width, height, square): points where
// four squares meet, sorted by (y, x). Plane and image coordinates coincide.
std::vector<PlanePoint> chessboard_corners(int width, int height, int square);

// Separable Gaussian, kernel radius ceil(3 * sigma), weights sampled at
// integer offsets and normalised, borders replicated. sigma 0 is a copy.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

struct SinusoidSpec {
  int width = 256;
  int height = 256;
  double wavelength = 32.0;  // plane-space period in pixels, >= 8
  double contrast = 1.0;     // amplitude fraction, [0, 1]; 0 renders flat 128
  Homography homography = Homography::identity();  // plane -> image
};

// Continuous intensity at image position (x, y) before quantisation:
// 127.5 + 127.5 * contrast * sin(2 pi u / wavelength) * sin(2 pi v / wavelength)
// with (u, v) the preimage of (x, y) under the homography.
double sinusoid_intensity(const SinusoidSpec& spec, double x, double y);

struct SinusoidResult {
  GrayImage image;
  // Saddle lattice of the intensity surface: plane points (j, k) * wavelength
  // / 2, projected into the image, kept when at least 8 px from every border.
  // Sorted by (v, u). Empty when contrast is 0 (the surface is flat).
  std::vector<PlanePoint> saddles;
};

SinusoidResult sinusoid(const SinusoidSpec& spec);

}  // namespace saddle
