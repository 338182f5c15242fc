#pragma once

#include <array>
#include <string>

#include "saddle/errors.hpp"

namespace saddle {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Row-major 3x3 planar projective transform, double precision throughout.
struct Homography {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Homography identity() { return {}; }

  double det() const;

  // True when |det| < 1e-12 after scaling the matrix by its largest-magnitude
  // entry, so the test is insensitive to the overall scale of the matrix.
  bool singular() const;

  Homography inverse() const;  // ParamError when singular
};

// Applies H to (x, y). ParamError when the projected weight |w'| < 1e-12.
Point2 project(const Homography& h, double x, double y);

// Reads exactly 9 whitespace-separated reals, row-major. IoError on anything
// else; ParamError when the matrix is singular.
Homography load_homography(const std::string& path);

}  // namespace saddle
