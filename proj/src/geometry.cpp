#include "saddle/geometry.hpp"

#include <cmath>
#include <fstream>

namespace saddle {

namespace {
constexpr double kSingularTol = 1e-12;
constexpr double kInfinityTol = 1e-12;
}  // namespace

double Homography::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

bool Homography::singular() const {
  double peak = 0.0;
  for (double v : m) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return true;
  Homography n;
  for (int i = 0; i < 9; ++i) n.m[i] = m[i] / peak;
  return std::abs(n.det()) < kSingularTol;
}

Homography Homography::inverse() const {
  if (singular()) throw ParamError("homography is singular, cannot invert");
  const double d = det();
  Homography r;
  r.m[0] = (m[4] * m[8] - m[5] * m[7]) / d;
  r.m[1] = (m[2] * m[7] - m[1] * m[8]) / d;
  r.m[2] = (m[1] * m[5] - m[2] * m[4]) / d;
  r.m[3] = (m[5] * m[6] - m[3] * m[8]) / d;
  r.m[4] = (m[0] * m[8] - m[2] * m[6]) / d;
  r.m[5] = (m[2] * m[3] - m[0] * m[5]) / d;
  r.m[6] = (m[3] * m[7] - m[4] * m[6]) / d;
  r.m[7] = (m[1] * m[6] - m[0] * m[7]) / d;
  r.m[8] = (m[0] * m[4] - m[1] * m[3]) / d;
  return r;
}

Point2 project(const Homography& h, double x, double y) {
  const double w = h.m[6] * x + h.m[7] * y + h.m[8];
  if (std::abs(w) < kInfinityTol) throw ParamError("projected point at infinity");
  return {(h.m[0] * x + h.m[1] * y + h.m[2]) / w, (h.m[3] * x + h.m[4] * y + h.m[5]) / w};
}

Homography load_homography(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open homography file: " + path);
  Homography h;
  for (int i = 0; i < 9; ++i) {
    if (!(in >> h.m[i]))
      throw IoError("homography file " + path + ": expected 9 numeric values, got " +
                    std::to_string(i));
  }
  std::string extra;
  if (in >> extra)
    throw IoError("homography file " + path + ": trailing content after 9 values");
  if (h.singular()) throw ParamError("homography file " + path + ": matrix is singular");
  return h;
}

}  // namespace saddle
