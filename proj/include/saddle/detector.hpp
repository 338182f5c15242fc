#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saddle/geometry.hpp"
#include "saddle/image.hpp"

namespace saddle {

struct Offset {
  int dx;
  int dy;
};

// Inner ring: 8 pixels at Chebyshev radius 2, split into an axis-aligned
// quadruple and a diagonal one. Opposing pairs sit at indices {0,2} and {1,3}.
inline constexpr std::array<Offset, 4> kInnerPlus{{{0, -2}, {2, 0}, {0, 2}, {-2, 0}}};
inline constexpr std::array<Offset, 4> kInnerCross{{{2, -2}, {2, 2}, {-2, 2}, {-2, -2}}};

// Outer ring: the 16-pixel discrete circle of radius 3, clockwise from the
// top in y-down coordinates. Cyclic; index i neighbours (i +- 1) mod 16.
inline constexpr std::array<Offset, 16> kOuterRing{{
    {0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0}, {3, 1}, {2, 2}, {1, 3},
    {0, 3}, {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}}};

// Both rings fit within this margin, so only pixels at least this far from
// the border are examined.
constexpr int kRingMargin = 3;

struct DetectorParams {
  double epsilon = 1.0;          // outer-ring similarity band, [0, 127]
  int n_levels = 6;              // >= 1
  double scale_factor = 1.3;     // > 1
  std::optional<int> max_features;  // >= 1 when set

  void validate() const;  // ParamError on violation
};

struct InnerResult {
  bool passed = false;
  bool plus = false;   // axis-aligned pair strictly brighter than diagonal
  bool cross = false;  // diagonal pair strictly brighter than axis-aligned
  double rho = 0.0;    // median of contributing intensities; only when passed
};

// Alternating-pattern test on the inner ring. plus holds when both of
// {N, S} exceed both of {E, W} or vice versa; cross likewise on the
// diagonals. All comparisons strict.
InnerResult inner_test(const GrayImage& img, int px, int py);

// Outer-ring pixel classes relative to rho: 'd' below rho - epsilon, 'l'
// above rho + epsilon, 's' within the closed band between them.
struct RingLabels {
  std::array<char, 16> labels{};

  std::string str() const { return std::string(labels.begin(), labels.end()); }
  static RingLabels from_string(std::string_view s);  // ParamError unless 16 of d/s/l

  bool operator==(const RingLabels&) const = default;
};

RingLabels label_outer_ring(const GrayImage& img, int px, int py, double rho, double epsilon);

// True when the cyclic label sequence consists of exactly two arcs of 'l' and
// two of 'd', alternating, each 2 to 8 long, with at most two 's' between
// consecutive arcs.
bool outer_test(const RingLabels& ring);

// Sum of |rho - I(b)| over the 16 outer-ring pixels.
double ring_response(const GrayImage& img, int px, int py, double rho);

struct Candidate {
  int x = 0;
  int y = 0;
  float response = 0.0f;
};

// Dense response map for one pyramid level: zero everywhere except at
// candidates that passed both ring tests. Candidates are in raster order.
struct LevelResult {
  int width = 0;
  int height = 0;
  std::vector<float> response;
  std::vector<Candidate> candidates;

  float response_at(int x, int y) const { return response[std::size_t(y) * width + x]; }
};

// Runs both ring tests over every interior pixel. threads > 1 splits the rows
// into bands; the result is identical to the single-threaded one.
LevelResult detect_level(const GrayImage& img, const DetectorParams& params, int threads = 1);

// 3x3 non-maximum suppression on the response map. On response plateaus the
// candidate latest in raster order survives: a candidate is kept when no
// earlier 8-neighbour beats it and no later one matches or beats it.
std::vector<Candidate> nms(const LevelResult& level);

// Response-weighted centroid of the 3x3 response neighbourhood.
Point2 refine(const LevelResult& level, const Candidate& c);

struct Keypoint {
  double x = 0.0;       // base-image coordinates
  double y = 0.0;
  int level = 0;
  double scale = 1.0;   // scale_factor^level
  double response = 0.0;
};

// Full multi-level detection: pyramid, per-level tests, NMS, refinement, and
// mapping to base coordinates via (x + 0.5) * scale - 0.5. Sorted by response
// descending; ties by level, then raster position of the unrefined candidate.
// max_features keeps the strongest that many.
std::vector<Keypoint> detect(const GrayImage& img, const DetectorParams& params, int threads = 1);

// Same, on an already-built pyramid; params.n_levels and scale_factor are
// taken from the pyramid.
std::vector<Keypoint> detect(const Pyramid& pyr, const DetectorParams& params, int threads = 1);

}  // namespace saddle
