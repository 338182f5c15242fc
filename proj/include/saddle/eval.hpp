#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "saddle/detector.hpp"
#include "saddle/geometry.hpp"
#include "saddle/image.hpp"

namespace saddle {

struct Descriptor {
  std::array<std::uint64_t, 4> bits{};

  bool get(int i) const { return (bits[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { bits[i >> 6] |= std::uint64_t(1) << (i & 63); }

  bool operator==(const Descriptor&) const = default;
};

int hamming(const Descriptor& a, const Descriptor& b);

// One comparison of the descriptor pattern: bit k is 1 when the smoothed
// intensity at p + u is less than at p + v.
struct SamplePair {
  std::int8_t ux, uy, vx, vy;
};

// Fixed pseudo-random pattern, offsets within Chebyshev radius 15, u != v.
const std::array<SamplePair, 256>& descriptor_pattern();

// Pattern radius plus the 5x5 box-filter reach; samples stay in bounds for
// keypoints at least this far from the level border.
constexpr int kDescriptorBorder = 17;

struct DescribeResult {
  std::vector<Descriptor> descriptors;
  std::vector<Keypoint> keypoints;  // aligned with descriptors
  int dropped = 0;                  // too close to a level border to sample
};

// Describes each keypoint on its own pyramid level at the rounded level
// coordinates. Smoothing is a 5x5 box sum (no division), borders replicated.
DescribeResult describe(const Pyramid& pyramid, const std::vector<Keypoint>& keypoints);

struct Match {
  int a = 0;
  int b = 0;
  int distance = 0;
};

// Mutual nearest neighbours under Hamming distance. Distance ties resolve to
// the lower candidate index. Output is sorted by a.
std::vector<Match> match(const std::vector<Descriptor>& a, const std::vector<Descriptor>& b);

struct VerifyResult {
  std::vector<double> errors;  // per match, reference-image pixels
  std::vector<Match> inliers;  // matches with error <= tol
};

// Reprojection check for matches between images related by H (A to B): the
// error is the distance from kpA to the inverse projection of kpB.
VerifyResult verify(const std::vector<Match>& matches, const Homography& h,
                    const std::vector<Keypoint>& kps_a, const std::vector<Keypoint>& kps_b,
                    double tol = 3.0);

struct CoverageResult {
  double ratio = 0.0;  // covered pixels / (width * height)
  GrayImage mask;      // 255 where covered, 0 elsewhere
};

// Union of disks of disk_radius around the centers; a pixel is covered when
// its integer center lies within distance disk_radius of some center.
CoverageResult coverage(const std::vector<Point2>& centers, int width, int height,
                        double disk_radius = 25.0);

// Same, centered on the reference keypoints of the given inlier matches.
CoverageResult coverage(const std::vector<Match>& inliers, const std::vector<Keypoint>& kps_a,
                        int width, int height, double disk_radius = 25.0);

// Fraction of errors <= t for each threshold. ParamError when errors is
// empty: the ratio is undefined without tentative matches.
std::vector<double> inlier_ratio_curve(const std::vector<double>& errors,
                                       const std::vector<double>& thresholds);

constexpr int kMatchedPairMinInliers = 15;

inline bool matched_pair(int inlier_count) { return inlier_count >= kMatchedPairMinInliers; }

}  // namespace saddle
