#include "saddle/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace saddle {

int hamming(const Descriptor& a, const Descriptor& b) {
  int d = 0;
  for (int i = 0; i < 4; ++i) d += std::popcount(a.bits[i] ^ b.bits[i]);
  return d;
}

namespace {

constexpr std::uint64_t xorshift64(std::uint64_t& s) {
  s ^= s << 13;
  s ^= s >> 7;
  s ^= s << 17;
  return s;
}

constexpr std::array<SamplePair, 256> make_pattern() {
  std::array<SamplePair, 256> out{};
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  constexpr int kRadius = 15;
  for (auto& p : out) {
    do {
      p.ux = std::int8_t(int(xorshift64(state) % (2 * kRadius + 1)) - kRadius);
      p.uy = std::int8_t(int(xorshift64(state) % (2 * kRadius + 1)) - kRadius);
      p.vx = std::int8_t(int(xorshift64(state) % (2 * kRadius + 1)) - kRadius);
      p.vy = std::int8_t(int(xorshift64(state) % (2 * kRadius + 1)) - kRadius);
    } while (p.ux == p.vx && p.uy == p.vy);
  }
  return out;
}

constexpr auto kPattern = make_pattern();

// 5x5 box sums per pixel, borders replicated. Max 25 * 255 fits easily.
std::vector<std::uint32_t> box5_sums(const GrayImage& img) {
  const int w = img.width;
  const int h = img.height;
  std::vector<std::uint32_t> rows(std::size_t(w) * h);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = &img.data[std::size_t(y) * w];
    for (int x = 0; x < w; ++x) {
      std::uint32_t acc = 0;
      for (int k = -2; k <= 2; ++k) acc += src[std::clamp(x + k, 0, w - 1)];
      rows[std::size_t(y) * w + x] = acc;
    }
  }
  std::vector<std::uint32_t> out(std::size_t(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint32_t acc = 0;
      for (int k = -2; k <= 2; ++k) acc += rows[std::size_t(std::clamp(y + k, 0, h - 1)) * w + x];
      out[std::size_t(y) * w + x] = acc;
    }
  return out;
}

int round_half_up(double v) { return int(std::floor(v + 0.5)); }

}  // namespace

const std::array<SamplePair, 256>& descriptor_pattern() { return kPattern; }

DescribeResult describe(const Pyramid& pyramid, const std::vector<Keypoint>& keypoints) {
  DescribeResult res;
  std::vector<std::vector<std::uint32_t>> sums(pyramid.levels.size());

  for (const Keypoint& kp : keypoints) {
    if (kp.level < 0 || std::size_t(kp.level) >= pyramid.levels.size())
      throw ParamError("keypoint level " + std::to_string(kp.level) + " outside the pyramid");
    const GrayImage& img = pyramid.levels[std::size_t(kp.level)];
    const double s = pyramid.level_scales[std::size_t(kp.level)];
    const int lx = round_half_up((kp.x + 0.5) / s - 0.5);
    const int ly = round_half_up((kp.y + 0.5) / s - 0.5);
    if (lx < kDescriptorBorder || lx >= img.width - kDescriptorBorder ||
        ly < kDescriptorBorder || ly >= img.height - kDescriptorBorder) {
      ++res.dropped;
      continue;
    }

    auto& sum = sums[std::size_t(kp.level)];
    if (sum.empty()) sum = box5_sums(img);

    Descriptor d;
    for (int i = 0; i < 256; ++i) {
      const SamplePair& p = kPattern[std::size_t(i)];
      const std::uint32_t su = sum[std::size_t(ly + p.uy) * img.width + (lx + p.ux)];
      const std::uint32_t sv = sum[std::size_t(ly + p.vy) * img.width + (lx + p.vx)];
      if (su < sv) d.set(i);
    }
    res.descriptors.push_back(d);
    res.keypoints.push_back(kp);
  }
  return res;
}

std::vector<Match> match(const std::vector<Descriptor>& a, const std::vector<Descriptor>& b) {
  const int na = int(a.size());
  const int nb = int(b.size());
  std::vector<Match> out;
  if (na == 0 || nb == 0) return out;

  // Nearest neighbour in b for each a; ties keep the lower b index.
  std::vector<int> best_b(std::size_t(na), -1);
  std::vector<int> best_b_dist(std::size_t(na), std::numeric_limits<int>::max());
  std::vector<int> best_a(std::size_t(nb), -1);
  std::vector<int> best_a_dist(std::size_t(nb), std::numeric_limits<int>::max());
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      const int d = hamming(a[std::size_t(i)], b[std::size_t(j)]);
      if (d < best_b_dist[std::size_t(i)]) {
        best_b_dist[std::size_t(i)] = d;
        best_b[std::size_t(i)] = j;
      }
      if (d < best_a_dist[std::size_t(j)]) {
        best_a_dist[std::size_t(j)] = d;
        best_a[std::size_t(j)] = i;
      }
    }
  }
  for (int i = 0; i < na; ++i) {
    const int j = best_b[std::size_t(i)];
    if (j >= 0 && best_a[std::size_t(j)] == i)
      out.push_back({i, j, best_b_dist[std::size_t(i)]});
  }
  return out;
}

VerifyResult verify(const std::vector<Match>& matches, const Homography& h,
                    const std::vector<Keypoint>& kps_a, const std::vector<Keypoint>& kps_b,
                    double tol) {
  if (tol < 0.0) throw ParamError("verification tolerance must be >= 0");
  const Homography inv = h.inverse();
  VerifyResult res;
  res.errors.reserve(matches.size());
  for (const Match& m : matches) {
    const Keypoint& ka = kps_a.at(std::size_t(m.a));
    const Keypoint& kb = kps_b.at(std::size_t(m.b));
    const Point2 p = project(inv, kb.x, kb.y);
    const double err = std::hypot(ka.x - p.x, ka.y - p.y);
    res.errors.push_back(err);
    if (err <= tol) res.inliers.push_back(m);
  }
  return res;
}

CoverageResult coverage(const std::vector<Point2>& centers, int width, int height,
                        double disk_radius) {
  if (width < 1 || height < 1) throw ParamError("coverage needs a positive image size");
  if (!(disk_radius > 0.0)) throw ParamError("coverage disk radius must be > 0");

  CoverageResult res;
  res.mask = GrayImage(width, height);
  const double r2 = disk_radius * disk_radius;
  for (const Point2& c : centers) {
    const int x0 = std::max(0, int(std::ceil(c.x - disk_radius)));
    const int x1 = std::min(width - 1, int(std::floor(c.x + disk_radius)));
    const int y0 = std::max(0, int(std::ceil(c.y - disk_radius)));
    const int y1 = std::min(height - 1, int(std::floor(c.y + disk_radius)));
    for (int y = y0; y <= y1; ++y) {
      const double dy = y - c.y;
      std::uint8_t* row = &res.mask.data[std::size_t(y) * width];
      for (int x = x0; x <= x1; ++x) {
        const double dx = x - c.x;
        if (dx * dx + dy * dy <= r2) row[x] = 255;
      }
    }
  }
  std::size_t covered = 0;
  for (std::uint8_t v : res.mask.data) covered += v != 0;
  res.ratio = double(covered) / (double(width) * double(height));
  return res;
}

CoverageResult coverage(const std::vector<Match>& inliers, const std::vector<Keypoint>& kps_a,
                        int width, int height, double disk_radius) {
  std::vector<Point2> centers;
  centers.reserve(inliers.size());
  for (const Match& m : inliers) {
    const Keypoint& kp = kps_a.at(std::size_t(m.a));
    centers.push_back({kp.x, kp.y});
  }
  return coverage(centers, width, height, disk_radius);
}

std::vector<double> inlier_ratio_curve(const std::vector<double>& errors,
                                       const std::vector<double>& thresholds) {
  if (errors.empty())
    throw ParamError("inlier ratio is undefined without tentative matches");
  std::vector<double> out;
  out.reserve(thresholds.size());
  for (double t : thresholds) {
    std::size_t n = 0;
    for (double e : errors) n += e <= t;
    out.push_back(double(n) / double(errors.size()));
  }
  return out;
}

}  // namespace saddle
