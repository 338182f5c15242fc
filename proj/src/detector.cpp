#include "saddle/detector.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace saddle {

void DetectorParams::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 127.0))
    throw ParamError("epsilon must be in [0, 127], got " + std::to_string(epsilon));
  if (n_levels < 1) throw ParamError("n_levels must be >= 1, got " + std::to_string(n_levels));
  if (!(scale_factor > 1.0))
    throw ParamError("scale_factor must be > 1, got " + std::to_string(scale_factor));
  if (max_features && *max_features < 1)
    throw ParamError("max_features must be >= 1, got " + std::to_string(*max_features));
}

namespace {

// Median of n values, n in {4, 8}: mean of the two middle order statistics.
double even_median(int* v, int n) {
  if (n == 4) {
    const int mn = std::min(std::min(v[0], v[1]), std::min(v[2], v[3]));
    const int mx = std::max(std::max(v[0], v[1]), std::max(v[2], v[3]));
    return (v[0] + v[1] + v[2] + v[3] - mn - mx) / 2.0;
  }
  std::sort(v, v + n);
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

InnerResult inner_test(const GrayImage& img, int px, int py) {
  int p[4], c[4];
  for (int i = 0; i < 4; ++i) {
    p[i] = img.at(px + kInnerPlus[i].dx, py + kInnerPlus[i].dy);
    c[i] = img.at(px + kInnerCross[i].dx, py + kInnerCross[i].dy);
  }

  // One opposing pair strictly above the other, tested for both pairings.
  const auto alternates = [](const int* q) {
    return std::min(q[0], q[2]) > std::max(q[1], q[3]) ||
           std::min(q[1], q[3]) > std::max(q[0], q[2]);
  };

  InnerResult r;
  r.plus = alternates(p);
  r.cross = alternates(c);
  r.passed = r.plus || r.cross;
  if (!r.passed) return r;

  int vals[8];
  int n = 0;
  if (r.plus)
    for (int i = 0; i < 4; ++i) vals[n++] = p[i];
  if (r.cross)
    for (int i = 0; i < 4; ++i) vals[n++] = c[i];
  r.rho = even_median(vals, n);
  return r;
}

RingLabels RingLabels::from_string(std::string_view s) {
  if (s.size() != 16)
    throw ParamError("ring labels need 16 characters, got " + std::to_string(s.size()));
  RingLabels r;
  for (int i = 0; i < 16; ++i) {
    const char c = s[i];
    if (c != 'd' && c != 's' && c != 'l')
      throw ParamError(std::string("ring labels may only contain d, s, l; got '") + c + "'");
    r.labels[i] = c;
  }
  return r;
}

RingLabels label_outer_ring(const GrayImage& img, int px, int py, double rho, double epsilon) {
  RingLabels r;
  for (int i = 0; i < 16; ++i) {
    const double v = img.at(px + kOuterRing[i].dx, py + kOuterRing[i].dy);
    r.labels[i] = v < rho - epsilon ? 'd' : v > rho + epsilon ? 'l' : 's';
  }
  return r;
}

bool outer_test(const RingLabels& ring) {
  const auto& s = ring.labels;

  // Anchor the scan at a run boundary so every maximal run is seen whole.
  int start = -1;
  for (int i = 0; i < 16; ++i) {
    if (s[i] != s[(i + 15) & 15]) {
      start = i;
      break;
    }
  }
  if (start < 0) return false;  // uniform ring

  char run_label[16];
  int run_len[16];
  int n_runs = 0;
  char cur = s[start];
  int len = 1;
  for (int k = 1; k < 16; ++k) {
    const char c = s[(start + k) & 15];
    if (c == cur) {
      ++len;
      continue;
    }
    run_label[n_runs] = cur;
    run_len[n_runs++] = len;
    cur = c;
    len = 1;
  }
  run_label[n_runs] = cur;
  run_len[n_runs++] = len;

  // Exactly two 'l' arcs and two 'd' arcs of length 2..8, alternating, with
  // at most two 's' at each boundary. With the counts fixed at two of each,
  // rejecting equal neighbouring arcs already enforces cyclic alternation:
  // any rotation of the non-alternating order l,l,d,d keeps one equal pair.
  int n_l = 0;
  int n_d = 0;
  char prev_arc = 0;
  for (int i = 0; i < n_runs; ++i) {
    if (run_label[i] == 's') {
      if (run_len[i] > 2) return false;
      continue;
    }
    if (run_len[i] < 2 || run_len[i] > 8) return false;
    if (run_label[i] == prev_arc) return false;
    prev_arc = run_label[i];
    ++(run_label[i] == 'l' ? n_l : n_d);
  }
  return n_l == 2 && n_d == 2;
}

double ring_response(const GrayImage& img, int px, int py, double rho) {
  double sum = 0.0;
  for (const Offset& o : kOuterRing) sum += std::abs(rho - img.at(px + o.dx, py + o.dy));
  return sum;
}

namespace {

// Twice the median of n values, n in {4, 8}: the sum of the two middle order
// statistics, an exact integer since the inputs are pixel values.
int median_x2(int* v, int n) {
  if (n == 4) {
    const int mn = std::min(std::min(v[0], v[1]), std::min(v[2], v[3]));
    const int mx = std::max(std::max(v[0], v[1]), std::max(v[2], v[3]));
    return v[0] + v[1] + v[2] + v[3] - mn - mx;
  }
  std::sort(v, v + n);
  return v[n / 2 - 1] + v[n / 2];
}

// Same pixel tests as inner_test/label_outer_ring/ring_response, but tuned
// for the dense scan: ring offsets flattened against the row stride, labels
// via branch-free integer thresholds, and the response summed in halves.
// rho is always a multiple of 1/2, so every quantity here is exact and the
// results are bit-identical to the reference functions (the unit tests pin
// that equivalence).
void scan_rows(const GrayImage& img, double epsilon, int y_begin, int y_end,
               std::vector<float>& response, std::vector<Candidate>& out) {
  const int w = img.width;
  const std::uint8_t* data = img.data.data();

  int off_plus[4], off_cross[4], off_ring[16];
  for (int i = 0; i < 4; ++i) {
    off_plus[i] = kInnerPlus[i].dy * w + kInnerPlus[i].dx;
    off_cross[i] = kInnerCross[i].dy * w + kInnerCross[i].dx;
  }
  for (int i = 0; i < 16; ++i) off_ring[i] = kOuterRing[i].dy * w + kOuterRing[i].dx;

  const auto alternates = [](const int* q) {
    return std::min(q[0], q[2]) > std::max(q[1], q[3]) ||
           std::min(q[1], q[3]) > std::max(q[0], q[2]);
  };
  static constexpr char kLabelOf[3] = {'d', 's', 'l'};

  for (int y = y_begin; y < y_end; ++y) {
    const std::uint8_t* row = data + std::size_t(y) * w;
    for (int x = kRingMargin; x < w - kRingMargin; ++x) {
      const std::uint8_t* ctr = row + x;
      int p[4], c[4];
      for (int i = 0; i < 4; ++i) {
        p[i] = ctr[off_plus[i]];
        c[i] = ctr[off_cross[i]];
      }
      const bool plus = alternates(p);
      const bool cross = alternates(c);
      if (!plus && !cross) continue;

      int vals[8];
      int n = 0;
      if (plus)
        for (int i = 0; i < 4; ++i) vals[n++] = p[i];
      if (cross)
        for (int i = 0; i < 4; ++i) vals[n++] = c[i];
      const int rho_x2 = median_x2(vals, n);
      const double rho = rho_x2 / 2.0;

      // v < rho - eps  <=>  v <= ceil(rho - eps) - 1, and likewise above
      const int dark_max = int(std::ceil(rho - epsilon)) - 1;
      const int light_min = int(std::floor(rho + epsilon)) + 1;
      RingLabels ring;
      int ring_px[16];
      for (int i = 0; i < 16; ++i) {
        const int v = ctr[off_ring[i]];
        ring_px[i] = v;
        ring.labels[i] = kLabelOf[1 + int(v >= light_min) - int(v <= dark_max)];
      }
      if (!outer_test(ring)) continue;

      int sum_x2 = 0;
      for (int i = 0; i < 16; ++i) sum_x2 += std::abs(rho_x2 - 2 * ring_px[i]);
      const float r = float(sum_x2 / 2.0);
      response[std::size_t(y) * w + x] = r;
      out.push_back({x, y, r});
    }
  }
}

}  // namespace

LevelResult detect_level(const GrayImage& img, const DetectorParams& params, int threads) {
  params.validate();
  if (img.width < kMinLevelSize || img.height < kMinLevelSize)
    throw ParamError("detection level smaller than " + std::to_string(kMinLevelSize) + " px");

  LevelResult lv;
  lv.width = img.width;
  lv.height = img.height;
  lv.response.assign(std::size_t(img.width) * img.height, 0.0f);

  const int y_begin = kRingMargin;
  const int y_end = img.height - kRingMargin;
  const int rows = y_end - y_begin;
  const int n = std::clamp(threads, 1, rows);
  if (n == 1) {
    scan_rows(img, params.epsilon, y_begin, y_end, lv.response, lv.candidates);
    return lv;
  }

  // Disjoint row bands write to disjoint response rows; candidate lists are
  // concatenated in band order, so the result matches the serial scan.
  std::vector<std::vector<Candidate>> bands(n);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int t = 0; t < n; ++t) {
    const int b0 = y_begin + rows * t / n;
    const int b1 = y_begin + rows * (t + 1) / n;
    pool.emplace_back([&, t, b0, b1] {
      scan_rows(img, params.epsilon, b0, b1, lv.response, bands[t]);
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& band : bands)
    lv.candidates.insert(lv.candidates.end(), band.begin(), band.end());
  return lv;
}

std::vector<Candidate> nms(const LevelResult& level) {
  std::vector<Candidate> out;
  for (const Candidate& c : level.candidates) {
    bool keep = true;
    for (int dy = -1; dy <= 1 && keep; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const float q = level.response_at(c.x + dx, c.y + dy);
        const bool later = dy > 0 || (dy == 0 && dx > 0);
        if (later ? q >= c.response : q > c.response) {
          keep = false;
          break;
        }
      }
    }
    if (keep) out.push_back(c);
  }
  return out;
}

Point2 refine(const LevelResult& level, const Candidate& c) {
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const double w = level.response_at(c.x + dx, c.y + dy);
      sw += w;
      sx += w * (c.x + dx);
      sy += w * (c.y + dy);
    }
  }
  if (sw <= 0.0) return {double(c.x), double(c.y)};  // lone zero-response candidate
  return {sx / sw, sy / sw};
}

std::vector<Keypoint> detect(const GrayImage& img, const DetectorParams& params, int threads) {
  params.validate();
  return detect(build_pyramid(img, params.n_levels, params.scale_factor), params, threads);
}

std::vector<Keypoint> detect(const Pyramid& pyr, const DetectorParams& params, int threads) {
  params.validate();
  if (pyr.levels.empty() || pyr.levels.size() != pyr.level_scales.size())
    throw ParamError("pyramid is empty or its scales are misaligned");

  struct Rec {
    float response;
    int level;
    int iy, ix;  // unrefined candidate position, for deterministic ordering
    double x, y;
  };
  std::vector<Rec> recs;
  for (std::size_t n = 0; n < pyr.levels.size(); ++n) {
    const LevelResult lv = detect_level(pyr.levels[n], params, threads);
    const double s = pyr.level_scales[n];
    for (const Candidate& c : nms(lv)) {
      const Point2 p = refine(lv, c);
      recs.push_back({c.response, int(n), c.y, c.x, (p.x + 0.5) * s - 0.5, (p.y + 0.5) * s - 0.5});
    }
  }

  std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
    if (a.response != b.response) return a.response > b.response;
    if (a.level != b.level) return a.level < b.level;
    if (a.iy != b.iy) return a.iy < b.iy;
    return a.ix < b.ix;
  });
  if (params.max_features && recs.size() > std::size_t(*params.max_features))
    recs.resize(std::size_t(*params.max_features));

  std::vector<Keypoint> kps;
  kps.reserve(recs.size());
  for (const Rec& r : recs)
    kps.push_back({r.x, r.y, r.level, pyr.level_scales[std::size_t(r.level)], double(r.response)});
  return kps;
}

}  // namespace saddle
