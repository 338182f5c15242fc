#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <regex>
#include <set>
#include <tuple>

#include "helpers.hpp"
#include "oracles.hpp"
#include "saddle/detector.hpp"
#include "saddle/synth.hpp"

using namespace saddle;

namespace {

// 7x7 patch with the given inner-ring values around the center (3, 3).
// plus/cross order follows kInnerPlus/kInnerCross.
GrayImage inner_patch(const std::array<int, 4>& plus, const std::array<int, 4>& cross,
                      std::uint8_t fill = 0) {
  GrayImage img(7, 7, fill);
  for (int i = 0; i < 4; ++i) {
    img.at(3 + kInnerPlus[i].dx, 3 + kInnerPlus[i].dy) = std::uint8_t(plus[i]);
    img.at(3 + kInnerCross[i].dx, 3 + kInnerCross[i].dy) = std::uint8_t(cross[i]);
  }
  return img;
}

// 7x7 patch whose outer ring holds the given 16 values (kOuterRing order).
GrayImage ring_patch(const std::array<int, 16>& ring, std::uint8_t fill = 0) {
  GrayImage img(7, 7, fill);
  for (int i = 0; i < 16; ++i)
    img.at(3 + kOuterRing[i].dx, 3 + kOuterRing[i].dy) = std::uint8_t(ring[i]);
  return img;
}

LevelResult make_level(int w, int h, const std::vector<Candidate>& cands) {
  LevelResult lv;
  lv.width = w;
  lv.height = h;
  lv.response.assign(std::size_t(w) * h, 0.0f);
  lv.candidates = cands;
  std::sort(lv.candidates.begin(), lv.candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  for (const Candidate& c : lv.candidates) lv.response[std::size_t(c.y) * w + c.x] = c.response;
  return lv;
}

std::string rotate_ring(const std::string& s, int r) {
  std::string out(s.size(), ' ');
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[(i + std::size_t(r)) % s.size()];
  return out;
}

}  // namespace

TEST_CASE("ring geometry") {
  std::set<std::pair<int, int>> outer;
  for (const Offset& o : kOuterRing) {
    outer.insert({o.dx, o.dy});
    // nearest-integer distance 3: exactly the 16 points of the discrete circle
    CHECK(std::lround(std::hypot(o.dx, o.dy)) == 3);
  }
  CHECK(outer.size() == 16);
  CHECK(kOuterRing[0].dx == 0);
  CHECK(kOuterRing[0].dy == -3);
  CHECK(kOuterRing[4].dx == 3);
  CHECK(kOuterRing[4].dy == 0);

  for (const Offset& o : kInnerPlus) CHECK(std::max(std::abs(o.dx), std::abs(o.dy)) == 2);
  for (const Offset& o : kInnerCross) {
    CHECK(std::abs(o.dx) == 2);
    CHECK(std::abs(o.dy) == 2);
  }

  // consecutive ring positions touch (8-connectivity), including the wrap
  for (int i = 0; i < 16; ++i) {
    const Offset& a = kOuterRing[std::size_t(i)];
    const Offset& b = kOuterRing[std::size_t((i + 1) % 16)];
    CHECK(std::abs(a.dx - b.dx) <= 1);
    CHECK(std::abs(a.dy - b.dy) <= 1);
  }
}

TEST_CASE("DetectorParams validation") {
  DetectorParams p;
  CHECK_NOTHROW(p.validate());  // defaults: epsilon 1, 6 levels, factor 1.3

  DetectorParams bad = p;
  bad.epsilon = -0.5;
  CHECK_THROWS_AS(bad.validate(), ParamError);
  bad.epsilon = 128.0;
  CHECK_THROWS_AS(bad.validate(), ParamError);

  bad = p;
  bad.n_levels = 0;
  CHECK_THROWS_AS(bad.validate(), ParamError);

  bad = p;
  bad.scale_factor = 1.0;
  CHECK_THROWS_AS(bad.validate(), ParamError);

  bad = p;
  bad.max_features = 0;
  CHECK_THROWS_AS(bad.validate(), ParamError);
  bad.max_features = 1;
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("inner_test single shape with median of four") {
  // N=200, S=190, E=100, W=110; diagonals flat at 150
  const GrayImage img = inner_patch({200, 100, 190, 110}, {150, 150, 150, 150});
  const InnerResult r = inner_test(img, 3, 3);
  CHECK(r.passed);
  CHECK(r.plus);
  CHECK_FALSE(r.cross);
  CHECK(r.rho == 150.0);  // median{100,110,190,200} = (110+190)/2
}

TEST_CASE("inner_test both shapes with median of eight") {
  // plus pair {190,200} over {100,110}; cross pair {180,210} over {90,120}
  const GrayImage img = inner_patch({190, 100, 200, 110}, {180, 90, 210, 120});
  const InnerResult r = inner_test(img, 3, 3);
  CHECK(r.passed);
  CHECK(r.plus);
  CHECK(r.cross);
  CHECK(r.rho == 150.0);  // (120 + 180) / 2 over the eight values
}

TEST_CASE("inner_test darker pair orientation also passes") {
  const GrayImage img = inner_patch({10, 200, 20, 210}, {100, 100, 100, 100});
  const InnerResult r = inner_test(img, 3, 3);
  CHECK(r.passed);
  CHECK(r.plus);
  CHECK(r.rho == (20 + 200) / 2.0);
}

TEST_CASE("inner_test comparisons are strict") {
  const GrayImage img = inner_patch({100, 100, 100, 50}, {100, 100, 100, 100});
  CHECK_FALSE(inner_test(img, 3, 3).passed);  // min{N,S}=100 not > max{E,W}=100
  CHECK_FALSE(inner_test(GrayImage(7, 7, 128), 3, 3).passed);
}

TEST_CASE("inner_test fails on linear ramps") {
  for (int a : {-3, -1, 0, 2}) {
    for (int b : {-2, 0, 1, 3}) {
      GrayImage img(7, 7);
      for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 7; ++x)
          img.at(x, y) = std::uint8_t(std::clamp(128 + a * (x - 3) + b * (y - 3), 0, 255));
      CHECK_FALSE(inner_test(img, 3, 3).passed);
    }
  }
}

TEST_CASE("RingLabels string conversion") {
  const std::string s = "llllddddllllddds";
  CHECK(RingLabels::from_string(s).str() == s);
  CHECK_THROWS_AS(RingLabels::from_string("lld"), ParamError);
  CHECK_THROWS_AS(RingLabels::from_string("llllddddllllddax"), ParamError);
}

TEST_CASE("label_outer_ring thresholds") {
  std::array<int, 16> vals{};

  SUBCASE("alternating quads") {
    for (int i = 0; i < 16; ++i) vals[std::size_t(i)] = (i / 4) % 2 == 0 ? 170 : 130;
    const GrayImage img = ring_patch(vals);
    CHECK(label_outer_ring(img, 3, 3, 150.0, 10.0).str() == "llllddddlllldddd");
  }

  SUBCASE("band boundaries are inclusive") {
    vals.fill(150);
    vals[0] = 160;  // == rho + eps
    vals[1] = 140;  // == rho - eps
    vals[2] = 161;
    vals[3] = 139;
    const GrayImage img = ring_patch(vals);
    const std::string s = label_outer_ring(img, 3, 3, 150.0, 10.0).str();
    CHECK(s.substr(0, 4) == "ssld");
    CHECK(s.substr(4) == std::string(12, 's'));
  }

  SUBCASE("all equal rho") {
    vals.fill(77);
    const GrayImage img = ring_patch(vals);
    CHECK(label_outer_ring(img, 3, 3, 77.0, 0.0).str() == std::string(16, 's'));
  }

  SUBCASE("fractional rho") {
    vals.fill(128);
    const GrayImage img = ring_patch(vals);
    // 128 > 127.5 + 0.25, so everything reads l
    CHECK(label_outer_ring(img, 3, 3, 127.5, 0.25).str() == std::string(16, 'l'));
  }
}

TEST_CASE("outer_test fixed cases") {
  const auto check = [](const std::string& s, bool want) {
    CAPTURE(s);
    CHECK(outer_test(RingLabels::from_string(s)) == want);
  };
  check("llllddddlllldddd", true);   // canonical two-by-two arcs
  check(std::string(16, 'l'), false);  // single arc
  check(std::string(16, 's'), false);
  check("llddllddllddlldd", false);  // four arcs of each
  check("lllssdddslllsdds", true);   // arc lengths 3,2,3,1,3,1,2,1
  check("lllllllllddllldd", false);  // l-arc of length 9
  check("lllsssdddlllsddd", false);  // three consecutive s at one boundary
  check("llsdddsllsddddss", true);
  check("llssllddddddddss", false);  // l,s,l: s inside what should be one arc
  check("ldldldldldldldld", false);  // arcs of length 1
  check("lldddddddddddddd", false);  // one arc of each label only
}

TEST_CASE("outer_test is rotation invariant") {
  for (const std::string& s : {std::string("lllssdddslllsdds"), std::string("llllddddlllldddd")}) {
    for (int r = 0; r < 16; ++r) CHECK(outer_test(RingLabels::from_string(rotate_ring(s, r))));
  }
  for (int r = 0; r < 16; ++r)
    CHECK_FALSE(outer_test(RingLabels::from_string(rotate_ring("lllsssdddlllsddd", r))));
}

TEST_CASE("linear ring oracle agrees with std::regex") {
  const std::regex pattern("l{2,8}s{0,2}d{2,8}s{0,2}l{2,8}s{0,2}d{2,8}s{0,2}");
  std::mt19937 rng(99);
  const char abc[] = {'d', 's', 'l'};
  for (int i = 0; i < 5000; ++i) {
    std::string s(16, ' ');
    for (auto& c : s) c = abc[rng() % 3];
    CHECK(oracles::linear_ring_match(s) == std::regex_match(s, pattern));
  }
}

TEST_CASE("outer_test agrees with the rotation oracle on random strings") {
  std::mt19937 rng(42);
  const char abc[] = {'d', 's', 'l'};
  int positives = 0;

  for (int i = 0; i < 100000; ++i) {
    std::string s(16, ' ');
    for (auto& c : s) c = abc[rng() % 3];
    const bool want = oracles::ring_match_by_rotation(s);
    positives += want;
    CAPTURE(s);
    REQUIRE(outer_test(RingLabels::from_string(s)) == want);
  }
  CHECK(positives > 0);

  // run-structured strings hit the boundary lengths far more often
  positives = 0;
  for (int i = 0; i < 30000; ++i) {
    std::string s;
    while (s.size() < 16) {
      const char c = abc[rng() % 3];
      const int len = 1 + int(rng() % (c == 's' ? 3 : 8));
      s.append(std::size_t(len), c);
    }
    s.resize(16);
    const bool want = oracles::ring_match_by_rotation(s);
    positives += want;
    CAPTURE(s);
    REQUIRE(outer_test(RingLabels::from_string(s)) == want);
  }
  CHECK(positives > 100);
}

TEST_CASE("ring_response sums absolute deviations") {
  std::array<int, 16> vals{};
  for (int i = 0; i < 16; ++i) vals[std::size_t(i)] = i % 2 == 0 ? 170 : 130;
  CHECK(ring_response(ring_patch(vals), 3, 3, 150.0) == 320.0);  // 16 x 20

  for (int i = 0; i < 16; ++i) vals[std::size_t(i)] = i < 8 ? 180 : 110;
  CHECK(ring_response(ring_patch(vals), 3, 3, 150.0) == 560.0);  // 8*30 + 8*40

  vals.fill(99);
  CHECK(ring_response(ring_patch(vals), 3, 3, 99.0) == 0.0);
}

TEST_CASE("detect_level on flat and ramp images is empty") {
  DetectorParams params;
  CHECK(detect_level(GrayImage(32, 32, 128), params).candidates.empty());

  GrayImage ramp(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) ramp.at(x, y) = std::uint8_t(std::clamp(2 * x + 3 * y, 0, 255));
  CHECK(detect_level(ramp, params).candidates.empty());
}

TEST_CASE("detect_level finds an ideal chessboard corner") {
  // four 8x8 blocks meeting at the center of a 16x16 tile; the corner point
  // lies between pixels at (7.5, 7.5)
  const GrayImage img = chessboard(16, 16, 8);
  DetectorParams params;
  const LevelResult lv = detect_level(img, params);

  // every ring pixel is 0 or 255 and any passing inner pattern has rho 127.5,
  // so the response is flat: 16 * 127.5 across the whole passing region
  REQUIRE(lv.candidates.size() == 12);
  for (const Candidate& c : lv.candidates) {
    CHECK(c.response == 2040.0f);
    CHECK(std::abs(c.x - 7.5) <= 1.5);
    CHECK(std::abs(c.y - 7.5) <= 1.5);
    CHECK(lv.response_at(c.x, c.y) == c.response);
  }

  const auto has = [&lv](int x, int y) {
    return std::any_of(lv.candidates.begin(), lv.candidates.end(),
                       [&](const Candidate& c) { return c.x == x && c.y == y; });
  };
  // the 2x2 block astride the corner passes: arcs l/d alternate with lengths
  // in [2, 8] (e.g. at (7,7): l5 d4 l3 d4 cyclically)
  for (int y : {7, 8})
    for (int x : {7, 8}) CHECK(has(x, y));
  // the diagonal tips of the diamond see a single-pixel arc and fail
  CHECK_FALSE(has(6, 6));
  CHECK_FALSE(has(9, 6));
  CHECK_FALSE(has(6, 9));
  CHECK_FALSE(has(9, 9));

  // on the constant plateau NMS keeps exactly the raster-last member ...
  const std::vector<Candidate> kept = nms(lv);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].x == 8);
  CHECK(kept[0].y == 9);
  // ... whose equal-weight 3x3 centroid covers candidates (7,8) (8,8) (9,8)
  // (7,9) (8,9): x = 39/5, y = 42/5, within a pixel of the corner
  const Point2 r = refine(lv, kept[0]);
  CHECK(r.x == doctest::Approx(7.8).epsilon(1e-12));
  CHECK(r.y == doctest::Approx(8.4).epsilon(1e-12));
  CHECK(std::hypot(r.x - 7.5, r.y - 7.5) <= 1.0);
}

TEST_CASE("detect_level matches the reference primitives pixel for pixel") {
  const GrayImage images[] = {
      gaussian_blur(helpers::random_image(72, 56, 91), 1.0),
      helpers::random_image(48, 48, 17),
      chessboard(64, 48, 8),
  };
  for (const GrayImage& img : images) {
    DetectorParams params;
    const LevelResult lv = detect_level(img, params);
    std::size_t n_cand = 0;
    for (int y = kRingMargin; y < img.height - kRingMargin; ++y) {
      for (int x = kRingMargin; x < img.width - kRingMargin; ++x) {
        const InnerResult inner = inner_test(img, x, y);
        float want = 0.0f;
        if (inner.passed &&
            outer_test(label_outer_ring(img, x, y, inner.rho, params.epsilon))) {
          want = float(ring_response(img, x, y, inner.rho));
          REQUIRE(n_cand < lv.candidates.size());
          const Candidate& c = lv.candidates[n_cand++];
          CHECK(c.x == x);
          CHECK(c.y == y);
          CHECK(c.response == want);
        }
        CHECK(lv.response_at(x, y) == want);
      }
    }
    CHECK(n_cand == lv.candidates.size());
  }
}

TEST_CASE("detect_level row bands match the serial scan") {
  const GrayImage img = gaussian_blur(helpers::random_image(64, 48, 5), 1.0);
  DetectorParams params;
  const LevelResult serial = detect_level(img, params, 1);
  for (int threads : {2, 3, 8, 64}) {
    const LevelResult par = detect_level(img, params, threads);
    CHECK(par.response == serial.response);
    REQUIRE(par.candidates.size() == serial.candidates.size());
    for (std::size_t i = 0; i < serial.candidates.size(); ++i) {
      CHECK(par.candidates[i].x == serial.candidates[i].x);
      CHECK(par.candidates[i].y == serial.candidates[i].y);
      CHECK(par.candidates[i].response == serial.candidates[i].response);
    }
  }
}

TEST_CASE("nms keeps isolated and dominant candidates") {
  const LevelResult lone = make_level(10, 10, {{4, 4, 10.f}});
  REQUIRE(nms(lone).size() == 1);
  CHECK(nms(lone)[0].x == 4);

  const LevelResult pair = make_level(10, 10, {{4, 4, 10.f}, {5, 4, 12.f}});
  const auto kept = nms(pair);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].x == 5);
  CHECK(kept[0].response == 12.f);
}

TEST_CASE("nms resolves plateaus to the raster-last element") {
  const LevelResult two = make_level(10, 10, {{4, 4, 10.f}, {5, 4, 10.f}});
  auto kept = nms(two);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].x == 5);

  const LevelResult row = make_level(12, 10, {{4, 4, 10.f}, {5, 4, 10.f}, {6, 4, 10.f}});
  kept = nms(row);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].x == 6);

  const LevelResult vert = make_level(10, 12, {{4, 4, 10.f}, {4, 5, 10.f}});
  kept = nms(vert);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].y == 5);

  // diagonal plateau plus a separate stronger point two cells away
  const LevelResult mix = make_level(12, 12, {{4, 4, 10.f}, {5, 5, 10.f}, {8, 8, 11.f}});
  kept = nms(mix);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].x == 5);
  CHECK(kept[1].x == 8);
}

TEST_CASE("nms survivors are never 8-adjacent") {
  const GrayImage img = gaussian_blur(helpers::random_image(96, 96, 11), 1.0);
  const LevelResult lv = detect_level(img, DetectorParams{});
  const auto kept = nms(lv);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = i + 1; j < kept.size(); ++j) {
      const int d = std::max(std::abs(kept[i].x - kept[j].x), std::abs(kept[i].y - kept[j].y));
      CHECK(d > 1);
    }
}

TEST_CASE("refine weighted centroid") {
  const LevelResult lone = make_level(12, 12, {{5, 5, 10.f}});
  Point2 p = refine(lone, lone.candidates[0]);
  CHECK(p.x == 5.0);
  CHECK(p.y == 5.0);

  const LevelResult two = make_level(12, 12, {{5, 5, 10.f}, {6, 5, 10.f}});
  p = refine(two, two.candidates[0]);
  CHECK(p.x == 5.5);
  CHECK(p.y == 5.0);

  const LevelResult skew = make_level(12, 12, {{5, 5, 30.f}, {4, 5, 10.f}});
  p = refine(skew, skew.candidates[1]);  // candidate at (5,5) sorts after (4,5)
  CHECK(p.x == doctest::Approx(4.75));
  CHECK(p.y == 5.0);

  // result stays within 1 px of the candidate
  const LevelResult full = make_level(12, 12, {{5, 5, 10.f}, {4, 4, 9.f}, {6, 6, 9.f}, {6, 4, 2.f}});
  for (const Candidate& c : full.candidates) {
    const Point2 q = refine(full, c);
    CHECK(std::abs(q.x - c.x) <= 1.0);
    CHECK(std::abs(q.y - c.y) <= 1.0);
  }
}

TEST_CASE("detect composes the per-level pipeline with the base mapping") {
  const GrayImage img = gaussian_blur(chessboard(96, 80, 12), 1.0);
  DetectorParams params;
  params.n_levels = 3;

  const Pyramid pyr = build_pyramid(img, params.n_levels, params.scale_factor);
  struct Rec {
    double x, y, scale, response;
    int level;
  };
  std::vector<Rec> expected;
  for (std::size_t n = 0; n < pyr.levels.size(); ++n) {
    const LevelResult lv = detect_level(pyr.levels[n], params);
    const double s = pyr.level_scales[n];
    for (const Candidate& c : nms(lv)) {
      const Point2 p = refine(lv, c);
      expected.push_back({(p.x + 0.5) * s - 0.5, (p.y + 0.5) * s - 0.5, s, double(c.response), int(n)});
    }
  }

  const std::vector<Keypoint> got = detect(img, params);
  REQUIRE(got.size() == expected.size());

  const auto key = [](double x, double y, int level) { return std::make_tuple(level, x, y); };
  std::vector<std::tuple<int, double, double>> ek, gk;
  for (const Rec& r : expected) ek.push_back(key(r.x, r.y, r.level));
  for (const Keypoint& k : got) gk.push_back(key(k.x, k.y, k.level));
  std::sort(ek.begin(), ek.end());
  std::sort(gk.begin(), gk.end());
  CHECK(ek == gk);

  for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i - 1].response >= got[i].response);
  for (const Keypoint& k : got) {
    CHECK(k.x >= 0.0);
    CHECK(k.x <= img.width - 1.0);
    CHECK(k.y >= 0.0);
    CHECK(k.y <= img.height - 1.0);
    CHECK(k.scale == pyr.level_scales[std::size_t(k.level)]);
    CHECK(k.response > 8.0 * params.epsilon);
  }
}

TEST_CASE("detect is empty on flat input and validates size") {
  CHECK(detect(GrayImage(256, 256, 200), DetectorParams{}).empty());
  CHECK_THROWS_AS(detect(GrayImage(15, 15, 0), DetectorParams{}), ParamError);
}

TEST_CASE("detect honours max_features with deterministic ties") {
  const GrayImage img = gaussian_blur(chessboard(128, 128, 16), 1.0);
  DetectorParams params;
  const std::vector<Keypoint> all = detect(img, params);
  REQUIRE(all.size() > 10);

  params.max_features = 10;
  const std::vector<Keypoint> top = detect(img, params);
  REQUIRE(top.size() == 10);
  for (std::size_t i = 0; i < top.size(); ++i) {
    CHECK(top[i].x == all[i].x);
    CHECK(top[i].y == all[i].y);
    CHECK(top[i].response == all[i].response);
  }
}

TEST_CASE("detect output is identical across thread counts") {
  const GrayImage img = gaussian_blur(helpers::random_image(120, 90, 21), 1.2);
  const std::vector<Keypoint> base = detect(img, DetectorParams{}, 1);
  REQUIRE_FALSE(base.empty());
  for (int threads : {2, 4, 8}) {
    const std::vector<Keypoint> other = detect(img, DetectorParams{}, threads);
    REQUIRE(other.size() == base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(other[i].x == base[i].x);
      CHECK(other[i].y == base[i].y);
      CHECK(other[i].level == base[i].level);
      CHECK(other[i].scale == base[i].scale);
      CHECK(other[i].response == base[i].response);
    }
  }
}

TEST_CASE("detect is invariant to an additive intensity offset") {
  const GrayImage img = gaussian_blur(helpers::random_image(80, 80, 33, 40, 215), 1.0);
  GrayImage shifted = img;
  for (auto& v : shifted.data) v = std::uint8_t(v + 25);

  const auto a = detect(img, DetectorParams{});
  const auto b = detect(shifted, DetectorParams{});
  REQUIRE_FALSE(a.empty());
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].level == b[i].level);
    CHECK(a[i].response == b[i].response);
  }
}

TEST_CASE("detections depend only on local structure") {
  // texture in the top-left corner of a flat canvas; cropping the canvas far
  // from the texture must not change any keypoint
  GrayImage canvas(200, 200, 128);
  const GrayImage patch = gaussian_blur(helpers::random_image(60, 60, 8), 1.0);
  for (int y = 0; y < 60; ++y)
    for (int x = 0; x < 60; ++x) canvas.at(x, y) = patch.at(x, y);

  GrayImage crop(100, 100);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x) crop.at(x, y) = canvas.at(x, y);

  const auto near_texture = [](const std::vector<Keypoint>& kps) {
    std::vector<Keypoint> out;
    for (const Keypoint& k : kps)
      if (k.x <= 58.0 && k.y <= 58.0) out.push_back(k);
    std::sort(out.begin(), out.end(), [](const Keypoint& a, const Keypoint& b) {
      return std::tie(a.level, a.x, a.y) < std::tie(b.level, b.x, b.y);
    });
    return out;
  };

  const auto a = near_texture(detect(canvas, DetectorParams{}));
  const auto b = near_texture(detect(crop, DetectorParams{}));
  REQUIRE_FALSE(a.empty());
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].level == b[i].level);
    CHECK(a[i].response == b[i].response);
  }
}
