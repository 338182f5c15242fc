#include "saddle/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace saddle {

GrayImage::GrayImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w < 1 || h < 1)
    throw ParamError("image dimensions must be positive, got " + std::to_string(w) + "x" +
                     std::to_string(h));
  data.assign(std::size_t(w) * h, fill);
}

namespace {

// Next whitespace-separated token, skipping '#' comments that run to the end
// of their line.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(char(c));
  }
  return tok;
}

int parse_field(std::istream& in, const std::string& path, const char* field, int lo, int hi) {
  const std::string tok = next_token(in);
  if (tok.empty()) throw IoError("PGM " + path + ": missing " + field);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size())
    throw IoError("PGM " + path + ": " + field + " is not a number: '" + tok + "'");
  if (v < lo || v > hi)
    throw IoError("PGM " + path + ": " + field + " out of range [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]: " + std::to_string(v));
  return int(v);
}

}  // namespace

GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image file: " + path);

  const std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5")
    throw IoError("PGM " + path + ": magic must be P2 or P5, got '" + magic + "'");

  const int width = parse_field(in, path, "width", 1, 1 << 20);
  const int height = parse_field(in, path, "height", 1, 1 << 20);
  const int maxval = parse_field(in, path, "maxval", 1, 255);

  GrayImage img(width, height);
  if (magic == "P5") {
    // next_token consumed the single whitespace byte that ends the maxval
    // field, so the raster starts at the current position.
    in.read(reinterpret_cast<char*>(img.data.data()), std::streamsize(img.data.size()));
    if (std::size_t(in.gcount()) != img.data.size())
      throw IoError("PGM " + path + ": pixel data truncated, expected " +
                    std::to_string(img.data.size()) + " bytes, got " +
                    std::to_string(in.gcount()));
  } else {
    for (std::size_t i = 0; i < img.data.size(); ++i) {
      const int v = parse_field(in, path, "pixel value", 0, 255);
      img.data[i] = std::uint8_t(v);
    }
  }
  (void)maxval;  // values above maxval are tolerated; the type caps them at 255
  return img;
}

void save_pgm(const GrayImage& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open image file for writing: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()), std::streamsize(img.data.size()));
  if (!out) throw IoError("failed to write image file: " + path);
}

GrayImage downsample(const GrayImage& img, double factor) {
  if (!(factor > 1.0)) throw ParamError("downsample factor must be > 1");
  const int ow = int(std::lround(img.width / factor));
  const int oh = int(std::lround(img.height / factor));
  if (ow < 1 || oh < 1) throw ParamError("downsample output would be empty");

  GrayImage out(ow, oh);
  const auto src_coord = [factor](int o, int limit) {
    double v = (o + 0.5) * factor - 0.5;
    return std::clamp(v, 0.0, double(limit - 1));
  };

  std::vector<int> x0(ow), x1(ow);
  std::vector<double> fx(ow);
  for (int x = 0; x < ow; ++x) {
    const double sx = src_coord(x, img.width);
    x0[x] = int(sx);
    x1[x] = std::min(x0[x] + 1, img.width - 1);
    fx[x] = sx - x0[x];
  }
  for (int y = 0; y < oh; ++y) {
    const double sy = src_coord(y, img.height);
    const int y0 = int(sy);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fy = sy - y0;
    const std::uint8_t* r0 = &img.data[std::size_t(y0) * img.width];
    const std::uint8_t* r1 = &img.data[std::size_t(y1) * img.width];
    std::uint8_t* dst = &out.data[std::size_t(y) * ow];
    for (int x = 0; x < ow; ++x) {
      // The interpolated value is the base pixel plus a term built only from
      // pixel differences. Quantizing the difference term and adding the base
      // as an integer keeps downsample(img + c) == downsample(img) + c
      // bit-exact: the difference bits cannot depend on a constant offset.
      const int p00 = r0[x0[x]], p01 = r0[x1[x]];
      const int p10 = r1[x0[x]], p11 = r1[x1[x]];
      const double d = fx[x] * (p01 - p00) + fy * (p10 - p00) +
                       fx[x] * fy * ((p00 - p01) + (p11 - p10));
      dst[x] = std::uint8_t(std::clamp(p00 + int(std::floor(d + 0.5)), 0, 255));
    }
  }
  return out;
}

Pyramid build_pyramid(const GrayImage& img, int n_levels, double factor) {
  if (n_levels < 1) throw ParamError("pyramid needs at least one level");
  if (!(factor > 1.0)) throw ParamError("pyramid scale factor must be > 1");
  if (img.width < kMinLevelSize || img.height < kMinLevelSize)
    throw ParamError("image too small for a pyramid, need at least " +
                     std::to_string(kMinLevelSize) + " px per side");

  Pyramid pyr;
  pyr.scale_factor = factor;
  pyr.levels.push_back(img);
  pyr.level_scales.push_back(1.0);
  for (int n = 1; n < n_levels; ++n) {
    const GrayImage& prev = pyr.levels.back();
    const int nw = int(std::lround(prev.width / factor));
    const int nh = int(std::lround(prev.height / factor));
    if (nw < kMinLevelSize || nh < kMinLevelSize) break;
    pyr.levels.push_back(downsample(prev, factor));
    pyr.level_scales.push_back(pyr.level_scales.back() * factor);
  }
  return pyr;
}

}  // namespace saddle
