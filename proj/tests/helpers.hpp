#pragma once

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "saddle/image.hpp"

namespace helpers {

inline std::string data_dir() { return SADDLE_TEST_DATA_DIR; }

// Fresh path under the system temp dir; the file is not created.
inline std::string temp_path(const std::string& suffix) {
  static std::mt19937_64 rng(std::random_device{}());
  const auto dir = std::filesystem::temp_directory_path();
  char name[64];
  std::snprintf(name, sizeof name, "saddle_test_%016llx%s",
                static_cast<unsigned long long>(rng()), suffix.c_str());
  return (dir / name).string();
}

inline saddle::GrayImage random_image(int w, int h, std::uint32_t seed, int lo = 0, int hi = 255) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(lo, hi);
  saddle::GrayImage img(w, h);
  for (auto& v : img.data) v = std::uint8_t(dist(rng));
  return img;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& suffix) : path(temp_path(suffix)) {}
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

// True when fn throws E and the message mentions needle.
template <class E, class F>
bool throws_with(F&& fn, const std::string& needle) {
  try {
    fn();
  } catch (const E& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  } catch (...) {
    return false;
  }
  return false;
}

}  // namespace helpers
