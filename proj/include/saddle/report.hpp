#pragma once

#include <string>
#include <vector>

#include "saddle/detector.hpp"
#include "saddle/errors.hpp"

namespace saddle {

// Keypoint tables. Column order x,y,scale,level,response; reals printed with
// three decimals. Rows keep the order of the input vector.
std::string keypoints_to_csv(const std::vector<Keypoint>& kps);
std::string keypoints_to_json(const std::vector<Keypoint>& kps);
std::vector<Keypoint> keypoints_from_csv(const std::string& text);  // IoError on malformed rows

struct EvalSummary {
  std::string pair;       // "<stem-a>:<stem-b>"
  int tentatives = 0;
  int inliers = 0;
  double inlier_ratio = 0.0;  // at the verification tolerance
  double coverage = 0.0;
  bool matched = false;
};

std::string summary_to_csv(const EvalSummary& s);
std::string curve_to_csv(const std::vector<double>& thresholds, const std::vector<double>& ratios);
std::string eval_to_json(const EvalSummary& s, const std::vector<double>& thresholds,
                         const std::vector<double>& ratios);

std::string bench_to_csv(const std::vector<std::string>& stages,
                         const std::vector<double>& mean_ms, const std::vector<double>& std_ms);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace saddle
