#include "saddle/report.hpp"

#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace saddle {

namespace {

constexpr const char* kKeypointHeader = "x,y,scale,level,response";

void append_line(std::string& out, const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  out += buf;
}

}  // namespace

std::string keypoints_to_csv(const std::vector<Keypoint>& kps) {
  std::string out = std::string(kKeypointHeader) + "\n";
  for (const Keypoint& k : kps)
    append_line(out, "%.3f,%.3f,%.3f,%d,%.3f\n", k.x, k.y, k.scale, k.level, k.response);
  return out;
}

std::string keypoints_to_json(const std::vector<Keypoint>& kps) {
  if (kps.empty()) return "[]\n";
  std::string out = "[\n";
  for (std::size_t i = 0; i < kps.size(); ++i) {
    const Keypoint& k = kps[i];
    append_line(out, "  {\"x\": %.3f, \"y\": %.3f, \"scale\": %.3f, \"level\": %d, \"response\": %.3f}%s\n",
                k.x, k.y, k.scale, k.level, k.response, i + 1 < kps.size() ? "," : "");
  }
  out += "]\n";
  return out;
}

std::vector<Keypoint> keypoints_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("keypoint CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kKeypointHeader)
    throw IoError("keypoint CSV: bad header '" + line + "'");

  std::vector<Keypoint> kps;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Keypoint k;
    char trailing = 0;
    const int n = std::sscanf(line.c_str(), "%lf,%lf,%lf,%d,%lf%c", &k.x, &k.y, &k.scale,
                              &k.level, &k.response, &trailing);
    if (n != 5)
      throw IoError("keypoint CSV: malformed row at line " + std::to_string(line_no) + ": '" +
                    line + "'");
    kps.push_back(k);
  }
  return kps;
}

std::string summary_to_csv(const EvalSummary& s) {
  std::string out = "pair,inliers,coverage,matched\n";
  append_line(out, "%s,%d,%.6f,%s\n", s.pair.c_str(), s.inliers, s.coverage,
              s.matched ? "true" : "false");
  return out;
}

std::string curve_to_csv(const std::vector<double>& thresholds, const std::vector<double>& ratios) {
  if (thresholds.size() != ratios.size())
    throw ParamError("curve thresholds and ratios differ in length");
  std::string out = "threshold,ratio\n";
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    append_line(out, "%.2f,%.6f\n", thresholds[i], ratios[i]);
  return out;
}

std::string eval_to_json(const EvalSummary& s, const std::vector<double>& thresholds,
                         const std::vector<double>& ratios) {
  if (thresholds.size() != ratios.size())
    throw ParamError("curve thresholds and ratios differ in length");
  std::string out = "{\n";
  append_line(out, "  \"pair\": \"%s\",\n", s.pair.c_str());
  append_line(out, "  \"tentatives\": %d,\n", s.tentatives);
  append_line(out, "  \"inliers\": %d,\n", s.inliers);
  append_line(out, "  \"inlier_ratio\": %.6f,\n", s.inlier_ratio);
  append_line(out, "  \"coverage\": %.6f,\n", s.coverage);
  append_line(out, "  \"matched\": %s,\n", s.matched ? "true" : "false");
  out += "  \"curve\": [\n";
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    append_line(out, "    {\"threshold\": %.2f, \"ratio\": %.6f}%s\n", thresholds[i], ratios[i],
                i + 1 < thresholds.size() ? "," : "");
  out += "  ]\n}\n";
  return out;
}

std::string bench_to_csv(const std::vector<std::string>& stages,
                         const std::vector<double>& mean_ms, const std::vector<double>& std_ms) {
  if (stages.size() != mean_ms.size() || stages.size() != std_ms.size())
    throw ParamError("bench columns differ in length");
  std::string out = "stage,mean_ms,std_ms\n";
  for (std::size_t i = 0; i < stages.size(); ++i)
    append_line(out, "%s,%.3f,%.3f\n", stages[i].c_str(), mean_ms[i], std_ms[i]);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed to read file: " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw IoError("failed to write file: " + path);
}

}  // namespace saddle
