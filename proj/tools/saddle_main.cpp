#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "saddle/detector.hpp"
#include "saddle/eval.hpp"
#include "saddle/geometry.hpp"
#include "saddle/image.hpp"
#include "saddle/report.hpp"
#include "saddle/synth.hpp"

namespace {

using namespace saddle;

struct CommonOpts {
  double epsilon = 1.0;
  int levels = 6;
  double scale_factor = 1.3;
  int max_features = 0;  // 0 = unlimited
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--epsilon", o.epsilon, "Outer-ring similarity band [0, 127]")
      ->capture_default_str();
  cmd->add_option("--levels", o.levels, "Pyramid levels")->capture_default_str();
  cmd->add_option("--scale-factor", o.scale_factor, "Pyramid downsampling factor")
      ->capture_default_str();
  cmd->add_option("--max-features", o.max_features, "Keep only the strongest N keypoints");
  cmd->add_option("--threads", o.threads, "Worker threads for detection")
      ->envname("SADDLE_THREADS")
      ->capture_default_str();
}

DetectorParams to_params(const CommonOpts& o) {
  DetectorParams p;
  p.epsilon = o.epsilon;
  p.n_levels = o.levels;
  p.scale_factor = o.scale_factor;
  if (o.max_features != 0) p.max_features = o.max_features;
  p.validate();
  if (o.threads < 1) throw ParamError("--threads must be >= 1");
  return p;
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

GrayImage annotate_keypoints(const GrayImage& img, const std::vector<Keypoint>& kps) {
  GrayImage out = img;
  for (const Keypoint& kp : kps) {
    const int cx = int(std::lround(kp.x));
    const int cy = int(std::lround(kp.y));
    static constexpr int cross[5][2] = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& d : cross) {
      const int x = cx + d[0];
      const int y = cy + d[1];
      if (x >= 0 && x < out.width && y >= 0 && y < out.height) out.at(x, y) = 255;
    }
  }
  return out;
}

std::vector<double> curve_thresholds() {
  std::vector<double> t;
  for (int i = 1; i <= 20; ++i) t.push_back(0.25 * i);
  return t;
}

int run_detect(const std::string& input, const CommonOpts& opts, const std::string& format,
               const std::string& out_path, const std::string& annotate_path) {
  const DetectorParams params = to_params(opts);
  const GrayImage img = load_pgm(input);
  const std::vector<Keypoint> kps = detect(img, params, opts.threads);
  emit(format == "json" ? keypoints_to_json(kps) : keypoints_to_csv(kps), out_path);
  if (!annotate_path.empty()) save_pgm(annotate_keypoints(img, kps), annotate_path);
  return 0;
}

std::string sigma_tag(double sigma) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", sigma);
  return buf;
}

std::string points_to_csv(const std::vector<PlanePoint>& pts) {
  std::string out = "u,v,x,y\n";
  char buf[160];
  for (const PlanePoint& p : pts) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.3f,%.3f\n", p.u, p.v, p.x, p.y);
    out += buf;
  }
  return out;
}

int run_synth_chessboard(int width, int height, int square, const std::vector<double>& sigmas,
                         const std::string& prefix) {
  for (double s : sigmas)
    if (s < 0.0) throw ParamError("blur sigma must be >= 0, got " + std::to_string(s));
  const GrayImage board = chessboard(width, height, square);
  for (double s : sigmas)
    save_pgm(gaussian_blur(board, s), prefix + "_sigma" + sigma_tag(s) + ".pgm");
  write_text_file(prefix + "_corners.csv", points_to_csv(chessboard_corners(width, height, square)));
  return 0;
}

int run_synth_sinusoid(int width, int height, double wavelength, double contrast,
                       const std::string& h_path, const std::string& prefix) {
  SinusoidSpec spec;
  spec.width = width;
  spec.height = height;
  spec.wavelength = wavelength;
  spec.contrast = contrast;
  if (!h_path.empty()) spec.homography = load_homography(h_path);
  const SinusoidResult res = sinusoid(spec);
  save_pgm(res.image, prefix + ".pgm");
  write_text_file(prefix + "_saddles.csv", points_to_csv(res.saddles));
  return 0;
}

int run_eval(const std::string& path_a, const std::string& path_b, const std::string& path_h,
             const CommonOpts& opts, double tolerance, double disk_radius,
             const std::string& format, const std::string& out_prefix,
             const std::string& mask_path, const std::string& kps_a_path,
             const std::string& kps_b_path) {
  const DetectorParams params = to_params(opts);
  if (tolerance < 0.0) throw ParamError("--tolerance must be >= 0");
  if (!(disk_radius > 0.0)) throw ParamError("--disk-radius must be > 0");

  const GrayImage img_a = load_pgm(path_a);
  const GrayImage img_b = load_pgm(path_b);
  const Homography h = load_homography(path_h);

  const Pyramid pyr_a = build_pyramid(img_a, params.n_levels, params.scale_factor);
  const Pyramid pyr_b = build_pyramid(img_b, params.n_levels, params.scale_factor);
  const std::vector<Keypoint> kps_a = kps_a_path.empty()
                                          ? detect(pyr_a, params, opts.threads)
                                          : keypoints_from_csv(read_text_file(kps_a_path));
  const std::vector<Keypoint> kps_b = kps_b_path.empty()
                                          ? detect(pyr_b, params, opts.threads)
                                          : keypoints_from_csv(read_text_file(kps_b_path));

  const DescribeResult desc_a = describe(pyr_a, kps_a);
  const DescribeResult desc_b = describe(pyr_b, kps_b);
  const std::vector<Match> matches = match(desc_a.descriptors, desc_b.descriptors);
  const VerifyResult ver = verify(matches, h, desc_a.keypoints, desc_b.keypoints, tolerance);

  const CoverageResult cov =
      coverage(ver.inliers, desc_a.keypoints, img_a.width, img_a.height, disk_radius);

  const std::vector<double> thresholds = curve_thresholds();
  const std::vector<double> ratios = matches.empty()
                                         ? std::vector<double>(thresholds.size(), 0.0)
                                         : inlier_ratio_curve(ver.errors, thresholds);

  EvalSummary summary;
  summary.pair = stem(path_a) + ":" + stem(path_b);
  summary.tentatives = int(matches.size());
  summary.inliers = int(ver.inliers.size());
  summary.inlier_ratio =
      matches.empty() ? 0.0 : double(ver.inliers.size()) / double(matches.size());
  summary.coverage = cov.ratio;
  summary.matched = matched_pair(int(ver.inliers.size()));

  if (format == "json") {
    emit(eval_to_json(summary, thresholds, ratios),
         out_prefix.empty() ? "" : out_prefix + ".json");
  } else if (out_prefix.empty()) {
    std::cout << summary_to_csv(summary) << curve_to_csv(thresholds, ratios);
  } else {
    write_text_file(out_prefix + ".summary.csv", summary_to_csv(summary));
    write_text_file(out_prefix + ".curve.csv", curve_to_csv(thresholds, ratios));
  }
  if (!mask_path.empty()) save_pgm(cov.mask, mask_path);
  return 0;
}

int run_bench(const std::vector<std::string>& inputs, const CommonOpts& opts, int repeat,
              const std::string& out_path) {
  const DetectorParams params = to_params(opts);
  if (repeat < 1) throw ParamError("--repeat must be >= 1");

  using Clock = std::chrono::steady_clock;
  const auto ms_since = [](Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };

  const std::vector<std::string> stages = {"load", "pyramid", "detect", "describe", "match"};
  std::vector<std::vector<double>> samples(stages.size());

  for (int rep = -1; rep < repeat; ++rep) {  // rep -1 warms caches, untimed
    std::vector<GrayImage> images;
    auto t0 = Clock::now();
    for (const std::string& path : inputs) images.push_back(load_pgm(path));
    const double t_load = ms_since(t0);

    std::vector<Pyramid> pyrs;
    t0 = Clock::now();
    for (const GrayImage& img : images)
      pyrs.push_back(build_pyramid(img, params.n_levels, params.scale_factor));
    const double t_pyr = ms_since(t0);

    std::vector<std::vector<Keypoint>> kps;
    t0 = Clock::now();
    for (const Pyramid& pyr : pyrs) kps.push_back(detect(pyr, params, opts.threads));
    const double t_det = ms_since(t0);

    std::vector<DescribeResult> descs;
    t0 = Clock::now();
    for (std::size_t i = 0; i < pyrs.size(); ++i) descs.push_back(describe(pyrs[i], kps[i]));
    const double t_desc = ms_since(t0);

    t0 = Clock::now();
    if (descs.size() == 1) {
      (void)match(descs[0].descriptors, descs[0].descriptors);
    } else {
      for (std::size_t i = 0; i + 1 < descs.size(); ++i)
        (void)match(descs[i].descriptors, descs[i + 1].descriptors);
    }
    const double t_match = ms_since(t0);

    if (rep < 0) continue;
    const double vals[] = {t_load, t_pyr, t_det, t_desc, t_match};
    for (std::size_t i = 0; i < stages.size(); ++i) samples[i].push_back(vals[i]);
  }

  std::vector<double> mean(stages.size()), stdev(stages.size());
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const auto& v = samples[i];
    mean[i] = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean[i]) * (x - mean[i]);
    stdev[i] = v.size() > 1 ? std::sqrt(acc / double(v.size() - 1)) : 0.0;
  }
  emit(bench_to_csv(stages, mean, stdev), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saddle-point keypoint detector and evaluation toolkit"};
  app.require_subcommand(1);

  // detect
  auto* detect_cmd = app.add_subcommand("detect", "Detect keypoints in a PGM image");
  std::string detect_input, detect_out, detect_format = "csv", detect_annotate;
  CommonOpts detect_opts;
  detect_cmd->add_option("input", detect_input, "Input image (PGM)")->required();
  detect_cmd->add_option("-o,--output", detect_out, "Output path (default: stdout)");
  detect_cmd->add_option("--format", detect_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  detect_cmd->add_option("--annotate", detect_annotate, "Write a copy of the input with keypoints marked");
  add_common(detect_cmd, detect_opts);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic test patterns");
  synth_cmd->require_subcommand(1);

  auto* chess_cmd = synth_cmd->add_subcommand("chessboard", "Chessboard at several blur levels");
  int chess_w = 256, chess_h = 256, chess_square = 16;
  std::vector<double> chess_sigmas = {0.0, 1.0, 2.0, 4.0};
  std::string chess_prefix = "chessboard";
  chess_cmd->add_option("--width", chess_w, "Image width")->capture_default_str();
  chess_cmd->add_option("--height", chess_h, "Image height")->capture_default_str();
  chess_cmd->add_option("--square", chess_square, "Square side in px")->capture_default_str();
  chess_cmd->add_option("--sigmas", chess_sigmas, "Comma-separated Gaussian blur sigmas")
      ->delimiter(',')
      ->capture_default_str();
  chess_cmd->add_option("-o,--output", chess_prefix, "Output prefix")->capture_default_str();

  auto* sin_cmd = synth_cmd->add_subcommand("sinusoid", "Sinusoidal saddle grid, optionally warped");
  int sin_w = 256, sin_h = 256;
  double sin_wavelength = 32.0, sin_contrast = 1.0;
  std::string sin_h_path, sin_prefix = "sinusoid";
  sin_cmd->add_option("--width", sin_w, "Image width")->capture_default_str();
  sin_cmd->add_option("--height", sin_h, "Image height")->capture_default_str();
  sin_cmd->add_option("--wavelength", sin_wavelength, "Pattern period in px (>= 8)")
      ->capture_default_str();
  sin_cmd->add_option("--contrast", sin_contrast, "Amplitude fraction [0, 1]")
      ->capture_default_str();
  sin_cmd->add_option("--homography", sin_h_path, "Plane-to-image homography file (9 reals)");
  sin_cmd->add_option("-o,--output", sin_prefix, "Output prefix")->capture_default_str();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Match two images under a known homography");
  std::string eval_a, eval_b, eval_h, eval_out, eval_format = "csv", eval_mask;
  std::string eval_kps_a, eval_kps_b;
  double eval_tol = 3.0, eval_disk = 25.0;
  CommonOpts eval_opts;
  eval_cmd->add_option("image_a", eval_a, "Reference image (PGM)")->required();
  eval_cmd->add_option("image_b", eval_b, "Second image (PGM)")->required();
  eval_cmd->add_option("homography", eval_h, "Homography file mapping A to B")->required();
  eval_cmd->add_option("-o,--output", eval_out, "Report prefix (default: stdout)");
  eval_cmd->add_option("--format", eval_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  eval_cmd->add_option("--tolerance", eval_tol, "Inlier reprojection tolerance in px")
      ->capture_default_str();
  eval_cmd->add_option("--disk-radius", eval_disk, "Coverage disk radius in px")
      ->capture_default_str();
  eval_cmd->add_option("--mask", eval_mask, "Write the coverage mask as PGM");
  eval_cmd->add_option("--kps-a", eval_kps_a, "Reuse keypoints for A from a CSV");
  eval_cmd->add_option("--kps-b", eval_kps_b, "Reuse keypoints for B from a CSV");
  add_common(eval_cmd, eval_opts);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time the pipeline stages");
  std::vector<std::string> bench_inputs;
  std::string bench_out;
  int bench_repeat = 10;
  CommonOpts bench_opts;
  bench_cmd->add_option("inputs", bench_inputs, "Input images (PGM)")->required();
  bench_cmd->add_option("--repeat", bench_repeat, "Timed repetitions")->capture_default_str();
  bench_cmd->add_option("-o,--output", bench_out, "Output path (default: stdout)");
  add_common(bench_cmd, bench_opts);

  try {
    app.parse(argc, argv);
    if (detect_cmd->parsed())
      return run_detect(detect_input, detect_opts, detect_format, detect_out, detect_annotate);
    if (chess_cmd->parsed())
      return run_synth_chessboard(chess_w, chess_h, chess_square, chess_sigmas, chess_prefix);
    if (sin_cmd->parsed())
      return run_synth_sinusoid(sin_w, sin_h, sin_wavelength, sin_contrast, sin_h_path, sin_prefix);
    if (eval_cmd->parsed())
      return run_eval(eval_a, eval_b, eval_h, eval_opts, eval_tol, eval_disk, eval_format,
                      eval_out, eval_mask, eval_kps_a, eval_kps_b);
    if (bench_cmd->parsed())
      return run_bench(bench_inputs, bench_opts, bench_repeat, bench_out);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  } catch (const saddle::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const saddle::ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
