// Copyright 2026 The sr360 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// sr360: spherical image quality toolbox. Subcommands cover ERP weight
// maps, the blur+decimate degradation, baseline upsampling, rectilinear
// viewport extraction, the 360-SS loss, and the benchmark harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sr360/sr360.hpp"

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double deg_to_rad(double deg) { return deg * sr360::kPi / 180.0; }

// Wraps a yaw given in degrees into [-180, 180).
double wrap_yaw_deg(double deg) {
  double y = std::fmod(deg + 180.0, 360.0);
  if (y < 0) y += 360.0;
  return y - 180.0;
}

std::pair<int, int> parse_size(const std::string& size) {
  const std::size_t x = size.find('x');
  if (x == std::string::npos) {
    throw CLI::ValidationError("--size", "expected WxH, e.g. 640x480");
  }
  return {std::stoi(size.substr(0, x)), std::stoi(size.substr(x + 1))};
}

// Files to process for commands that accept a file or a directory.
std::vector<fs::path> gather_inputs(const fs::path& in) {
  if (fs::is_directory(in)) {
    std::vector<std::string> warnings;
    const sr360::Manifest manifest = sr360::scan_dataset(in, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w
                                                    << "\n";
    std::vector<fs::path> files;
    for (const auto& entry : manifest.entries) files.push_back(entry.path);
    return files;
  }
  if (!fs::exists(in)) {
    throw sr360::IoError("no such file: " + in.string());
  }
  return {in};
}

sr360::ViewportSpec make_spec(double yaw_deg, double pitch_deg,
                              double fov_deg, int width, int height) {
  sr360::ViewportSpec spec;
  spec.yaw = deg_to_rad(wrap_yaw_deg(yaw_deg));
  spec.pitch = deg_to_rad(pitch_deg);
  spec.horizontal_fov = deg_to_rad(fov_deg);
  spec.out_width = width;
  spec.out_height = height;
  spec.validate();
  return spec;
}

std::vector<sr360::ViewportSpec> load_views(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw sr360::IoError("cannot open " + path.string());
  nlohmann::json doc;
  in >> doc;
  if (!doc.is_array() || doc.empty()) {
    throw sr360::FormatError("views file must be a nonempty JSON array");
  }
  std::vector<sr360::ViewportSpec> specs;
  for (const auto& item : doc) {
    specs.push_back(make_spec(
        item.at("yaw_deg").get<double>(), item.at("pitch_deg").get<double>(),
        item.at("fov_deg").get<double>(), item.at("width").get<int>(),
        item.at("height").get<int>()));
  }
  return specs;
}

int cmd_weights(int height, const fs::path& out) {
  const sr360::WeightMap weights = sr360::row_weights(height);
  std::ofstream file(out, std::ios::binary);
  if (!file) throw sr360::IoError("cannot write " + out.string());
  for (int y = 0; y < weights.height(); ++y) {
    file << g17(weights[y]) << "\n";
  }
  return 0;
}

int cmd_degrade(const fs::path& in, int factor,
                std::optional<double> sigma, const fs::path& out) {
  const std::vector<fs::path> files = gather_inputs(in);
  fs::create_directories(out);
  int skipped = 0;
  for (const fs::path& file : files) {
    const sr360::ImageInfo info = sr360::probe_image(file);
    if (info.width % factor != 0 || info.height % factor != 0) {
      std::cerr << "warning: skipping " << file.filename().string()
                << ": dimensions not divisible by " << factor << "\n";
      ++skipped;
      continue;
    }
    const sr360::ErpImage image = sr360::load_image(file);
    sr360::save_image(sr360::degrade(image, factor, sigma),
                      out / file.filename(), info.bit_depth);
  }
  return skipped == 0 ? 0 : 1;
}

int cmd_upsample(const fs::path& in, const std::string& method, int factor,
                 const fs::path& out) {
  const std::vector<fs::path> files = gather_inputs(in);
  fs::create_directories(out);
  for (const fs::path& file : files) {
    const sr360::ImageInfo info = sr360::probe_image(file);
    const sr360::ErpImage image = sr360::load_image(file);
    const sr360::ErpImage up = method == "nn"
                                   ? sr360::upsample_nn(image, factor)
                                   : sr360::upsample_bicubic(image, factor);
    sr360::save_image(up, out / file.filename(), info.bit_depth);
  }
  return 0;
}

int cmd_viewport(const fs::path& in, double yaw, double pitch, double fov,
                 const std::string& size, const fs::path& out) {
  const auto [w, h] = parse_size(size);
  const sr360::ImageInfo info = sr360::probe_image(in);
  const sr360::ErpImage image = sr360::load_image(in);
  const sr360::ErpImage crop =
      sr360::render_viewport(image, make_spec(yaw, pitch, fov, w, h));
  sr360::save_image(crop, out, info.bit_depth);
  return 0;
}

int cmd_loss360(const fs::path& ref_path, const fs::path& dist_path,
                const fs::path& grad_out) {
  const sr360::ErpImage ref = sr360::to_luma(sr360::load_image(ref_path));
  const sr360::ErpImage dist = sr360::to_luma(sr360::load_image(dist_path));
  const sr360::SsimParams params;
  const sr360::WeightMap weights = sr360::row_weights(ref.height());
  const double d = sr360::ws_ssim(ref, dist, params, weights);
  std::cout << "d360ss = " << g17(d) << "\n";
  std::cout << "loss360ss = " << g17(1.0 - d) << "\n";
  if (!grad_out.empty()) {
    const sr360::Field grad =
        sr360::grad_360ss(ref, dist, params, weights);
    double max_abs = 0.0;
    for (double g : grad.values) max_abs = std::max(max_abs, std::abs(g));
    const double scale = max_abs > 0.0 ? 0.5 / max_abs : 0.0;
    std::vector<double> samples(grad.values.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      samples[i] = std::clamp(0.5 + scale * grad.values[i], 0.0, 1.0);
    }
    sr360::save_image(
        sr360::ErpImage(grad.width, grad.height, 1, std::move(samples)),
        grad_out, 16);
    std::cout << "grad_scale = " << g17(max_abs) << "\n";
  }
  return 0;
}

int cmd_evaluate(const fs::path& ref_dir, const std::string& method,
                 const fs::path& external_dir, int factor,
                 const std::string& plane, const fs::path& out, int jobs) {
  std::vector<std::string> warnings;
  const sr360::Manifest manifest = sr360::scan_dataset(ref_dir, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  sr360::HarnessOptions options;
  options.factor = factor;
  options.method = sr360::MethodSpec::from_name(method, external_dir);
  options.plane = sr360::plane_from_name(plane);
  options.jobs = jobs;
  const sr360::HarnessResult result =
      sr360::run_benchmark(manifest, options);
  for (const std::string& w : result.warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  for (const std::string& e : result.errors) {
    std::cerr << "error: " << e << "\n";
  }
  if (result.report.rows.empty()) {
    std::cerr << "error: no image was scored\n";
    return 1;
  }
  sr360::emit_report(result.report, sr360::ReportFormat::kCsv, out);
  std::cerr << "scored " << result.report.rows.size() << "/"
            << manifest.entries.size() << " images -> " << out.string()
            << "\n";
  return result.complete ? 0 : 1;
}

int cmd_report(const fs::path& in, const std::string& format,
               const fs::path& out) {
  const sr360::MetricReport report = sr360::parse_report_csv(in);
  sr360::emit_report(report,
                     format == "md" ? sr360::ReportFormat::kMarkdown
                                    : sr360::ReportFormat::kCsv,
                     out);
  return 0;
}

int cmd_crops(const fs::path& in, const fs::path& views_path,
              const fs::path& out) {
  const std::vector<sr360::ViewportSpec> specs = load_views(views_path);
  const std::vector<fs::path> files = gather_inputs(in);
  std::vector<std::pair<std::string, sr360::ErpImage>> images;
  for (const fs::path& file : files) {
    images.emplace_back(file.stem().string(), sr360::load_image(file));
  }
  sr360::export_crops(images, specs, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spherical image quality toolbox"};
  app.require_subcommand(1);

  // weights
  auto* weights = app.add_subcommand("weights", "emit per-row ERP weights");
  int w_height = 0;
  fs::path w_out;
  weights->add_option("--height", w_height, "raster height")->required();
  weights->add_option("--out", w_out, "output text file")->required();

  // degrade
  auto* degrade = app.add_subcommand(
      "degrade", "Gaussian blur followed by decimation");
  fs::path d_in, d_out;
  int d_factor = 2;
  std::optional<double> d_sigma;
  degrade->add_option("--in", d_in, "input file or directory")->required();
  degrade->add_option("--factor", d_factor, "downscale factor")->required();
  degrade->add_option("--sigma", d_sigma,
                      "blur width (default factor/2)");
  degrade->add_option("--out", d_out, "output directory")->required();

  // upsample
  auto* upsample = app.add_subcommand("upsample", "baseline upscaling");
  fs::path u_in, u_out;
  std::string u_method;
  int u_factor = 2;
  upsample->add_option("--in", u_in, "input file or directory")->required();
  upsample->add_option("--method", u_method, "nn or bicubic")
      ->required()
      ->check(CLI::IsMember({"nn", "bicubic"}));
  upsample->add_option("--factor", u_factor, "upscale factor")->required();
  upsample->add_option("--out", u_out, "output directory")->required();

  // viewport
  auto* viewport = app.add_subcommand("viewport", "rectilinear crop");
  fs::path v_in, v_out;
  double v_yaw = 0.0, v_pitch = 0.0, v_fov = 90.0;
  std::string v_size;
  viewport->add_option("--in", v_in, "input ERP image")->required();
  viewport->add_option("--yaw", v_yaw, "camera yaw in degrees");
  viewport->add_option("--pitch", v_pitch, "camera pitch in degrees");
  viewport->add_option("--fov", v_fov, "horizontal field of view, degrees");
  viewport->add_option("--size", v_size, "output size WxH")->required();
  viewport->add_option("--out", v_out, "output image")->required();

  // loss360
  auto* loss = app.add_subcommand(
      "loss360", "spherically weighted structural-similarity loss");
  fs::path l_ref, l_dist, l_grad;
  loss->add_option("--ref", l_ref, "reference image")->required();
  loss->add_option("--dist", l_dist, "distorted image")->required();
  loss->add_option("--grad-out", l_grad,
                   "write the loss gradient as 16-bit PNG centered at 0.5");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "degrade, reconstruct and score a dataset");
  fs::path e_ref, e_external, e_out;
  std::string e_method, e_plane = "luma";
  int e_factor = 2, e_jobs = 0;
  evaluate->add_option("--ref", e_ref, "reference directory")->required();
  evaluate->add_option("--method", e_method, "nn, bicubic or external")
      ->required()
      ->check(CLI::IsMember({"nn", "bicubic", "external"}));
  evaluate->add_option("--external-dir", e_external,
                       "directory of external reconstructions");
  evaluate->add_option("--factor", e_factor, "super-resolution factor")
      ->required();
  evaluate->add_option("--plane", e_plane, "luma or rgb-mean")
      ->check(CLI::IsMember({"luma", "rgb-mean"}));
  evaluate->add_option("--out", e_out, "output CSV")->required();
  evaluate->add_option("--jobs", e_jobs, "worker threads (0 = auto)");

  // report
  auto* report = app.add_subcommand("report", "reformat a CSV report");
  fs::path r_in, r_out;
  std::string r_format = "md";
  report->add_option("--in", r_in, "input CSV")->required();
  report->add_option("--format", r_format, "md or csv")
      ->check(CLI::IsMember({"md", "csv"}));
  report->add_option("--out", r_out, "output file")->required();

  // crops
  auto* crops = app.add_subcommand("crops", "export rectilinear crops");
  fs::path c_in, c_views, c_out;
  crops->add_option("--in", c_in, "input file or directory")->required();
  crops->add_option("--views", c_views, "JSON list of viewports")
      ->required();
  crops->add_option("--out", c_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (weights->parsed()) return cmd_weights(w_height, w_out);
    if (degrade->parsed()) return cmd_degrade(d_in, d_factor, d_sigma, d_out);
    if (upsample->parsed()) {
      return cmd_upsample(u_in, u_method, u_factor, u_out);
    }
    if (viewport->parsed()) {
      return cmd_viewport(v_in, v_yaw, v_pitch, v_fov, v_size, v_out);
    }
    if (loss->parsed()) return cmd_loss360(l_ref, l_dist, l_grad);
    if (evaluate->parsed()) {
      return cmd_evaluate(e_ref, e_method, e_external, e_factor, e_plane,
                          e_out, e_jobs);
    }
    if (report->parsed()) return cmd_report(r_in, r_format, r_out);
    if (crops->parsed()) return cmd_crops(c_in, c_views, c_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
