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
// Benchmark harness: scan a directory of ODIs, degrade by a factor,
// reconstruct with a baseline upsampler or ingest externally produced
// results, score with PSNR/SSIM/WS-PSNR/WS-SSIM, and emit deterministic
// CSV / markdown reports plus rectilinear crops.
//
// Work is parallelized across images only; each image's math is
// sequential and results are assembled in manifest order, so reports are
// byte-identical for any worker count.

#ifndef SR360_BENCH_HPP_
#define SR360_BENCH_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "sr360/erp_geometry.hpp"
#include "sr360/image.hpp"
#include "sr360/image_io.hpp"
#include "sr360/metrics.hpp"
#include "sr360/resample.hpp"

namespace sr360 {

class EmptyDatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;
  int width = 0;
  int height = 0;
};

// Deterministic listing of a dataset directory, sorted lexicographically
// by filename.
struct Manifest {
  std::vector<ManifestEntry> entries;
};

enum class SrMethod { kNearestNeighbor, kBicubic, kExternal };

struct MethodSpec {
  SrMethod method = SrMethod::kBicubic;
  std::filesystem::path external_dir;  // used by kExternal only

  std::string name() const {
    switch (method) {
      case SrMethod::kNearestNeighbor: return "nn";
      case SrMethod::kBicubic: return "bicubic";
      case SrMethod::kExternal: return "external";
    }
    return "?";
  }

  static MethodSpec from_name(const std::string& name,
                              const std::filesystem::path& external_dir = {}) {
    if (name == "nn") return {SrMethod::kNearestNeighbor, {}};
    if (name == "bicubic") return {SrMethod::kBicubic, {}};
    if (name == "external") {
      if (external_dir.empty()) {
        throw std::invalid_argument("method 'external' needs a directory");
      }
      return {SrMethod::kExternal, external_dir};
    }
    throw std::invalid_argument("unknown method: " + name);
  }
};

enum class MetricPlane { kLuma, kRgbMean };

inline std::string plane_name(MetricPlane p) {
  return p == MetricPlane::kLuma ? "luma" : "rgb-mean";
}

inline MetricPlane plane_from_name(const std::string& name) {
  if (name == "luma") return MetricPlane::kLuma;
  if (name == "rgb-mean") return MetricPlane::kRgbMean;
  throw std::invalid_argument("unknown metric plane: " + name);
}

struct ImagePair {
  std::string id;
  ErpImage ref;
  ErpImage reconstructed;
};

struct MetricRow {
  std::string id;
  Decibels psnr_db;
  double ssim = 0.0;
  Decibels ws_psnr_db;
  double ws_ssim = 0.0;
};

struct ReportAggregates {
  Decibels psnr_mean, ws_psnr_mean;
  double ssim_mean = 0.0, ws_ssim_mean = 0.0;
  double psnr_std = 0.0, ssim_std = 0.0, ws_psnr_std = 0.0,
         ws_ssim_std = 0.0;
};

// Per-image metric rows for one (method, factor, plane) run. Aggregates
// are always derived from the rows.
struct MetricReport {
  std::string method;
  int factor = 1;
  std::string plane = "luma";
  std::vector<MetricRow> rows;

  ReportAggregates aggregates() const;
};

namespace detail_bench {

// Sample mean / standard deviation (n-1 divisor); a single value has
// deviation 0 by convention.
inline std::pair<double, double> mean_and_std(std::span<const double> v) {
  if (v.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

// Aggregate of decibel rows: the mean is infinite as soon as one row is;
// the deviation is taken over the finite rows.
inline std::pair<Decibels, double> db_mean_and_std(
    std::span<const Decibels> v) {
  std::vector<double> finite;
  finite.reserve(v.size());
  bool any_infinite = false;
  for (const Decibels& d : v) {
    if (d.is_infinite) {
      any_infinite = true;
    } else {
      finite.push_back(d.value);
    }
  }
  const auto [mean, sd] = mean_and_std(finite);
  if (any_infinite) return {Decibels::infinity(), sd};
  return {Decibels::of(mean), sd};
}

inline bool supported_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_db_csv(const Decibels& d) {
  return d.is_infinite ? "inf" : format_g17(d.value);
}

inline std::string format_pm(double mean, double sd) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f ± %.2f", mean, sd);
  return buf;
}

inline std::string format_db_pm(const Decibels& mean, double sd) {
  if (!mean.is_infinite) return format_pm(mean.value, sd);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "∞ ± %.2f", sd);
  return buf;
}

}  // namespace detail_bench

inline ReportAggregates MetricReport::aggregates() const {
  std::vector<Decibels> psnr_v, ws_psnr_v;
  std::vector<double> ssim_v, ws_ssim_v;
  psnr_v.reserve(rows.size());
  ws_psnr_v.reserve(rows.size());
  ssim_v.reserve(rows.size());
  ws_ssim_v.reserve(rows.size());
  for (const MetricRow& r : rows) {
    psnr_v.push_back(r.psnr_db);
    ws_psnr_v.push_back(r.ws_psnr_db);
    ssim_v.push_back(r.ssim);
    ws_ssim_v.push_back(r.ws_ssim);
  }
  ReportAggregates a;
  std::tie(a.psnr_mean, a.psnr_std) = detail_bench::db_mean_and_std(psnr_v);
  std::tie(a.ws_psnr_mean, a.ws_psnr_std) =
      detail_bench::db_mean_and_std(ws_psnr_v);
  std::tie(a.ssim_mean, a.ssim_std) = detail_bench::mean_and_std(ssim_v);
  std::tie(a.ws_ssim_mean, a.ws_ssim_std) =
      detail_bench::mean_and_std(ws_ssim_v);
  return a;
}

// Lists all supported images under dir in lexicographic filename order and
// probes their dimensions. Unreadable files are skipped with a warning.
inline Manifest scan_dataset(const std::filesystem::path& dir,
                             std::vector<std::string>* warnings = nullptr) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("not a readable directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() &&
        detail_bench::supported_extension(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const std::filesystem::path& a, const std::filesystem::path& b) {
              return a.filename().string() < b.filename().string();
            });

  Manifest manifest;
  std::vector<std::string> used_ids;
  for (const auto& path : files) {
    ImageInfo info;
    try {
      info = probe_image(path);
    } catch (const std::exception& e) {
      if (warnings) {
        warnings->push_back("skipping " + path.filename().string() + ": " +
                            e.what());
      }
      continue;
    }
    std::string id = path.stem().string();
    while (std::find(used_ids.begin(), used_ids.end(), id) !=
           used_ids.end()) {
      id += "_";
    }
    used_ids.push_back(id);
    manifest.entries.push_back(
        ManifestEntry{id, path, info.width, info.height});
  }
  if (manifest.entries.empty()) {
    throw EmptyDatasetError("no readable images in " + dir.string());
  }
  return manifest;
}

namespace detail_bench {

inline std::filesystem::path find_external_file(
    const std::filesystem::path& dir, const ManifestEntry& entry) {
  const std::filesystem::path same_name = dir / entry.path.filename();
  if (std::filesystem::exists(same_name)) return same_name;
  for (const char* ext : {".png", ".ppm", ".pgm"}) {
    const std::filesystem::path candidate = dir / (entry.id + ext);
    if (std::filesystem::exists(candidate)) return candidate;
  }
  throw IoError("no external result for id '" + entry.id + "' in " +
                dir.string());
}

inline ErpImage reconstruct(const ErpImage& ref, const ManifestEntry& entry,
                            int factor, const MethodSpec& method) {
  switch (method.method) {
    case SrMethod::kNearestNeighbor:
      return upsample_nn(degrade(ref, factor), factor);
    case SrMethod::kBicubic:
      return upsample_bicubic(degrade(ref, factor), factor);
    case SrMethod::kExternal: {
      ErpImage ext =
          load_image(find_external_file(method.external_dir, entry));
      if (!ext.same_shape(ref)) {
        throw FormatError("external result for '" + entry.id +
                          "' does not match the reference dimensions");
      }
      return ext;
    }
  }
  throw std::logic_error("unreachable");
}

// SSIM and WS-SSIM from one shared similarity map. Reductions follow the
// same accumulation order as the standalone metric entry points, so the
// results are identical to calling them separately.
inline std::pair<double, double> ssim_both(const ErpImage& ref,
                                           const ErpImage& dist,
                                           const SsimParams& params,
                                           const WeightMap& weights) {
  const SsimMap map = ssim_map(ref, dist, params);
  const std::vector<double> sums = detail_metrics::map_row_sums(map);
  double total = 0.0;
  for (double s : sums) total += s;
  const double plain = total / (static_cast<double>(map.width) *
                                static_cast<double>(map.height));
  const double width = map.width;
  double num = 0.0;
  double total_weight = 0.0;
  for (int y = 0; y < map.height; ++y) {
    num += weights[y] * sums[static_cast<std::size_t>(y)];
    total_weight += weights[y] * width;
  }
  return {plain, num / total_weight};
}

}  // namespace detail_bench

// Scores one (reference, reconstruction) pair with all four metrics on
// the requested plane. "luma" converts to BT.601 luma first; "rgb-mean"
// computes each metric per channel and averages the metric values.
inline MetricRow score_pair(const std::string& id, const ErpImage& ref,
                            const ErpImage& rec, MetricPlane plane,
                            const SsimParams& params = {}) {
  if (!ref.same_shape(rec)) {
    throw std::invalid_argument("score_pair: shape mismatch");
  }
  const WeightMap weights = row_weights(ref.height());
  MetricRow row;
  row.id = id;
  if (plane == MetricPlane::kLuma || ref.channels() == 1) {
    const ErpImage a = to_luma(ref);
    const ErpImage b = to_luma(rec);
    row.psnr_db = psnr(a, b, 1.0);
    row.ws_psnr_db = ws_psnr(a, b, weights, 1.0);
    std::tie(row.ssim, row.ws_ssim) =
        detail_bench::ssim_both(a, b, params, weights);
  } else {
    double psnr_sum = 0.0, ws_psnr_sum = 0.0;
    bool psnr_inf = false, ws_psnr_inf = false;
    double ssim_sum = 0.0, ws_ssim_sum = 0.0;
    for (int c = 0; c < ref.channels(); ++c) {
      const ErpImage a(ref.width(), ref.height(), 1,
                       std::move(channel_plane(ref, c).values));
      const ErpImage b(rec.width(), rec.height(), 1,
                       std::move(channel_plane(rec, c).values));
      const Decibels p = psnr(a, b, 1.0);
      const Decibels wp = ws_psnr(a, b, weights, 1.0);
      if (p.is_infinite) psnr_inf = true; else psnr_sum += p.value;
      if (wp.is_infinite) ws_psnr_inf = true; else ws_psnr_sum += wp.value;
      const auto [s, wss] = detail_bench::ssim_both(a, b, params, weights);
      ssim_sum += s;
      ws_ssim_sum += wss;
    }
    const double n = ref.channels();
    row.psnr_db =
        psnr_inf ? Decibels::infinity() : Decibels::of(psnr_sum / n);
    row.ws_psnr_db =
        ws_psnr_inf ? Decibels::infinity() : Decibels::of(ws_psnr_sum / n);
    row.ssim = ssim_sum / n;
    row.ws_ssim = ws_ssim_sum / n;
  }
  return row;
}

struct PipelineResult {
  std::vector<ImagePair> pairs;
  std::vector<std::string> warnings;  // skipped images (non-divisible dims)
  std::vector<std::string> errors;    // external/load failures
};

// Builds (reference, reconstruction) pairs for every manifest entry whose
// dimensions the factor divides. Baselines reconstruct by degrading and
// upsampling; "external" ingests one result file per manifest id.
inline PipelineResult run_pipeline(const Manifest& manifest, int factor,
                                   const MethodSpec& method) {
  if (factor < 1) {
    throw std::invalid_argument("run_pipeline: factor must be >= 1");
  }
  PipelineResult result;
  for (const ManifestEntry& entry : manifest.entries) {
    if (entry.width % factor != 0 || entry.height % factor != 0) {
      result.warnings.push_back("skipping " + entry.id +
                                ": dimensions not divisible by factor");
      continue;
    }
    try {
      ErpImage ref = load_image(entry.path);
      ErpImage rec = detail_bench::reconstruct(ref, entry, factor, method);
      result.pairs.push_back(
          ImagePair{entry.id, std::move(ref), std::move(rec)});
    } catch (const std::exception& e) {
      result.errors.push_back(entry.id + ": " + e.what());
    }
  }
  return result;
}

// Scores a pair set; rows keep the input order.
inline MetricReport evaluate(std::span<const ImagePair> pairs,
                             MetricPlane plane,
                             const std::string& method = "external",
                             int factor = 1) {
  if (pairs.empty()) {
    throw std::invalid_argument("evaluate: empty pair set");
  }
  MetricReport report;
  report.method = method;
  report.factor = factor;
  report.plane = plane_name(plane);
  report.rows.reserve(pairs.size());
  for (const ImagePair& pair : pairs) {
    report.rows.push_back(
        score_pair(pair.id, pair.ref, pair.reconstructed, plane));
  }
  return report;
}

struct HarnessOptions {
  int factor = 2;
  MethodSpec method;
  MetricPlane plane = MetricPlane::kLuma;
  int jobs = 0;  // 0 = hardware concurrency
};

struct HarnessResult {
  MetricReport report;
  std::vector<std::string> warnings;
  std::vector<std::string> errors;

  // True when every manifest entry produced a metric row.
  bool complete = false;
};

// Parallel load->degrade->reconstruct->score over the manifest. Workers
// pull entries from a shared counter and write into per-entry slots;
// whatever the worker count, rows come out in manifest order with
// bit-identical values.
inline HarnessResult run_benchmark(const Manifest& manifest,
                                   const HarnessOptions& options) {
  if (manifest.entries.empty()) {
    throw EmptyDatasetError("run_benchmark: empty manifest");
  }
  if (options.factor < 1) {
    throw std::invalid_argument("run_benchmark: factor must be >= 1");
  }
  const std::size_t n = manifest.entries.size();
  int jobs = options.jobs;
  if (jobs <= 0) {
    jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
  }
  jobs = std::min<int>(jobs, static_cast<int>(n));

  struct Slot {
    std::optional<MetricRow> row;
    std::string warning;
    std::string error;
  };
  std::vector<Slot> slots(n);
  std::atomic<std::size_t> next{0};

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) break;
      const ManifestEntry& entry = manifest.entries[i];
      Slot& slot = slots[i];
      if (entry.width % options.factor != 0 ||
          entry.height % options.factor != 0) {
        slot.warning = "skipping " + entry.id +
                       ": dimensions not divisible by factor";
        continue;
      }
      try {
        const ErpImage ref = load_image(entry.path);
        const ErpImage rec = detail_bench::reconstruct(
            ref, entry, options.factor, options.method);
        slot.row = score_pair(entry.id, ref, rec, options.plane);
      } catch (const std::exception& e) {
        slot.error = entry.id + ": " + e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs) - 1);
  for (int t = 1; t < jobs; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  HarnessResult result;
  result.report.method = options.method.name();
  result.report.factor = options.factor;
  result.report.plane = plane_name(options.plane);
  for (Slot& slot : slots) {
    if (slot.row) {
      result.report.rows.push_back(std::move(*slot.row));
    } else if (!slot.warning.empty()) {
      result.warnings.push_back(std::move(slot.warning));
    } else {
      result.errors.push_back(std::move(slot.error));
    }
  }
  result.complete = result.report.rows.size() == n;
  return result;
}

enum class ReportFormat { kCsv, kMarkdown };

// CSV: one `# key=value` metadata line, the exact header
// `id,psnr_db,ssim,ws_psnr_db,ws_ssim`, one row per image with
// 17-significant-digit values, then `mean` and `std` rows. Markdown:
// one table row of "mean ± std" per metric in SSIM / PSNR / WS-SSIM /
// WS-PSNR column order. Both are byte-stable across reruns.
inline void emit_report(const MetricReport& report, ReportFormat format,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const ReportAggregates agg = report.aggregates();
  using detail_bench::format_db_csv;
  using detail_bench::format_g17;
  if (format == ReportFormat::kCsv) {
    out << "# method=" << report.method << " factor=" << report.factor
        << " plane=" << report.plane << "\n";
    out << "id,psnr_db,ssim,ws_psnr_db,ws_ssim\n";
    for (const MetricRow& r : report.rows) {
      out << r.id << ',' << format_db_csv(r.psnr_db) << ','
          << format_g17(r.ssim) << ',' << format_db_csv(r.ws_psnr_db) << ','
          << format_g17(r.ws_ssim) << "\n";
    }
    out << "mean," << format_db_csv(agg.psnr_mean) << ','
        << format_g17(agg.ssim_mean) << ',' << format_db_csv(agg.ws_psnr_mean)
        << ',' << format_g17(agg.ws_ssim_mean) << "\n";
    out << "std," << format_g17(agg.psnr_std) << ','
        << format_g17(agg.ssim_std) << ',' << format_g17(agg.ws_psnr_std)
        << ',' << format_g17(agg.ws_ssim_std) << "\n";
  } else {
    out << "# Super-resolution quality, factor " << report.factor << "\n\n";
    out << "Metric plane: " << report.plane << "; " << report.rows.size()
        << " images; values are mean ± sample standard deviation.\n\n";
    out << "| Method | SSIM | PSNR | WS-SSIM | WS-PSNR |\n";
    out << "|--------|------|------|---------|--------|\n";
    out << "| " << report.method << " (r=" << report.factor << ") | "
        << detail_bench::format_pm(agg.ssim_mean, agg.ssim_std) << " | "
        << detail_bench::format_db_pm(agg.psnr_mean, agg.psnr_std) << " | "
        << detail_bench::format_pm(agg.ws_ssim_mean, agg.ws_ssim_std) << " | "
        << detail_bench::format_db_pm(agg.ws_psnr_mean, agg.ws_psnr_std)
        << " |\n";
  }
  if (!out) throw IoError("write failure: " + path.string());
}

// Reads back a CSV produced by emit_report. Aggregate rows are skipped;
// they are always recomputed from the per-image rows.
inline MetricReport parse_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  MetricReport report;
  std::string line;
  bool header_seen = false;
  auto parse_db = [](const std::string& s) {
    if (s == "inf") return Decibels::infinity();
    return Decibels::of(std::stod(s));
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string kv;
      while (meta >> kv) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "method") report.method = value;
        if (key == "factor") report.factor = std::stoi(value);
        if (key == "plane") report.plane = value;
      }
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      if (cells.size() != 5 || cells[0] != "id") {
        throw FormatError("unexpected CSV header in " + path.string());
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 5) {
      throw FormatError("malformed CSV row in " + path.string());
    }
    if (cells[0] == "mean" || cells[0] == "std") continue;
    MetricRow r;
    r.id = cells[0];
    r.psnr_db = parse_db(cells[1]);
    r.ssim = std::stod(cells[2]);
    r.ws_psnr_db = parse_db(cells[3]);
    r.ws_ssim = std::stod(cells[4]);
    report.rows.push_back(std::move(r));
  }
  if (!header_seen) {
    throw FormatError("missing CSV header in " + path.string());
  }
  return report;
}

// File name of a crop: "<id>_yaw<d>_pitch<d>.png" with whole degrees.
inline std::string crop_filename(const std::string& id,
                                 const ViewportSpec& spec) {
  const long yaw = std::lround(spec.yaw * 180.0 / kPi);
  const long pitch = std::lround(spec.pitch * 180.0 / kPi);
  return id + "_yaw" + std::to_string(yaw) + "_pitch" +
         std::to_string(pitch) + ".png";
}

// Writes one rectilinear PNG per (image, viewport) combination.
inline void export_crops(
    std::span<const std::pair<std::string, ErpImage>> images,
    std::span<const ViewportSpec> specs,
    const std::filesystem::path& outdir) {
  std::filesystem::create_directories(outdir);
  for (const auto& [id, image] : images) {
    for (const ViewportSpec& spec : specs) {
      const ErpImage crop = render_viewport(image, spec);
      save_image(crop, outdir / crop_filename(id, spec), 8);
    }
  }
}

}  // namespace sr360

#endif  // SR360_BENCH_HPP_
