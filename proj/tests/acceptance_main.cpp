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
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any fails. Criterion 8 drives the real CLI
// binary (path in $SR360_CLI, default tools/sr360 relative to the working
// directory).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sr360/sr360.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "support/testutil.hpp"

namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

fs::path work_dir() { return fs::path("acceptance_work"); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const fs::path& corpus_dir() {
  static const fs::path dir = [] {
    const fs::path d = work_dir() / "corpus";
    fs::create_directories(d);
    for (int i = 0; i < 20; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "pano%02d.png", i);
      const fs::path file = d / name;
      if (!fs::exists(file)) {
        sr360::save_image(testutil::synthetic_panorama(
                              1440, 960, 1000 + static_cast<unsigned>(i)),
                          file, 8);
      }
    }
    return d;
  }();
  return dir;
}

// 1. Weight-map correctness.
void criterion_weights(Check& check) {
  const sr360::WeightMap four = sr360::row_weights(4);
  const double expected[4] = {0.3826834, 0.9238795, 0.9238795, 0.3826834};
  for (int y = 0; y < 4; ++y) {
    check.expect(std::abs(four[y] - expected[y]) < 1e-6,
                 "row_weights(4)[" + std::to_string(y) + "] = " +
                     fmt(four[y]));
  }
  for (int n = 1; n <= 1024; ++n) {
    const sr360::WeightMap wm = sr360::row_weights(n);
    for (int y = 0; y < n; ++y) {
      if (!(wm[y] > 0.0) || wm[y] != wm[n - 1 - y]) {
        check.fail("symmetry/positivity violated at N=" + std::to_string(n));
        return;
      }
    }
  }
  const int n = 4096;
  const double riemann = (sr360::kPi / n) * sr360::row_weights(n).row_sum();
  check.expect(std::abs(riemann - 2.0) < 1e-4,
               "Riemann sum at N=4096: " + fmt(riemann));
}

// 2. Oracle equivalence of the four metrics.
void criterion_oracles(Check& check) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const sr360::ErpImage a =
        testutil::random_image(32, 64, 1, 9000 + seed);
    const sr360::ErpImage b =
        testutil::random_image(32, 64, 1, 9100 + seed);
    const sr360::WeightMap weights = sr360::row_weights(64);

    const double want_psnr = oracle::psnr_db(a, b);
    const double got_psnr = sr360::psnr(a, b, 1.0).value;
    check.expect(std::abs(got_psnr - want_psnr) < 1e-9,
                 "psnr mismatch " + fmt(got_psnr - want_psnr));

    const double want_ws_psnr = oracle::ws_psnr_db(a, b, weights);
    const double got_ws_psnr = sr360::ws_psnr(a, b, weights, 1.0).value;
    check.expect(std::abs(got_ws_psnr - want_ws_psnr) < 1e-9,
                 "ws_psnr mismatch " + fmt(got_ws_psnr - want_ws_psnr));

    const sr360::Field oracle_map = oracle::ssim_map(a, b);
    const double want_ssim = oracle::mean(oracle_map);
    const double got_ssim = sr360::ssim(a, b);
    check.expect(std::abs(got_ssim - want_ssim) < 1e-9,
                 "ssim mismatch " + fmt(got_ssim - want_ssim));

    const double want_ws = oracle::weighted_mean(oracle_map, weights);
    const double got_ws = sr360::ws_ssim(a, b, {}, weights);
    check.expect(std::abs(got_ws - want_ws) < 1e-9,
                 "ws_ssim mismatch " + fmt(got_ws - want_ws));
  }
}

// 3. Uniform-weight reduction identities.
void criterion_reductions(Check& check) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const sr360::ErpImage a =
        testutil::random_image(24, 12, 1, 9200 + seed);
    const sr360::ErpImage b =
        testutil::random_image(24, 12, 1, 9300 + seed);
    const sr360::WeightMap uniform(std::vector<double>(12, 1.0));
    const double psnr = sr360::psnr(a, b, 1.0).value;
    const double ws_psnr = sr360::ws_psnr(a, b, uniform, 1.0).value;
    check.expect(std::abs(ws_psnr - psnr) < 1e-12,
                 "ws_psnr != psnr: " + fmt(ws_psnr - psnr));
    const double ssim = sr360::ssim(a, b);
    const double ws_ssim = sr360::ws_ssim(a, b, {}, uniform);
    check.expect(std::abs(ws_ssim - ssim) < 1e-12,
                 "ws_ssim != ssim: " + fmt(ws_ssim - ssim));
  }
}

// 4. Analytic gradient versus central finite differences, every pixel.
void criterion_gradient(Check& check) {
  const sr360::SsimParams params;
  const double step = 1e-5;
  const double floor = 1e-8;
  double max_rel = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const sr360::ErpImage ref =
        testutil::random_image(16, 32, 1, 9400 + seed, 0.05, 0.95);
    const sr360::ErpImage dist =
        testutil::perturbed_image(ref, 0.08, 9500 + seed, 0.02, 0.98);
    const sr360::WeightMap weights = sr360::row_weights(32);
    const sr360::Field grad =
        sr360::grad_360ss(ref, dist, params, weights);

    std::vector<double> moved(dist.samples().begin(),
                              dist.samples().end());
    for (std::size_t i = 0; i < moved.size(); ++i) {
      const double original = moved[i];
      moved[i] = original + step;
      const double up = 1.0 - sr360::ws_ssim(
          ref, sr360::ErpImage(16, 32, 1, moved), params, weights);
      moved[i] = original - step;
      const double down = 1.0 - sr360::ws_ssim(
          ref, sr360::ErpImage(16, 32, 1, moved), params, weights);
      moved[i] = original;
      const double fd = (up - down) / (2.0 * step);
      const double got = grad.values[i];
      const double denom = std::max({std::abs(fd), std::abs(got), floor});
      max_rel = std::max(max_rel, std::abs(got - fd) / denom);
    }
  }
  check.expect(max_rel < 1e-3, "max relative error " + fmt(max_rel));
}

// 5. Bit-identical metrics under a simultaneous W/4 column shift.
void criterion_shift(Check& check) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const sr360::ErpImage a =
        testutil::random_image(32, 16, 1, 9600 + seed);
    const sr360::ErpImage b =
        testutil::random_image(32, 16, 1, 9700 + seed);
    const sr360::ErpImage sa = sr360::shift_columns(a, 8);
    const sr360::ErpImage sb = sr360::shift_columns(b, 8);
    const sr360::WeightMap weights = sr360::row_weights(16);
    check.expect(
        sr360::psnr(a, b, 1.0).value == sr360::psnr(sa, sb, 1.0).value,
        "psnr changed under shift");
    check.expect(sr360::ws_psnr(a, b, weights, 1.0).value ==
                     sr360::ws_psnr(sa, sb, weights, 1.0).value,
                 "ws_psnr changed under shift");
    check.expect(sr360::ssim(a, b) == sr360::ssim(sa, sb),
                 "ssim changed under shift");
    check.expect(sr360::ws_ssim(a, b, {}, weights) ==
                     sr360::ws_ssim(sa, sb, {}, weights),
                 "ws_ssim changed under shift");
  }
}

// 6. Directional reproduction: bicubic >= NN on all metrics, r in {2,4,8}.
void criterion_direction(Check& check) {
  const sr360::Manifest manifest = sr360::scan_dataset(corpus_dir());
  check.expect(manifest.entries.size() >= 20, "corpus too small");
  for (int factor : {2, 4, 8}) {
    sr360::HarnessOptions nn;
    nn.factor = factor;
    nn.method = sr360::MethodSpec::from_name("nn");
    nn.jobs = 4;
    sr360::HarnessOptions bc = nn;
    bc.method = sr360::MethodSpec::from_name("bicubic");
    const sr360::HarnessResult rn = sr360::run_benchmark(manifest, nn);
    const sr360::HarnessResult rb = sr360::run_benchmark(manifest, bc);
    check.expect(rn.complete && rb.complete, "incomplete benchmark run");
    const sr360::ReportAggregates an = rn.report.aggregates();
    const sr360::ReportAggregates ab = rb.report.aggregates();
    const std::string at = " at r=" + std::to_string(factor);
    check.expect(ab.psnr_mean.value >= an.psnr_mean.value,
                 "PSNR " + fmt(ab.psnr_mean.value) + " < " +
                     fmt(an.psnr_mean.value) + at);
    check.expect(ab.ssim_mean >= an.ssim_mean,
                 "SSIM " + fmt(ab.ssim_mean) + " < " + fmt(an.ssim_mean) +
                     at);
    check.expect(ab.ws_psnr_mean.value >= an.ws_psnr_mean.value,
                 "WS-PSNR " + fmt(ab.ws_psnr_mean.value) + " < " +
                     fmt(an.ws_psnr_mean.value) + at);
    check.expect(ab.ws_ssim_mean >= an.ws_ssim_mean,
                 "WS-SSIM " + fmt(ab.ws_ssim_mean) + " < " +
                     fmt(an.ws_ssim_mean) + at);
  }
}

// 7. Objective arithmetic.
void criterion_objective(Check& check) {
  const sr360::LossWeights w{10.0, 10.0};
  check.expect(std::abs(sr360::total_objective(1.0, 0.0, 0.0, w) - 1.0) <
                   1e-12,
               "case (1,0,0)");
  check.expect(std::abs(sr360::total_objective(0.0, 1.0, 1.0, w) - 20.0) <
                   1e-12,
               "case (0,1,1)");
  check.expect(std::abs(sr360::total_objective(0.1, 0.2, 0.3, w) - 5.1) <
                   1e-12,
               "case (0.1,0.2,0.3)");
  check.expect(sr360::adversarial_loss(sr360::ProbBatch({1.0})) == 0.0,
               "adversarial_loss({1})");
  check.expect(std::abs(sr360::adversarial_loss(sr360::ProbBatch(
                   {std::exp(-1.0)})) -
                        1.0) < 1e-12,
               "adversarial_loss({e^-1})");
}

// 8. Byte-identical CSV from the CLI across worker counts.
void criterion_determinism(Check& check) {
  const char* env = std::getenv("SR360_CLI");
  const fs::path cli = env ? fs::path(env) : fs::path("tools/sr360");
  if (!fs::exists(cli)) {
    check.fail("CLI binary not found at " + cli.string());
    return;
  }
  const fs::path out1 = work_dir() / "jobs1.csv";
  const fs::path out2 = work_dir() / "jobs4.csv";
  for (const auto& [jobs, out] :
       std::vector<std::pair<int, fs::path>>{{1, out1}, {4, out2}}) {
    std::ostringstream cmd;
    cmd << '"' << cli.string() << '"'
        << " evaluate --ref " << corpus_dir().string()
        << " --method bicubic --factor 4 --plane luma --jobs " << jobs
        << " --out " << out.string() << " 2>/dev/null";
    const int rc = std::system(cmd.str().c_str());
    if (rc != 0) {
      check.fail("CLI evaluate exited with status " + std::to_string(rc));
      return;
    }
  }
  check.expect(!slurp(out1).empty(), "empty CSV");
  check.expect(slurp(out1) == slurp(out2),
               "CSV differs between --jobs 1 and --jobs 4");
}

// 9. Viewport sanity.
void criterion_viewport(Check& check) {
  const sr360::ErpImage img = testutil::synthetic_panorama(128, 64, 42);
  const sr360::ViewportSpec spec{0.0, 0.0, sr360::kPi / 3.0, 9, 7};
  const sr360::ErpImage crop = sr360::render_viewport(img, spec);
  for (int c = 0; c < 3; ++c) {
    const double direct = std::clamp(
        sr360::bicubic_sample(img, 64.0, 32.0, c), 0.0, 1.0);
    check.expect(std::abs(crop.at(4, 3, c) - direct) < 1e-12,
                 "center pixel differs from the raster-center sample");
  }
  const sr360::ErpImage flat = sr360::ErpImage::constant(64, 32, 1, 0.62);
  const sr360::ErpImage flat_crop = sr360::render_viewport(flat, spec);
  for (double v : flat_crop.samples()) {
    check.expect(std::abs(v - 0.62) < 1e-12, "constant crop not constant");
  }
}

struct Criterion {
  std::string name;
  std::function<void(Check&)> run;
  double time_limit_s;  // 0 = unlimited
};

}  // namespace

int main() {
  std::error_code ec;
  fs::remove_all(work_dir(), ec);
  fs::create_directories(work_dir());

  const std::vector<Criterion> criteria = {
      {"1 weight-map correctness", criterion_weights, 1.0},
      {"2 metric oracle equivalence", criterion_oracles, 30.0},
      {"3 uniform-weight reduction identities", criterion_reductions, 0.0},
      {"4 analytic gradient vs finite differences", criterion_gradient,
       120.0},
      {"5 column-shift bit invariance", criterion_shift, 0.0},
      {"6 bicubic over NN on all metrics and factors", criterion_direction,
       300.0},
      {"7 objective arithmetic", criterion_objective, 0.0},
      {"8 CSV determinism across worker counts", criterion_determinism,
       0.0},
      {"9 viewport sanity", criterion_viewport, 0.0},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.fail(std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start)
            .count();
    if (check.ok && criterion.time_limit_s > 0.0 &&
        elapsed > criterion.time_limit_s) {
      check.fail("exceeded time limit of " + fmt(criterion.time_limit_s) +
                 "s");
    }
    char line[256];
    std::snprintf(line, sizeof(line), "[%s] %s (%.2fs)%s%s",
                  check.ok ? "PASS" : "FAIL", criterion.name.c_str(),
                  elapsed, check.ok ? "" : " -- ",
                  check.ok ? "" : check.detail.c_str());
    std::cout << line << std::endl;
    if (!check.ok) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
