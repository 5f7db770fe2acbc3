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
// Full-reference quality metrics for ERP rasters: PSNR and SSIM plus
// their spherically weighted forms WS-PSNR and WS-SSIM, which scale each
// pixel's contribution by the per-row area weight of the projection.
//
// One SSIM engine backs both SSIM variants: Gaussian-window local moments
// with wrapped columns and clamped rows, so the similarity map covers the
// full raster. All reductions accumulate each row in ascending value
// order; together with offset-ordered window gathers this makes every
// metric bit-identical under a simultaneous circular column shift of both
// inputs.

#ifndef SR360_METRICS_HPP_
#define SR360_METRICS_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sr360/detail/filter.hpp"
#include "sr360/erp_geometry.hpp"
#include "sr360/image.hpp"

namespace sr360 {

// Stabilizer constants, window shape and dynamic range shared by all
// SSIM-family computations. Defaults follow the original SSIM definition.
struct SsimParams {
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
  int window_size = 11;
  double window_sigma = 1.5;

  double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }

  void validate() const {
    if (!(k1 > 0.0) || !(k2 > 0.0) || !(dynamic_range > 0.0)) {
      throw std::invalid_argument("SsimParams: k1, k2 and range must be "
                                  "positive");
    }
    if (window_size < 1 || window_size % 2 == 0 || !(window_sigma > 0.0)) {
      throw std::invalid_argument("SsimParams: window must be odd-sized "
                                  "with positive sigma");
    }
  }
};

// Per-pixel local SSIM values in [-1, 1], full raster extent.
struct SsimMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  const double* row(int y) const {
    return values.data() + static_cast<std::size_t>(y) * width;
  }
};

// A decibel score, or the degenerate zero-error case which has no finite
// value. Reports print the latter as infinity.
struct Decibels {
  bool is_infinite = false;
  double value = 0.0;

  static Decibels infinity() { return Decibels{true, 0.0}; }
  static Decibels of(double v) { return Decibels{false, v}; }
};

namespace detail_metrics {

inline void require_same_shape(const ErpImage& a, const ErpImage& b,
                               const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

// Row sums of squared differences (all channels), each row accumulated in
// ascending order.
inline std::vector<double> squared_diff_row_sums(const ErpImage& ref,
                                                 const ErpImage& dist) {
  const std::size_t rowlen =
      static_cast<std::size_t>(ref.width()) * ref.channels();
  std::vector<double> scratch(rowlen);
  std::vector<double> sums(static_cast<std::size_t>(ref.height()));
  for (int y = 0; y < ref.height(); ++y) {
    const double* a = ref.row(y);
    const double* b = dist.row(y);
    for (std::size_t i = 0; i < rowlen; ++i) {
      const double d = a[i] - b[i];
      scratch[i] = d * d;
    }
    sums[static_cast<std::size_t>(y)] = detail::ascending_sum(scratch);
  }
  return sums;
}

inline std::vector<double> map_row_sums(const SsimMap& map) {
  std::vector<double> scratch(static_cast<std::size_t>(map.width));
  std::vector<double> sums(static_cast<std::size_t>(map.height));
  for (int y = 0; y < map.height; ++y) {
    const double* r = map.row(y);
    scratch.assign(r, r + map.width);
    sums[static_cast<std::size_t>(y)] = detail::ascending_sum(scratch);
  }
  return sums;
}

inline Decibels db_from_mse(double mse, double range) {
  if (mse == 0.0) return Decibels::infinity();
  return Decibels::of(10.0 * std::log10(range * range / mse));
}

}  // namespace detail_metrics

// Peak signal-to-noise ratio over all samples. Identical inputs have zero
// error power and yield the infinite score.
inline Decibels psnr(const ErpImage& ref, const ErpImage& dist,
                     double range = 1.0) {
  detail_metrics::require_same_shape(ref, dist, "psnr");
  if (!(range > 0.0)) {
    throw std::invalid_argument("psnr: range must be positive");
  }
  const std::vector<double> sums =
      detail_metrics::squared_diff_row_sums(ref, dist);
  double total = 0.0;
  for (double s : sums) total += s;
  const double mse = total / static_cast<double>(ref.sample_count());
  return detail_metrics::db_from_mse(mse, range);
}

// Spherically weighted PSNR: each squared difference is scaled by its
// row's area weight and the mean is taken against the total weight.
inline Decibels ws_psnr(const ErpImage& ref, const ErpImage& dist,
                        const WeightMap& weights, double range = 1.0) {
  detail_metrics::require_same_shape(ref, dist, "ws_psnr");
  if (weights.height() != ref.height()) {
    throw std::invalid_argument("ws_psnr: weight map height mismatch");
  }
  if (!(range > 0.0)) {
    throw std::invalid_argument("ws_psnr: range must be positive");
  }
  const std::vector<double> sums =
      detail_metrics::squared_diff_row_sums(ref, dist);
  const double width = ref.width();
  double num = 0.0;
  double total_weight = 0.0;
  for (int y = 0; y < ref.height(); ++y) {
    num += weights[y] * sums[static_cast<std::size_t>(y)];
    total_weight += weights[y] * width;
  }
  const double wmse =
      num / (total_weight * static_cast<double>(ref.channels()));
  return detail_metrics::db_from_mse(wmse, range);
}

// Local SSIM map over Gaussian-window moments:
//   ((2 mx my + C1)(2 sxy + C2)) / ((mx^2 + my^2 + C1)(sx^2 + sy^2 + C2)).
// Inputs must be single-channel (luma).
inline SsimMap ssim_map(const ErpImage& ref, const ErpImage& dist,
                        const SsimParams& params = {}) {
  detail_metrics::require_same_shape(ref, dist, "ssim_map");
  if (ref.channels() != 1) {
    throw std::invalid_argument("ssim_map: inputs must be single-channel");
  }
  params.validate();
  const std::vector<double> taps =
      detail::gaussian_window_taps(params.window_size, params.window_sigma);

  const Field x = channel_plane(ref, 0);
  const Field y = channel_plane(dist, 0);
  const int w = x.width;
  const int h = x.height;
  Field xx(w, h), yy(w, h), xy(w, h);
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    xx.values[i] = x.values[i] * x.values[i];
    yy.values[i] = y.values[i] * y.values[i];
    xy.values[i] = x.values[i] * y.values[i];
  }
  const Field mu_x = detail::separable_filter(x, taps);
  const Field mu_y = detail::separable_filter(y, taps);
  const Field sxx = detail::separable_filter(xx, taps);
  const Field syy = detail::separable_filter(yy, taps);
  const Field sxy = detail::separable_filter(xy, taps);

  const double c1 = params.c1();
  const double c2 = params.c2();
  SsimMap map;
  map.width = w;
  map.height = h;
  map.values.resize(x.values.size());
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const double mx = mu_x.values[i];
    const double my = mu_y.values[i];
    const double var_x = sxx.values[i] - mx * mx;
    const double var_y = syy.values[i] - my * my;
    const double cov = sxy.values[i] - mx * my;
    const double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
    const double den = (mx * mx + my * my + c1) * (var_x + var_y + c2);
    map.values[i] = std::clamp(num / den, -1.0, 1.0);
  }
  return map;
}

// Unweighted mean of the SSIM map.
inline double ssim(const ErpImage& ref, const ErpImage& dist,
                   const SsimParams& params = {}) {
  const SsimMap map = ssim_map(ref, dist, params);
  const std::vector<double> sums = detail_metrics::map_row_sums(map);
  double total = 0.0;
  for (double s : sums) total += s;
  return total / (static_cast<double>(map.width) *
                  static_cast<double>(map.height));
}

// Spherically weighted mean of the SSIM map:
//   sum_{x,y} SSIM(x,y) q(y) / (W * sum_y q(y)).
inline double ws_ssim(const ErpImage& ref, const ErpImage& dist,
                      const SsimParams& params, const WeightMap& weights) {
  if (weights.height() != ref.height()) {
    throw std::invalid_argument("ws_ssim: weight map height mismatch");
  }
  const SsimMap map = ssim_map(ref, dist, params);
  const std::vector<double> sums = detail_metrics::map_row_sums(map);
  // The total weight accumulates as sum_y q(y)*W alongside the numerator,
  // so a map of exact ones reduces to exactly 1.
  const double width = map.width;
  double num = 0.0;
  double total_weight = 0.0;
  for (int y = 0; y < map.height; ++y) {
    num += weights[y] * sums[static_cast<std::size_t>(y)];
    total_weight += weights[y] * width;
  }
  return num / total_weight;
}

}  // namespace sr360

#endif  // SR360_METRICS_HPP_
