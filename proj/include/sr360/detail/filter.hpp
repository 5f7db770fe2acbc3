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
// Separable filtering primitives shared by the resampler and the SSIM
// engine. Horizontal passes wrap (longitude is periodic), vertical passes
// clamp (latitude is not). Every pass accumulates taps in ascending offset
// order, which keeps outputs bit-identical under circular column shifts of
// the input.

#ifndef SR360_DETAIL_FILTER_HPP_
#define SR360_DETAIL_FILTER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "sr360/image.hpp"

namespace sr360::detail {

inline int wrap_index(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

inline int clamp_index(int i, int n) {
  return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

// Symmetric normalized Gaussian taps with radius ceil(3*sigma). The right
// half mirrors the left bit-exactly.
inline std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian_taps: sigma must be positive");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  for (int i = 0; i <= radius; ++i) {
    const double t = static_cast<double>(i);
    const double v = std::exp(-(t * t) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(radius + i)] = v;
    k[static_cast<std::size_t>(radius - i)] = v;
  }
  double sum = k[static_cast<std::size_t>(radius)];
  for (int i = 1; i <= radius; ++i) {
    sum += 2.0 * k[static_cast<std::size_t>(radius + i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Normalized Gaussian taps of a fixed odd size (the SSIM window).
inline std::vector<double> gaussian_window_taps(int size, double sigma) {
  if (size < 1 || size % 2 == 0) {
    throw std::invalid_argument("gaussian_window_taps: size must be odd");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian_window_taps: sigma must be "
                                "positive");
  }
  const int radius = size / 2;
  std::vector<double> k(static_cast<std::size_t>(size));
  for (int i = 0; i <= radius; ++i) {
    const double t = static_cast<double>(i);
    const double v = std::exp(-(t * t) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(radius + i)] = v;
    k[static_cast<std::size_t>(radius - i)] = v;
  }
  double sum = k[static_cast<std::size_t>(radius)];
  for (int i = 1; i <= radius; ++i) {
    sum += 2.0 * k[static_cast<std::size_t>(radius + i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

// out(x, y) = sum_i k[i] * in(wrap(x + i - radius), y).
// Accumulated in deviation form around the center sample, so a constant
// signal passes through bit-exactly even though the normalized taps sum
// to 1 only up to rounding. The interior fast path runs the identical tap
// order and arithmetic as the wrapped border path.
inline void convolve_rows_wrap(const double* in, double* out, int w, int h,
                               std::span<const double> taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  const double* k = taps.data() + radius;
  for (int y = 0; y < h; ++y) {
    const double* row = in + static_cast<std::size_t>(y) * w;
    double* orow = out + static_cast<std::size_t>(y) * w;
    const int lo = std::min(radius, w);
    const int hi = std::max(lo, w - radius);
    auto wrapped = [&](int x) {
      const double center = row[x];
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += k[i] * (row[wrap_index(x + i, w)] - center);
      }
      return center + acc;
    };
    for (int x = 0; x < lo; ++x) orow[x] = wrapped(x);
    for (int x = lo; x < hi; ++x) {
      const double center = row[x];
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += k[i] * (row[x + i] - center);
      }
      orow[x] = center + acc;
    }
    for (int x = hi; x < w; ++x) orow[x] = wrapped(x);
  }
}

// out(x, y) = sum_i k[i] * in(x, clamp(y + i - radius)), deviation form.
inline void convolve_cols_clamp(const double* in, double* out, int w, int h,
                                std::span<const double> taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  std::vector<const double*> rows(taps.size());
  for (int y = 0; y < h; ++y) {
    for (int i = -radius; i <= radius; ++i) {
      rows[static_cast<std::size_t>(i + radius)] =
          in + static_cast<std::size_t>(clamp_index(y + i, h)) * w;
    }
    const double* center_row = in + static_cast<std::size_t>(y) * w;
    double* orow = out + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const double center = center_row[x];
      double acc = 0.0;
      for (std::size_t i = 0; i < taps.size(); ++i) {
        acc += taps[i] * (rows[i][x] - center);
      }
      orow[x] = center + acc;
    }
  }
}

// Transpose of convolve_cols_clamp. Clamping folds several output rows
// onto the border rows, so the transpose is a scatter, not another
// clamped convolution.
inline void adjoint_cols_clamp(const double* in, double* out, int w, int h,
                               std::span<const double> taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  std::fill(out, out + static_cast<std::size_t>(w) * h, 0.0);
  for (int y = 0; y < h; ++y) {
    const double* grow = in + static_cast<std::size_t>(y) * w;
    for (int i = -radius; i <= radius; ++i) {
      const double kv = taps[static_cast<std::size_t>(i + radius)];
      double* orow =
          out + static_cast<std::size_t>(clamp_index(y + i, h)) * w;
      for (int x = 0; x < w; ++x) {
        orow[x] += kv * grow[x];
      }
    }
  }
}

// Separable filter: rows with wrap, then columns with clamp.
inline Field separable_filter(const Field& f, std::span<const double> taps) {
  Field mid(f.width, f.height);
  Field out(f.width, f.height);
  convolve_rows_wrap(f.values.data(), mid.values.data(), f.width, f.height,
                     taps);
  convolve_cols_clamp(mid.values.data(), out.values.data(), f.width,
                      f.height, taps);
  return out;
}

// Transpose of separable_filter. The wrap pass is self-adjoint for a
// symmetric kernel; the clamp pass needs the explicit transpose.
inline Field separable_filter_adjoint(const Field& f,
                                      std::span<const double> taps) {
  Field mid(f.width, f.height);
  Field out(f.width, f.height);
  adjoint_cols_clamp(f.values.data(), mid.values.data(), f.width, f.height,
                     taps);
  convolve_rows_wrap(mid.values.data(), out.values.data(), f.width, f.height,
                     taps);
  return out;
}

// Sums in ascending value order. The result depends only on the multiset
// of values, so circular shifts of a raster row cannot change the
// rounding. The scratch buffer is sorted in place.
inline double ascending_sum(std::vector<double>& scratch) {
  std::sort(scratch.begin(), scratch.end());
  double acc = 0.0;
  for (double v : scratch) acc += v;
  return acc;
}

}  // namespace sr360::detail

#endif  // SR360_DETAIL_FILTER_HPP_
