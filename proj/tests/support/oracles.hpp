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
// Naive reference implementations used only by tests. Everything here is
// written as direct double loops over the defining formulas: no separable
// passes, no phase tables, no reduction tricks. Deliberately slow and
// deliberately independent of the library's computational paths.

#ifndef SR360_TESTS_SUPPORT_ORACLES_HPP_
#define SR360_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sr360/erp_geometry.hpp"
#include "sr360/image.hpp"
#include "sr360/metrics.hpp"

namespace oracle {

inline int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

inline int clampi(int i, int n) { return std::clamp(i, 0, n - 1); }

inline double keys_kernel(double t) {
  const double x = std::abs(t);
  if (x < 1.0) return 1.5 * x * x * x - 2.5 * x * x + 1.0;
  if (x < 2.0) return -0.5 * x * x * x + 2.5 * x * x - 4.0 * x + 2.0;
  return 0.0;
}

inline std::vector<double> gauss_taps(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k;
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k.push_back(std::exp(-(static_cast<double>(i) * i) /
                         (2.0 * sigma * sigma)));
    sum += k.back();
  }
  for (double& v : k) v /= sum;
  return k;
}

// Direct 2-D convolution with the separable Gaussian, wrap in x, clamp
// in y.
inline sr360::ErpImage blur(const sr360::ErpImage& img, double sigma) {
  const std::vector<double> k = gauss_taps(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  const int w = img.width(), h = img.height(), c = img.channels();
  std::vector<double> out(img.sample_count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int j = -radius; j <= radius; ++j) {
          for (int i = -radius; i <= radius; ++i) {
            acc += k[static_cast<std::size_t>(j + radius)] *
                   k[static_cast<std::size_t>(i + radius)] *
                   img.at(wrap(x + i, w), clampi(y + j, h), ch);
          }
        }
        out[(static_cast<std::size_t>(y) * w + x) * c + ch] =
            std::clamp(acc, 0.0, 1.0);
      }
    }
  }
  return sr360::ErpImage(w, h, c, std::move(out));
}

inline sr360::ErpImage decimate(const sr360::ErpImage& img, int r) {
  const int ow = img.width() / r, oh = img.height() / r;
  std::vector<double> out(static_cast<std::size_t>(ow) * oh *
                          img.channels());
  std::size_t idx = 0;
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      for (int ch = 0; ch < img.channels(); ++ch) {
        out[idx++] = img.at(x * r, y * r, ch);
      }
    }
  }
  return sr360::ErpImage(ow, oh, img.channels(), std::move(out));
}

// Direct per-pixel 4x4 kernel sum at source position (x+0.5)/r - 0.5,
// (y+0.5)/r - 0.5; wrap columns, clamp rows, clamp the result.
inline sr360::ErpImage upsample_bicubic(const sr360::ErpImage& img, int r) {
  const int ow = img.width() * r, oh = img.height() * r;
  std::vector<double> out(static_cast<std::size_t>(ow) * oh *
                          img.channels());
  std::size_t idx = 0;
  for (int y = 0; y < oh; ++y) {
    const double sy = (y + 0.5) / r - 0.5;
    const int by = static_cast<int>(std::floor(sy));
    for (int x = 0; x < ow; ++x) {
      const double sx = (x + 0.5) / r - 0.5;
      const int bx = static_cast<int>(std::floor(sx));
      for (int ch = 0; ch < img.channels(); ++ch) {
        double acc = 0.0;
        for (int j = -1; j <= 2; ++j) {
          for (int i = -1; i <= 2; ++i) {
            acc += keys_kernel(sy - (by + j)) * keys_kernel(sx - (bx + i)) *
                   img.at(wrap(bx + i, img.width()),
                          clampi(by + j, img.height()), ch);
          }
        }
        out[idx++] = std::clamp(acc, 0.0, 1.0);
      }
    }
  }
  return sr360::ErpImage(ow, oh, img.channels(), std::move(out));
}

// Windowed SSIM map by brute force: for every pixel, loop the full window
// and form the weighted moments directly.
inline sr360::Field ssim_map(const sr360::ErpImage& ref,
                             const sr360::ErpImage& dist,
                             const sr360::SsimParams& params = {}) {
  const int w = ref.width(), h = ref.height();
  const int radius = params.window_size / 2;
  std::vector<double> win;
  {
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
      win.push_back(std::exp(-(static_cast<double>(i) * i) /
                             (2.0 * params.window_sigma *
                              params.window_sigma)));
      sum += win.back();
    }
    for (double& v : win) v /= sum;
  }
  const double c1 = (params.k1 * params.dynamic_range) *
                    (params.k1 * params.dynamic_range);
  const double c2 = (params.k2 * params.dynamic_range) *
                    (params.k2 * params.dynamic_range);
  sr360::Field map(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (int j = -radius; j <= radius; ++j) {
        for (int i = -radius; i <= radius; ++i) {
          const double wt = win[static_cast<std::size_t>(j + radius)] *
                            win[static_cast<std::size_t>(i + radius)];
          const double a = ref.at(wrap(x + i, w), clampi(y + j, h));
          const double b = dist.at(wrap(x + i, w), clampi(y + j, h));
          mx += wt * a;
          my += wt * b;
          sxx += wt * a * a;
          syy += wt * b * b;
          sxy += wt * a * b;
        }
      }
      const double vx = sxx - mx * mx;
      const double vy = syy - my * my;
      const double cov = sxy - mx * my;
      map.at(x, y) = ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return map;
}

inline double mean(const sr360::Field& f) {
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum / static_cast<double>(f.values.size());
}

// sum_{x,y} f(x,y) q(y) / sum_{x,y} q(y), plain loops.
inline double weighted_mean(const sr360::Field& f,
                            const sr360::WeightMap& weights) {
  double num = 0.0, den = 0.0;
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      num += f.at(x, y) * weights[y];
      den += weights[y];
    }
  }
  return num / den;
}

// Plain-loop (W)MSE and PSNR; +infinity for identical inputs.
inline double mse(const sr360::ErpImage& a, const sr360::ErpImage& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.sample_count(); ++i) {
    const double d = a.samples()[i] - b.samples()[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.sample_count());
}

inline double psnr_db(const sr360::ErpImage& a, const sr360::ErpImage& b,
                      double range = 1.0) {
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(range * range / m);
}

inline double ws_psnr_db(const sr360::ErpImage& a, const sr360::ErpImage& b,
                         const sr360::WeightMap& weights,
                         double range = 1.0) {
  double num = 0.0, den = 0.0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      for (int ch = 0; ch < a.channels(); ++ch) {
        const double d = a.at(x, y, ch) - b.at(x, y, ch);
        num += weights[y] * d * d;
        den += weights[y];
      }
    }
  }
  const double wmse = num / den;
  if (wmse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(range * range / wmse);
}

}  // namespace oracle

#endif  // SR360_TESTS_SUPPORT_ORACLES_HPP_
