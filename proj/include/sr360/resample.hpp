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
// Resampling on ERP rasters: the blur+decimate degradation used to derive
// low-resolution inputs, the nearest-neighbor and bicubic upsampling
// baselines, and rectilinear viewport extraction. All border handling is
// ERP-aware: columns wrap, rows clamp.

#ifndef SR360_RESAMPLE_HPP_
#define SR360_RESAMPLE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sr360/detail/filter.hpp"
#include "sr360/erp_geometry.hpp"
#include "sr360/image.hpp"

namespace sr360 {

enum class BorderMode { kWrap, kClamp };

// Border handling on ERP rasters, fixed by the projection topology:
// longitude is periodic, latitude is not. Every resampling and windowing
// operation in this library uses exactly this policy; it is not
// configurable.
struct BorderPolicy {
  BorderMode horizontal = BorderMode::kWrap;
  BorderMode vertical = BorderMode::kClamp;
};

inline constexpr BorderPolicy kErpBorders{};

// Keys cubic interpolation kernel with a = -0.5.
inline double keys_cubic(double t) {
  constexpr double a = -0.5;
  const double x = std::abs(t);
  if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return (((x - 5.0) * x + 8.0) * x - 4.0) * a;
  return 0.0;
}

namespace detail {

inline std::vector<Field> split_planes(const ErpImage& image) {
  std::vector<Field> planes;
  planes.reserve(static_cast<std::size_t>(image.channels()));
  for (int c = 0; c < image.channels(); ++c) {
    planes.push_back(channel_plane(image, c));
  }
  return planes;
}

inline ErpImage merge_planes(const std::vector<Field>& planes) {
  const int w = planes[0].width;
  const int h = planes[0].height;
  const int c = static_cast<int>(planes.size());
  std::vector<double> samples(static_cast<std::size_t>(w) * h * c);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        samples[(static_cast<std::size_t>(y) * w + x) * c + ch] =
            std::clamp(planes[static_cast<std::size_t>(ch)].at(x, y), 0.0,
                       1.0);
      }
    }
  }
  return ErpImage(w, h, c, std::move(samples));
}

// One bicubic tap set per output phase of an integer upscale. In source
// coordinates the output pixel center is (x + 0.5)/r - 0.5; only the
// fractional part depends on x mod r.
struct CubicPhase {
  int base = 0;  // offset of the first of four taps, relative to x / r
  std::array<double, 4> w{};
};

inline std::vector<CubicPhase> cubic_phases(int factor) {
  std::vector<CubicPhase> phases(static_cast<std::size_t>(factor));
  for (int p = 0; p < factor; ++p) {
    const double s = (p + 0.5) / factor - 0.5;
    const int base = static_cast<int>(std::floor(s)) - 1;
    CubicPhase ph;
    ph.base = base;
    for (int j = 0; j < 4; ++j) {
      ph.w[static_cast<std::size_t>(j)] = keys_cubic(s - (base + j));
    }
    phases[static_cast<std::size_t>(p)] = ph;
  }
  return phases;
}

// Both passes accumulate in deviation form around the floor-pixel tap
// (index 1 of the four), which keeps constant signals bit-exact.
inline Field upscale_rows_cubic(const Field& f, int factor,
                                const std::vector<CubicPhase>& phases) {
  Field out(f.width * factor, f.height);
  for (int y = 0; y < f.height; ++y) {
    const double* src = f.row(y);
    double* dst = out.row(y);
    for (int x = 0; x < out.width; ++x) {
      const CubicPhase& ph = phases[static_cast<std::size_t>(x % factor)];
      const int q = x / factor + ph.base;
      const double anchor = src[wrap_index(q + 1, f.width)];
      double acc = 0.0;
      for (int j = 0; j < 4; ++j) {
        acc += ph.w[static_cast<std::size_t>(j)] *
               (src[wrap_index(q + j, f.width)] - anchor);
      }
      dst[x] = anchor + acc;
    }
  }
  return out;
}

inline Field upscale_cols_cubic(const Field& f, int factor,
                                const std::vector<CubicPhase>& phases) {
  Field out(f.width, f.height * factor);
  for (int y = 0; y < out.height; ++y) {
    const CubicPhase& ph = phases[static_cast<std::size_t>(y % factor)];
    const int q = y / factor + ph.base;
    const double* rows[4];
    for (int j = 0; j < 4; ++j) {
      rows[j] = f.row(clamp_index(q + j, f.height));
    }
    double* dst = out.row(y);
    for (int x = 0; x < f.width; ++x) {
      const double anchor = rows[1][x];
      dst[x] = anchor + (ph.w[0] * (rows[0][x] - anchor) +
                         ph.w[1] * (rows[1][x] - anchor) +
                         ph.w[2] * (rows[2][x] - anchor) +
                         ph.w[3] * (rows[3][x] - anchor));
    }
  }
  return out;
}

}  // namespace detail

// Separable Gaussian blur, kernel radius ceil(3*sigma), taps normalized to
// sum 1. Columns wrap, rows clamp.
inline ErpImage gaussian_blur(const ErpImage& image, double sigma) {
  const std::vector<double> taps = detail::gaussian_taps(sigma);
  std::vector<Field> planes = detail::split_planes(image);
  for (Field& p : planes) {
    p = detail::separable_filter(p, taps);
  }
  return detail::merge_planes(planes);
}

// Keeps every r-th sample: output (x, y) = input (r*x, r*y).
inline ErpImage decimate(const ErpImage& image, int factor) {
  if (factor < 1) {
    throw std::invalid_argument("decimate: factor must be >= 1");
  }
  if (image.width() % factor != 0 || image.height() % factor != 0) {
    throw std::invalid_argument("decimate: factor must divide both "
                                "dimensions");
  }
  if (factor == 1) return image;
  const int ow = image.width() / factor;
  const int oh = image.height() / factor;
  const int c = image.channels();
  std::vector<double> samples(static_cast<std::size_t>(ow) * oh * c);
  std::size_t idx = 0;
  for (int y = 0; y < oh; ++y) {
    const double* src = image.row(y * factor);
    for (int x = 0; x < ow; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        samples[idx++] = src[static_cast<std::size_t>(x) * factor * c + ch];
      }
    }
  }
  return ErpImage(ow, oh, c, std::move(samples));
}

// Anti-aliased downscale: Gaussian blur followed by decimation. At factor
// 1 the image passes through untouched. The default blur width is
// sigma = factor/2.
inline ErpImage degrade(const ErpImage& image, int factor,
                        std::optional<double> sigma = std::nullopt) {
  if (factor < 1) {
    throw std::invalid_argument("degrade: factor must be >= 1");
  }
  if (image.width() % factor != 0 || image.height() % factor != 0) {
    throw std::invalid_argument("degrade: factor must divide both "
                                "dimensions");
  }
  if (factor == 1) return image;
  const double s = sigma.value_or(static_cast<double>(factor) / 2.0);
  return decimate(gaussian_blur(image, s), factor);
}

// Replicates each source pixel into an r x r block.
inline ErpImage upsample_nn(const ErpImage& image, int factor) {
  if (factor < 1) {
    throw std::invalid_argument("upsample_nn: factor must be >= 1");
  }
  if (factor == 1) return image;
  const int ow = image.width() * factor;
  const int oh = image.height() * factor;
  const int c = image.channels();
  std::vector<double> samples(static_cast<std::size_t>(ow) * oh * c);
  for (int y = 0; y < oh; ++y) {
    const double* src = image.row(y / factor);
    double* dst = samples.data() + static_cast<std::size_t>(y) * ow * c;
    for (int x = 0; x < ow; ++x) {
      const double* sp = src + static_cast<std::size_t>(x / factor) * c;
      for (int ch = 0; ch < c; ++ch) {
        dst[static_cast<std::size_t>(x) * c + ch] = sp[ch];
      }
    }
  }
  return ErpImage(ow, oh, c, std::move(samples));
}

// Separable Keys bicubic upscale. Output pixel centers sit at
// (x + 0.5)/r - 0.5 in source coordinates; columns wrap, rows clamp, and
// the result is clamped back to [0,1] (the kernel overshoots).
inline ErpImage upsample_bicubic(const ErpImage& image, int factor) {
  if (factor < 1) {
    throw std::invalid_argument("upsample_bicubic: factor must be >= 1");
  }
  if (factor == 1) return image;
  const std::vector<detail::CubicPhase> phases = detail::cubic_phases(factor);
  std::vector<Field> planes = detail::split_planes(image);
  for (Field& p : planes) {
    p = detail::upscale_rows_cubic(p, factor, phases);
    p = detail::upscale_cols_cubic(p, factor, phases);
  }
  return detail::merge_planes(planes);
}

// Bicubic point sample at continuous raster coordinates (pixel centers at
// integer + 0.5), channel c. Columns wrap, rows clamp; no range clamp.
// Deviation form around the floor pixel keeps constant inputs bit-exact.
inline double bicubic_sample(const ErpImage& image, double u, double v,
                             int c) {
  const double sx = u - 0.5;
  const double sy = v - 0.5;
  const int bx = static_cast<int>(std::floor(sx));
  const int by = static_cast<int>(std::floor(sy));
  const double fx = sx - bx;
  const double fy = sy - by;
  double wx[4], wy[4];
  for (int j = 0; j < 4; ++j) {
    wx[j] = keys_cubic(fx - (j - 1));
    wy[j] = keys_cubic(fy - (j - 1));
  }
  const double anchor =
      image.at(detail::wrap_index(bx, image.width()),
               detail::clamp_index(by, image.height()), c);
  double acc = 0.0;
  for (int j = 0; j < 4; ++j) {
    const int yy = detail::clamp_index(by + j - 1, image.height());
    double rowacc = 0.0;
    for (int i = 0; i < 4; ++i) {
      const int xx = detail::wrap_index(bx + i - 1, image.width());
      rowacc += wx[i] * (image.at(xx, yy, c) - anchor);
    }
    acc += wy[j] * rowacc;
  }
  return anchor + acc;
}

// Renders a rectilinear crop by sampling the ERP raster bicubically along
// the gnomonic grid. The result is a planar image; ERP column wrapping no
// longer applies to it.
inline ErpImage render_viewport(const ErpImage& image,
                                const ViewportSpec& spec) {
  const SampleGrid grid =
      viewport_sample_grid(spec, image.width(), image.height());
  const int c = image.channels();
  std::vector<double> samples(static_cast<std::size_t>(grid.width) *
                              grid.height * c);
  std::size_t idx = 0;
  for (std::size_t p = 0; p < grid.u.size(); ++p) {
    for (int ch = 0; ch < c; ++ch) {
      samples[idx++] =
          std::clamp(bicubic_sample(image, grid.u[p], grid.v[p], ch), 0.0,
                     1.0);
    }
  }
  return ErpImage(grid.width, grid.height, c, std::move(samples));
}

}  // namespace sr360

#endif  // SR360_RESAMPLE_HPP_
