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
// Spherical geometry of the equirectangular projection: per-row area
// weights, the pixel <-> direction mapping, and rectilinear (gnomonic)
// viewport sample grids.
//
// Conventions used throughout:
//   - pixel centers sit at integer + 0.5 in continuous raster coordinates;
//   - longitude in [-pi, pi] increases with the column index, latitude in
//     [-pi/2, pi/2] decreases with the row index (row 0 touches the north
//     pole);
//   - the raster center maps to the forward direction (0, 0).

#ifndef SR360_ERP_GEOMETRY_HPP_
#define SR360_ERP_GEOMETRY_HPP_

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sr360 {

inline constexpr double kPi = std::numbers::pi;

// Per-row spherical area weights of an ERP raster. The stretching ratio of
// the projection depends only on latitude, so one value per row suffices;
// it is constant across columns.
class WeightMap {
 public:
  explicit WeightMap(std::vector<double> weights)
      : weights_(std::move(weights)) {
    const std::size_t n = weights_.size();
    if (n == 0) {
      throw std::invalid_argument("WeightMap: empty weight vector");
    }
    for (std::size_t y = 0; y < n; ++y) {
      const double w = weights_[y];
      if (!(w > 0.0) || !(w <= 1.0)) {
        throw std::invalid_argument("WeightMap: weights must lie in (0, 1]");
      }
      if (weights_[y] != weights_[n - 1 - y]) {
        throw std::invalid_argument("WeightMap: weights must be symmetric "
                                    "about the equator");
      }
    }
    for (std::size_t y = 0; y + 1 < n / 2 + (n % 2); ++y) {
      if (weights_[y] > weights_[y + 1]) {
        throw std::invalid_argument("WeightMap: weights must be unimodal");
      }
    }
  }

  int height() const { return static_cast<int>(weights_.size()); }
  std::span<const double> weights() const { return weights_; }
  double operator[](int y) const { return weights_[y]; }

  // Sum over rows, accumulated in row order.
  double row_sum() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  // Total weight of a W-column raster: every column carries the same
  // per-row weight.
  double total_for_width(int width) const {
    return static_cast<double>(width) * row_sum();
  }

 private:
  std::vector<double> weights_;
};

// Area weight per row for a raster of `height` rows:
//   q(y) = cos((y + 0.5 - height/2) * pi / height).
// The weight peaks at the equator and vanishes toward the poles. The lower
// half is mirrored from the upper half so the equator symmetry is exact.
inline WeightMap row_weights(int height) {
  if (height < 1) {
    throw std::invalid_argument("row_weights: height must be >= 1");
  }
  std::vector<double> w(static_cast<std::size_t>(height));
  const double half = static_cast<double>(height) / 2.0;
  const double scale = kPi / static_cast<double>(height);
  for (int y = 0; y < (height + 1) / 2; ++y) {
    const double v = std::cos((static_cast<double>(y) + 0.5 - half) * scale);
    w[static_cast<std::size_t>(y)] = v;
    w[static_cast<std::size_t>(height - 1 - y)] = v;
  }
  return WeightMap(std::move(w));
}

struct LonLat {
  double longitude = 0.0;  // radians in [-pi, pi]
  double latitude = 0.0;   // radians in [-pi/2, pi/2]
};

// Continuous raster position (u, v) to direction on the sphere.
// u in [0, W], v in [0, H]; pixel centers at integer + 0.5.
inline LonLat pixel_to_direction(double u, double v, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("pixel_to_direction: bad raster size");
  }
  if (!(u >= 0.0 && u <= static_cast<double>(width)) ||
      !(v >= 0.0 && v <= static_cast<double>(height))) {
    throw std::invalid_argument("pixel_to_direction: coordinates out of "
                                "range");
  }
  return LonLat{(u / width) * 2.0 * kPi - kPi, kPi / 2.0 - (v / height) * kPi};
}

// Inverse of pixel_to_direction. Longitude outside [-pi, pi] is accepted
// and wraps into [0, W).
inline std::pair<double, double> direction_to_pixel(const LonLat& dir,
                                                    int width, int height) {
  double u = (dir.longitude + kPi) / (2.0 * kPi) * width;
  const double v = (kPi / 2.0 - dir.latitude) / kPi * height;
  u = std::fmod(u, static_cast<double>(width));
  if (u < 0.0) u += width;
  return {u, v};
}

// Rectilinear crop description: camera orientation, horizontal field of
// view, and output raster size. The vertical field of view follows from
// the output aspect ratio (the tangent-plane half-height equals the
// half-width scaled by height/width).
struct ViewportSpec {
  double yaw = 0.0;             // radians in [-pi, pi)
  double pitch = 0.0;           // radians in [-pi/2, pi/2]
  double horizontal_fov = 0.0;  // radians in (0, pi)
  int out_width = 0;
  int out_height = 0;

  void validate() const {
    if (!(yaw >= -kPi && yaw < kPi)) {
      throw std::invalid_argument("ViewportSpec: yaw outside [-pi, pi)");
    }
    if (!(pitch >= -kPi / 2.0 && pitch <= kPi / 2.0)) {
      throw std::invalid_argument("ViewportSpec: pitch outside [-pi/2, pi/2]");
    }
    if (!(horizontal_fov > 0.0 && horizontal_fov < kPi)) {
      throw std::invalid_argument("ViewportSpec: fov outside (0, pi)");
    }
    if (out_width <= 0 || out_height <= 0) {
      throw std::invalid_argument("ViewportSpec: output size must be "
                                  "positive");
    }
  }
};

// Continuous ERP source coordinates for each viewport pixel.
struct SampleGrid {
  int width = 0;
  int height = 0;
  std::vector<double> u;  // row-major, size width*height
  std::vector<double> v;
};

// Gnomonic projection grid: each output pixel's ray is built on the
// tangent plane at (yaw, pitch), rotated into the world frame, converted
// to (longitude, latitude) and mapped back to raster coordinates of a
// W x H ERP image. Source u wraps modulo W.
inline SampleGrid viewport_sample_grid(const ViewportSpec& spec, int width,
                                       int height) {
  spec.validate();
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("viewport_sample_grid: bad raster size");
  }

  const double cy = std::cos(spec.yaw), sy = std::sin(spec.yaw);
  const double cp = std::cos(spec.pitch), sp = std::sin(spec.pitch);
  // World frame: x toward (lon 0, lat 0), y toward lon pi/2, z to the
  // north pole.
  const double fwd[3] = {cp * cy, cp * sy, sp};
  const double right[3] = {-sy, cy, 0.0};
  const double up[3] = {-sp * cy, -sp * sy, cp};

  const double half_w = std::tan(spec.horizontal_fov / 2.0);
  const double half_h = half_w * static_cast<double>(spec.out_height) /
                        static_cast<double>(spec.out_width);

  SampleGrid grid;
  grid.width = spec.out_width;
  grid.height = spec.out_height;
  grid.u.resize(static_cast<std::size_t>(spec.out_width) * spec.out_height);
  grid.v.resize(grid.u.size());

  std::size_t idx = 0;
  for (int j = 0; j < spec.out_height; ++j) {
    const double ty =
        (1.0 - 2.0 * (j + 0.5) / spec.out_height) * half_h;
    for (int i = 0; i < spec.out_width; ++i, ++idx) {
      const double tx =
          (2.0 * (i + 0.5) / spec.out_width - 1.0) * half_w;
      const double dx = fwd[0] + tx * right[0] + ty * up[0];
      const double dy = fwd[1] + tx * right[1] + ty * up[1];
      const double dz = fwd[2] + tx * right[2] + ty * up[2];
      const double norm = std::sqrt(dx * dx + dy * dy + dz * dz);
      const LonLat dir{std::atan2(dy, dx), std::asin(dz / norm)};
      const auto [u, v] = direction_to_pixel(dir, width, height);
      grid.u[idx] = u;
      grid.v[idx] = v;
    }
  }
  return grid;
}

}  // namespace sr360

#endif  // SR360_ERP_GEOMETRY_HPP_
