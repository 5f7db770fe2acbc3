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

#ifndef SR360_IMAGE_HPP_
#define SR360_IMAGE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sr360 {

// Raster image in equirectangular projection. Samples are row-major,
// channel-interleaved doubles in [0,1]; 1 channel (luma) or 3 (RGB).
// Longitude maps linearly to columns and latitude to rows, so column
// arithmetic is periodic while rows are not. Immutable after construction.
class ErpImage {
 public:
  ErpImage(int width, int height, int channels, std::vector<double> samples)
      : width_(width), height_(height), channels_(channels),
        samples_(std::move(samples)) {
    if (width_ <= 0 || height_ <= 0) {
      throw std::invalid_argument("ErpImage: dimensions must be positive");
    }
    if (channels_ != 1 && channels_ != 3) {
      throw std::invalid_argument("ErpImage: channels must be 1 or 3");
    }
    const std::size_t expected = static_cast<std::size_t>(width_) *
                                 static_cast<std::size_t>(height_) *
                                 static_cast<std::size_t>(channels_);
    if (samples_.size() != expected) {
      throw std::invalid_argument(
          "ErpImage: sample count " + std::to_string(samples_.size()) +
          " does not match " + std::to_string(expected));
    }
    for (double s : samples_) {
      if (!(s >= 0.0 && s <= 1.0)) {  // also rejects NaN
        throw std::invalid_argument("ErpImage: sample outside [0,1]");
      }
    }
  }

  static ErpImage constant(int width, int height, int channels, double value) {
    return ErpImage(width, height, channels,
                    std::vector<double>(static_cast<std::size_t>(width) *
                                            height * channels,
                                        value));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t sample_count() const { return samples_.size(); }

  double at(int x, int y, int c = 0) const {
    return samples_[index(x, y, c)];
  }

  std::span<const double> samples() const { return samples_; }

  // Pointer to the first sample of row y (width*channels values).
  const double* row(int y) const {
    return samples_.data() + static_cast<std::size_t>(y) * width_ * channels_;
  }

  bool same_shape(const ErpImage& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

 private:
  int width_;
  int height_;
  int channels_;
  std::vector<double> samples_;
};

// Single-channel scalar field without the [0,1] range restriction.
// Used for similarity maps, loss gradients and other derived quantities.
struct Field {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  Field() = default;
  Field(int w, int h, double fill = 0.0)
      : width(w), height(h),
        values(static_cast<std::size_t>(w) * h, fill) {}

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  const double* row(int y) const {
    return values.data() + static_cast<std::size_t>(y) * width;
  }
  double* row(int y) {
    return values.data() + static_cast<std::size_t>(y) * width;
  }
};

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

// BT.601 luma, Y = 0.299 R + 0.587 G + 0.114 B. Evaluated around the
// green sample so that gray pixels (R = G = B) pass through exactly even
// though the three coefficients do not sum to 1 in binary. A 1-channel
// image is returned unchanged.
inline ErpImage to_luma(const ErpImage& image) {
  if (image.channels() == 1) return image;
  std::vector<double> out(static_cast<std::size_t>(image.width()) *
                          image.height());
  const std::span<const double> src = image.samples();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double g = src[3 * i + 1];
    const double y =
        (g + kLumaR * (src[3 * i] - g)) + kLumaB * (src[3 * i + 2] - g);
    out[i] = std::clamp(y, 0.0, 1.0);
  }
  return ErpImage(image.width(), image.height(), 1, std::move(out));
}

// Extracts channel c as a Field (no range change).
inline Field channel_plane(const ErpImage& image, int c) {
  if (c < 0 || c >= image.channels()) {
    throw std::invalid_argument("channel_plane: channel out of range");
  }
  Field f(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    const double* src = image.row(y);
    double* dst = f.row(y);
    for (int x = 0; x < image.width(); ++x) {
      dst[x] = src[x * image.channels() + c];
    }
  }
  return f;
}

// Circularly rotates columns left by `shift` (a longitude rotation).
// Negative shifts rotate right.
inline ErpImage shift_columns(const ErpImage& image, int shift) {
  const int w = image.width();
  const int c = image.channels();
  int s = shift % w;
  if (s < 0) s += w;
  std::vector<double> out(image.sample_count());
  for (int y = 0; y < image.height(); ++y) {
    const double* src = image.row(y);
    double* dst = out.data() + static_cast<std::size_t>(y) * w * c;
    for (int x = 0; x < w; ++x) {
      const int sx = (x + s) % w;
      for (int ch = 0; ch < c; ++ch) {
        dst[x * c + ch] = src[sx * c + ch];
      }
    }
  }
  return ErpImage(w, image.height(), c, std::move(out));
}

}  // namespace sr360

#endif  // SR360_IMAGE_HPP_
