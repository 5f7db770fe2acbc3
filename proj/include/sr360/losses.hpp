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
// Training-objective operators. Everything here is a pure function over
// supplied tensors: the spherically weighted structural-similarity loss
// (360-SS) with its exact analytic gradient, a feature-map distance, the
// negative-log adversarial term, the weighted total objective, and
// patch-score averaging. Network evaluation stays outside; callers pass
// in images, feature maps and probabilities.

#ifndef SR360_LOSSES_HPP_
#define SR360_LOSSES_HPP_

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sr360/detail/filter.hpp"
#include "sr360/erp_geometry.hpp"
#include "sr360/image.hpp"
#include "sr360/metrics.hpp"

namespace sr360 {

// Mixing weights of the total objective: adv + beta * feat + gamma * 360ss.
struct LossWeights {
  double beta = 10.0;
  double gamma = 10.0;

  void validate() const {
    if (!(beta >= 0.0) || !(gamma >= 0.0) || !std::isfinite(beta) ||
        !std::isfinite(gamma)) {
      throw std::invalid_argument("LossWeights: beta and gamma must be "
                                  "finite and nonnegative");
    }
  }
};

// Arbitrary-shape activation tensor. Two maps are comparable iff their
// shapes match elementwise.
struct FeatureMap {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  FeatureMap(std::vector<std::size_t> s, std::vector<double> v)
      : shape(std::move(s)), values(std::move(v)) {
    std::size_t expected = 1;
    for (std::size_t d : shape) expected *= d;
    if (shape.empty() || values.size() != expected) {
      throw std::invalid_argument("FeatureMap: shape/value size mismatch");
    }
    for (double x : values) {
      if (!std::isfinite(x)) {
        throw std::invalid_argument("FeatureMap: non-finite entry");
      }
    }
  }
};

// Discriminator output probabilities, each in (0, 1].
class ProbBatch {
 public:
  explicit ProbBatch(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
      throw std::invalid_argument("ProbBatch: at least one probability "
                                  "required");
    }
    for (double p : probs_) {
      if (!(p > 0.0)) {
        throw std::invalid_argument("ProbBatch: probabilities must be "
                                    "positive");
      }
      if (!(p <= 1.0)) {
        throw std::invalid_argument("ProbBatch: probabilities must be <= 1");
      }
    }
  }

  std::span<const double> values() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

 private:
  std::vector<double> probs_;
};

enum class FeatureDistance { kSquared, kAbsolute };

// Spherically weighted SSIM score of one (reference, distorted) luma pair,
// with the row weights of the pair's own height.
inline double d360ss(const ErpImage& ref, const ErpImage& dist,
                     const SsimParams& params = {}) {
  return ws_ssim(ref, dist, params, row_weights(ref.height()));
}

// Batch mean of d360ss, reduced in index order.
inline double mean_d360ss(std::span<const ErpImage> refs,
                          std::span<const ErpImage> dists,
                          const SsimParams& params = {}) {
  if (refs.empty() || refs.size() != dists.size()) {
    throw std::invalid_argument("mean_d360ss: batch must be nonempty and "
                                "paired");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    sum += d360ss(refs[i], dists[i], params);
  }
  return sum / static_cast<double>(refs.size());
}

// 360-SS training loss: the complement 1 - mean(d360ss), so that a perfect
// reconstruction scores 0 and minimization improves quality.
inline double loss_360ss(std::span<const ErpImage> refs,
                         std::span<const ErpImage> dists,
                         const SsimParams& params = {}) {
  return 1.0 - mean_d360ss(refs, dists, params);
}

// Exact gradient of loss_360ss for one pair with respect to every sample
// of the distorted image. The derivative flows through the Gaussian-window
// moments; the wrap pass of the window filter is self-adjoint, while the
// clamp pass needs its true transpose (border rows receive the taps that
// clamping folded onto them), otherwise the top and bottom window-radius
// rows come out wrong.
inline Field grad_360ss(const ErpImage& ref, const ErpImage& dist,
                        const SsimParams& params, const WeightMap& weights) {
  if (!ref.same_shape(dist)) {
    throw std::invalid_argument("grad_360ss: shape mismatch");
  }
  if (ref.channels() != 1) {
    throw std::invalid_argument("grad_360ss: inputs must be single-channel");
  }
  if (weights.height() != ref.height()) {
    throw std::invalid_argument("grad_360ss: weight map height mismatch");
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
  // Per-pixel partial derivatives of the local SSIM value S = A1 A2/(B1 B2)
  // with respect to the three dist-dependent moments (windowed mean, raw
  // second moment, raw cross moment), each scaled by the pixel's area
  // weight:
  //   dS/dmu_y = 2 (mx (A2 - A1) - S my (B2 - B1)) / (B1 B2)
  //   dS/dSyy  = -S / B2
  //   dS/dSxy  = 2 S / A2
  // Written this way the terms cancel bitwise when dist == ref (S is
  // exactly 1 there), so the gradient of the interior maximum is exactly
  // zero.
  Field g_mu(w, h), g_syy(w, h), g_sxy(w, h);
  for (int row = 0; row < h; ++row) {
    const double q = weights[row];
    const std::size_t off = static_cast<std::size_t>(row) * w;
    for (int col = 0; col < w; ++col) {
      const std::size_t i = off + col;
      const double mx = mu_x.values[i];
      const double my = mu_y.values[i];
      const double a1 = 2.0 * mx * my + c1;
      const double a2 = 2.0 * (sxy.values[i] - mx * my) + c2;
      const double b1 = mx * mx + my * my + c1;
      const double b2 = (sxx.values[i] - mx * mx) +
                        (syy.values[i] - my * my) + c2;
      const double den = b1 * b2;
      const double s_val = (a1 * a2) / den;
      g_mu.values[i] =
          q * (2.0 * (mx * (a2 - a1) - s_val * (my * (b2 - b1))) / den);
      g_syy.values[i] = q * (-(s_val / b2));
      g_sxy.values[i] = q * (2.0 * (s_val / a2));
    }
  }

  const Field a_mu = detail::separable_filter_adjoint(g_mu, taps);
  const Field a_syy = detail::separable_filter_adjoint(g_syy, taps);
  const Field a_sxy = detail::separable_filter_adjoint(g_sxy, taps);

  const double omega = weights.total_for_width(w);
  Field grad(w, h);
  for (std::size_t i = 0; i < grad.values.size(); ++i) {
    grad.values[i] = -(a_mu.values[i] + 2.0 * y.values[i] * a_syy.values[i] +
                       x.values[i] * a_sxy.values[i]) /
                     omega;
  }
  return grad;
}

// Distance between two comparable feature maps: mean squared difference
// by default, mean absolute difference on request.
inline double feature_loss(const FeatureMap& ref, const FeatureMap& dist,
                           FeatureDistance metric = FeatureDistance::kSquared) {
  if (ref.shape != dist.shape) {
    throw std::invalid_argument("feature_loss: shape mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < ref.values.size(); ++i) {
    const double d = ref.values[i] - dist.values[i];
    sum += metric == FeatureDistance::kSquared ? d * d : std::abs(d);
  }
  return sum / static_cast<double>(ref.values.size());
}

// Batched feature loss: per-pair distances averaged over the batch.
inline double feature_loss(std::span<const FeatureMap> refs,
                           std::span<const FeatureMap> dists,
                           FeatureDistance metric = FeatureDistance::kSquared) {
  if (refs.empty() || refs.size() != dists.size()) {
    throw std::invalid_argument("feature_loss: batch must be nonempty and "
                                "paired");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    sum += feature_loss(refs[i], dists[i], metric);
  }
  return sum / static_cast<double>(refs.size());
}

// Negative-log adversarial term, summed (not averaged) over the batch.
inline double adversarial_loss(const ProbBatch& probs) {
  double sum = 0.0;
  for (double p : probs.values()) sum += -std::log(p);
  return sum;
}

// Combined objective: l_adv + beta * l_feat + gamma * l_360.
inline double total_objective(double l_adv, double l_feat, double l_360,
                              const LossWeights& w = {}) {
  w.validate();
  if (!std::isfinite(l_adv) || !std::isfinite(l_feat) ||
      !std::isfinite(l_360)) {
    throw std::invalid_argument("total_objective: loss terms must be finite");
  }
  return l_adv + w.beta * l_feat + w.gamma * l_360;
}

// Mean of a 2-D grid of per-patch discriminator scores in [0,1].
inline double patch_score_average(std::span<const double> scores, int rows,
                                  int cols) {
  if (rows <= 0 || cols <= 0 ||
      scores.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("patch_score_average: empty or mis-sized "
                                "grid");
  }
  double sum = 0.0;
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw std::invalid_argument("patch_score_average: score outside "
                                  "[0,1]");
    }
    sum += s;
  }
  return sum / static_cast<double>(scores.size());
}

}  // namespace sr360

#endif  // SR360_LOSSES_HPP_
