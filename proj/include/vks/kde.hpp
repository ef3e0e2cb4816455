// Copyright 2026 The VKS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "vks/features.hpp"
#include "vks/image.hpp"
#include "vks/model.hpp"

namespace vks {

/// Diagonal covariance over a joint domain-range feature, grouped by
/// dimension role. RGB mode spans 5 dims (x, y, r, g, b) with
/// color_secondary mirroring color_primary; LAB+SILTP mode spans 8 dims
/// (x, y, L, a, b, and one per texture scale).
struct DiagonalCovariance {
  double spatial = 1.0;
  double color_primary = 1.0;
  double color_secondary = 1.0;
  double siltp = 1.0;
  FeatureMode mode = FeatureMode::kRgb;

  int dims() const { return mode == FeatureMode::kRgb ? 5 : 8; }

  double log_normalizer() const {
    double log_det = 2.0 * std::log(spatial);
    if (mode == FeatureMode::kRgb) {
      log_det += 3.0 * std::log(color_primary);
    } else {
      log_det += std::log(color_primary) + 2.0 * std::log(color_secondary) +
                 3.0 * std::log(siltp);
    }
    return -0.5 * dims() * std::log(2.0 * std::numbers::pi) - 0.5 * log_det;
  }

  void validate() const {
    bool ok = spatial > 0.0 && color_primary > 0.0 && color_secondary > 0.0 &&
              (mode == FeatureMode::kRgb || siltp > 0.0);
    if (!ok)
      throw std::invalid_argument(
          "DiagonalCovariance: variances must be positive");
  }
};

/// Zero-mean multivariate Gaussian density with diagonal covariance,
/// evaluated at the difference vector x.
inline double gaussian(std::span<const double> x,
                       std::span<const double> variances) {
  if (x.size() != variances.size() || x.empty())
    throw std::invalid_argument("gaussian: dimension mismatch");
  double log_det = 0.0;
  double quad = 0.0;
  for (size_t d = 0; d < x.size(); ++d) {
    if (variances[d] <= 0.0)
      throw std::invalid_argument("gaussian: variances must be positive");
    log_det += std::log(variances[d]);
    quad += x[d] * x[d] / variances[d];
  }
  double log_density =
      -0.5 * (x.size() * std::log(2.0 * std::numbers::pi) + log_det + quad);
  return std::exp(log_density);
}

/// Spatial truncation radius: contributions beyond `multiplier` standard
/// deviations of the spatial kernel are dropped.
inline int window_radius(double sigma_spatial, double multiplier = 4.0) {
  return static_cast<int>(std::ceil(multiplier * std::sqrt(sigma_spatial)));
}

namespace detail {

// Sample terms below this log-distance from the running maximum cannot move
// the accumulated sum at double precision by more than ~1e-17 relative.
constexpr double kLogTermCutoff = 40.0;

struct CandidateTerms {
  double inv2_spatial;
  double inv2_color_primary;
  double inv2_color_secondary;
  double inv2_siltp;
  double normalizer;  // exp(log_normalizer)
};

inline CandidateTerms make_terms(const DiagonalCovariance& sigma) {
  sigma.validate();
  // RGB mode treats all three channels as color_primary, mirroring
  // log_normalizer(); color_secondary only applies to a/b channels.
  double secondary = sigma.mode == FeatureMode::kRgb ? sigma.color_primary
                                                     : sigma.color_secondary;
  return {0.5 / sigma.spatial,
          0.5 / sigma.color_primary,
          0.5 / secondary,
          sigma.mode == FeatureMode::kLabSiltp ? 0.5 / sigma.siltp : 0.0,
          std::exp(sigma.log_normalizer())};
}

}  // namespace detail

/// Evaluates the kernel score of `a` against the model for every candidate
/// covariance at once, sharing the per-sample distance computations. Each
/// score is (1/N) * sum_i w_i * G(a - b_i; sigma): per sample, the group
/// kernels collapse to a single exp of the summed log-space terms, which is
/// then weighted by the sample's soft label. Samples whose weighted log term
/// falls far below the running maximum are skipped.
inline void kernel_scores(const FeatureVector& a, const ProcessModel& model,
                          std::span<const DiagonalCovariance> sigmas,
                          int window_radius, std::span<double> out) {
  if (sigmas.size() != out.size())
    throw std::invalid_argument("kernel_scores: output size mismatch");
  if (sigmas.empty()) return;
  if (window_radius < 0)
    throw std::invalid_argument("kernel_scores: negative window radius");

  const int n_candidates = static_cast<int>(sigmas.size());
  constexpr int kMaxCandidates = 16;
  if (n_candidates > kMaxCandidates)
    throw std::invalid_argument("kernel_scores: too many candidates");

  for (double& s : out) s = 0.0;
  if (model.frame_count() == 0) return;

  detail::CandidateTerms terms[kMaxCandidates];
  double sums[kMaxCandidates];
  double max_log[kMaxCandidates];
  const bool textured = sigmas[0].mode == FeatureMode::kLabSiltp;
  for (int j = 0; j < n_candidates; ++j) {
    terms[j] = detail::make_terms(sigmas[j]);
    sums[j] = 0.0;
    max_log[j] = -std::numeric_limits<double>::infinity();
  }

  const int ax = static_cast<int>(a.x);
  const int ay = static_cast<int>(a.y);
  const int w = model.width();
  const int h = model.height();
  const int dims = model.appearance_size();
  const int y_lo = std::max(0, ay - window_radius);
  const int y_hi = std::min(h - 1, ay + window_radius);
  const int x_lo = std::max(0, ax - window_radius);
  const int x_hi = std::min(w - 1, ax + window_radius);

  for (int qy = y_lo; qy <= y_hi; ++qy) {
    const double dy = a.y - qy;
    for (int qx = x_lo; qx <= x_hi; ++qx) {
      const double dx = a.x - qx;
      const double d2_spatial = dx * dx + dy * dy;
      const size_t pixel = model.pixel_index(qx, qy);
      const int count = model.count_at(pixel);
      const double* appearance = model.appearance_ptr(pixel);
      const double* log_weights = model.log_weights_ptr(pixel);
      const double* weights = model.weights_ptr(pixel);

      for (int s = 0; s < count; ++s) {
        const double* b = appearance + static_cast<size_t>(s) * dims;
        const double d0 = a.appearance[0] - b[0];
        const double d1 = a.appearance[1] - b[1];
        const double d2 = a.appearance[2] - b[2];
        const double d2_primary = d0 * d0;
        const double d2_secondary = d1 * d1 + d2 * d2;
        double d2_texture = 0.0;
        if (textured) {
          for (int t = 0; t < 3; ++t) {
            int ham = siltp_hamming(
                static_cast<uint16_t>(a.appearance[3 + t]),
                static_cast<uint16_t>(b[3 + t]));
            d2_texture += static_cast<double>(ham * ham);
          }
        }
        const double lw = log_weights[s];
        for (int j = 0; j < n_candidates; ++j) {
          const detail::CandidateTerms& t = terms[j];
          double quad = d2_spatial * t.inv2_spatial +
                        d2_primary * t.inv2_color_primary +
                        d2_secondary * t.inv2_color_secondary +
                        d2_texture * t.inv2_siltp;
          double weighted_log = lw - quad;
          if (weighted_log < max_log[j] - detail::kLogTermCutoff) continue;
          if (weighted_log > max_log[j]) max_log[j] = weighted_log;
          sums[j] += weights[s] * std::exp(-quad);
        }
      }
    }
  }

  const double inv_n = 1.0 / model.frame_count();
  for (int j = 0; j < n_candidates; ++j)
    out[j] = terms[j].normalizer * sums[j] * inv_n;
}

/// Background score S_B: soft-label weighted kernel density of `a` under the
/// background model, truncated to the spatial window.
inline double background_score(const FeatureVector& a,
                               const ProcessModel& background,
                               const DiagonalCovariance& sigma,
                               int window_radius) {
  double out = 0.0;
  kernel_scores(a, background, {&sigma, 1}, window_radius, {&out, 1});
  return out;
}

/// Foreground score with its uniform-density component: `kernel` is S_F,
/// `uniform` is U_F (spatial kernel only, scaled by the uniform density u),
/// and `mixed` is the alpha blend of the two actually used downstream.
struct ForegroundScore {
  double mixed = 0.0;
  double kernel = 0.0;
  double uniform = 0.0;
};

inline ForegroundScore foreground_score(const FeatureVector& a,
                                        const ProcessModel& foreground,
                                        const DiagonalCovariance& sigma,
                                        double u, double alpha_f,
                                        int window_radius) {
  ForegroundScore score;
  score.kernel = background_score(a, foreground, sigma, window_radius);

  if (foreground.frame_count() == 0) {
    // Floor for an empty model: unseen appearance is still explainable as
    // foreground, which is what lets novel objects bootstrap.
    score.uniform = u;
  } else {
    sigma.validate();
    const int ax = static_cast<int>(a.x);
    const int ay = static_cast<int>(a.y);
    const int w = foreground.width();
    const int h = foreground.height();
    const int y_lo = std::max(0, ay - window_radius);
    const int y_hi = std::min(h - 1, ay + window_radius);
    const int x_lo = std::max(0, ax - window_radius);
    const int x_hi = std::min(w - 1, ax + window_radius);
    const double inv2_spatial = 0.5 / sigma.spatial;
    const double norm_spatial =
        1.0 / (2.0 * std::numbers::pi * sigma.spatial);

    // The spatial kernel only depends on the integer squared offset, so
    // values are memoized by d2 across the window scan.
    const int max_d2 = 2 * window_radius * window_radius + 1;
    constexpr int kTableSize = 2 * 12 * 12 + 1;
    double table_storage[kTableSize];
    std::vector<double> table_heap;
    double* table = table_storage;
    if (max_d2 > kTableSize) {
      table_heap.assign(max_d2, -1.0);
      table = table_heap.data();
    } else {
      for (int i = 0; i < max_d2; ++i) table_storage[i] = -1.0;
    }

    double sum = 0.0;
    for (int qy = y_lo; qy <= y_hi; ++qy) {
      const int dy = ay - qy;
      for (int qx = x_lo; qx <= x_hi; ++qx) {
        const int dx = ax - qx;
        const int count =
            foreground.count_at(foreground.pixel_index(qx, qy));
        if (count == 0) continue;
        const int d2 = dx * dx + dy * dy;
        if (table[d2] < 0.0) table[d2] = std::exp(-d2 * inv2_spatial);
        sum += count * table[d2];
      }
    }
    score.uniform =
        u * norm_spatial * sum / foreground.frame_count();
  }

  score.mixed = alpha_f * score.uniform + (1.0 - alpha_f) * score.kernel;
  return score;
}

/// Bayes posterior P(bg | a) from the two scores; both zero resolves to
/// foreground (novel appearance explained by neither model).
inline double posterior_bg(double s_b, double s_f) {
  double total = s_b + s_f;
  if (total <= 0.0) return 0.0;
  return s_b / total;
}

}  // namespace vks
