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

// Reference implementations used only by tests: straight-line double loops
// and exhaustive enumerations with none of the windowing, fusing, or
// fast-path logic of the library code.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "vks/features.hpp"
#include "vks/image.hpp"
#include "vks/kde.hpp"
#include "vks/model.hpp"
#include "vks/mrf.hpp"
#include "vks/variance.hpp"

namespace vks::testing {

/// Deterministic scalar draws over mt19937_64 (the stdlib distribution
/// objects are implementation-defined, so transforms are explicit).
class TestRng {
 public:
  explicit TestRng(uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }
  double pick(std::initializer_list<double> values) {
    return *(values.begin() + uniform_int(0, static_cast<int>(values.size()) - 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Per-dimension variance vector for a grouped covariance.
inline std::vector<double> expand_variances(const DiagonalCovariance& sigma) {
  std::vector<double> v = {sigma.spatial, sigma.spatial, sigma.color_primary};
  if (sigma.mode == FeatureMode::kRgb) {
    v.push_back(sigma.color_primary);
    v.push_back(sigma.color_primary);
  } else {
    v.push_back(sigma.color_secondary);
    v.push_back(sigma.color_secondary);
    v.push_back(sigma.siltp);
    v.push_back(sigma.siltp);
    v.push_back(sigma.siltp);
  }
  return v;
}

/// Joint-feature difference vector between a query and a stored sample at
/// pixel (qx, qy); texture dimensions use the Hamming distance.
inline std::vector<double> feature_difference(const FeatureVector& a,
                                              const ModelSample& sample,
                                              int qx, int qy,
                                              FeatureMode mode) {
  std::vector<double> d = {a.x - qx, a.y - qy,
                           a.appearance[0] - sample.appearance[0],
                           a.appearance[1] - sample.appearance[1],
                           a.appearance[2] - sample.appearance[2]};
  if (mode == FeatureMode::kLabSiltp)
    for (int t = 0; t < 3; ++t)
      d.push_back(siltp_hamming(
          static_cast<uint16_t>(a.appearance[3 + t]),
          static_cast<uint16_t>(sample.appearance[3 + t])));
  return d;
}

/// Unwindowed kernel score: plain double loop over every pixel and sample,
/// evaluating the full joint Gaussian in linear space.
inline double naive_kernel_score(const FeatureVector& a,
                                 const ProcessModel& model,
                                 const DiagonalCovariance& sigma) {
  if (model.frame_count() == 0) return 0.0;
  std::vector<double> variances = expand_variances(sigma);
  double sum = 0.0;
  for (int qy = 0; qy < model.height(); ++qy) {
    for (int qx = 0; qx < model.width(); ++qx) {
      for (int s = 0; s < model.count_at(qx, qy); ++s) {
        ModelSample sample = model.sample_at(qx, qy, s);
        std::vector<double> diff =
            feature_difference(a, sample, qx, qy, sigma.mode);
        sum += sample.weight * gaussian(diff, variances);
      }
    }
  }
  return sum / model.frame_count();
}

/// Unwindowed uniform foreground component U_F.
inline double naive_uniform_score(const FeatureVector& a,
                                  const ProcessModel& model,
                                  double sigma_spatial, double u) {
  if (model.frame_count() == 0) return u;
  std::vector<double> variances = {sigma_spatial, sigma_spatial};
  double sum = 0.0;
  for (int qy = 0; qy < model.height(); ++qy) {
    for (int qx = 0; qx < model.width(); ++qx) {
      int count = model.count_at(qx, qy);
      if (count == 0) continue;
      std::vector<double> diff = {a.x - qx, a.y - qy};
      sum += count * u * gaussian(diff, variances);
    }
  }
  return sum / model.frame_count();
}

/// Exhaustive variance selection built from independent single-candidate
/// score calls plus an explicit smallest-spatial-then-color tie rule.
inline VarianceSelection exhaustive_select(const FeatureVector& a,
                                           const ProcessModel& background,
                                           const VarianceGrid& grid,
                                           int window_radius) {
  VarianceSelection best;
  bool first = true;
  for (int s = 0; s < grid.spatial_count(); ++s) {
    for (int c = 0; c < grid.color_count(); ++c) {
      DiagonalCovariance sigma = grid.candidate(s, c);
      double score = background_score(a, background, sigma, window_radius);
      if (first || score > best.score) {
        best = {s, c, score, sigma};
        first = false;
      }
    }
  }
  return best;
}

/// Potts energy of a full labeling (mask nonzero = foreground).
inline double mrf_energy(const PosteriorMap& posterior, const LabelMask& mask,
                         double lambda, double epsilon = kMrfLogEpsilon) {
  const int w = posterior.width();
  const int h = posterior.height();
  double energy = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool fg = mask.at(x, y) != kBackground;
      energy += fg ? unary_foreground(posterior.at(x, y), epsilon)
                   : unary_background(posterior.at(x, y), epsilon);
      if (x + 1 < w && fg != (mask.at(x + 1, y) != kBackground))
        energy += lambda;
      if (y + 1 < h && fg != (mask.at(x, y + 1) != kBackground))
        energy += lambda;
    }
  }
  return energy;
}

/// Exact minimum-energy labeling by enumerating all 2^(w*h) assignments.
inline LabelMask enumerate_mrf(const PosteriorMap& posterior, double lambda,
                               double epsilon = kMrfLogEpsilon) {
  const int w = posterior.width();
  const int h = posterior.height();
  const int n = w * h;
  if (n > 20) throw std::invalid_argument("enumerate_mrf: map too large");

  LabelMask best(w, h, 1, kBackground);
  double best_energy = std::numeric_limits<double>::infinity();
  LabelMask candidate(w, h, 1, kBackground);
  for (uint32_t bits = 0; bits < (1u << n); ++bits) {
    for (int p = 0; p < n; ++p)
      candidate.at(p % w, p / w) =
          (bits >> p) & 1u ? kForeground : kBackground;
    double energy = mrf_energy(posterior, candidate, lambda, epsilon);
    if (energy < best_energy) {
      best_energy = energy;
      best = candidate;
    }
  }
  return best;
}

/// Random sample model whose colors scatter around a frame's pixels, the
/// way a video model would.
inline ProcessModel random_model(const Image<double>& color_plane,
                                 int capacity, int appearance_size,
                                 TestRng& rng, double color_spread = 6.0) {
  const int w = color_plane.width();
  const int h = color_plane.height();
  ProcessModel model(w, h, capacity, appearance_size);
  std::vector<double> appearance(appearance_size);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int s = 0; s < capacity; ++s) {
        for (int c = 0; c < 3; ++c)
          appearance[c] = std::clamp(
              color_plane.at(x, y, c) + color_spread * rng.gaussian(), 0.0,
              255.0);
        for (int c = 3; c < appearance_size; ++c)
          appearance[c] = rng.uniform_int(0, 65535);
        model.push(x, y, appearance, rng.uniform(0.05, 1.0), s);
      }
    }
  }
  model.set_frame_count(capacity);
  return model;
}

inline Image<double> random_color_plane(int width, int height, TestRng& rng) {
  Image<double> plane(width, height, 3);
  for (double& v : plane.storage()) v = rng.uniform(0.0, 255.0);
  return plane;
}

inline ProcessModel random_model(int width, int height, int capacity,
                                 FeatureMode mode, TestRng& rng) {
  return random_model(random_color_plane(width, height, rng), capacity,
                      appearance_dims(mode), rng);
}

/// Query feature anchored to one stored sample: the color stays within
/// `color_jitter` of that sample and the texture codes are copied, so the
/// score is always dominated by in-window contributions.
inline FeatureVector anchored_query(const ProcessModel& model, TestRng& rng,
                                    double color_jitter = 0.5) {
  const int x = rng.uniform_int(0, model.width() - 1);
  const int y = rng.uniform_int(0, model.height() - 1);
  FeatureVector fv;
  fv.x = x;
  fv.y = y;
  fv.appearance_size = model.appearance_size();
  const int count = model.count_at(x, y);
  if (count == 0) {
    for (int c = 0; c < 3; ++c) fv.appearance[c] = rng.uniform(0.0, 255.0);
    return fv;
  }
  ModelSample sample = model.sample_at(x, y, rng.uniform_int(0, count - 1));
  for (int c = 0; c < 3; ++c)
    fv.appearance[c] =
        sample.appearance[c] + rng.uniform(-color_jitter, color_jitter);
  for (int c = 3; c < fv.appearance_size; ++c)
    fv.appearance[c] = sample.appearance[c];
  return fv;
}

}  // namespace vks::testing
