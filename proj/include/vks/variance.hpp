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

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "vks/image.hpp"
#include "vks/kde.hpp"

namespace vks {

/// Candidate variances for the per-pixel background kernel search. Spatial
/// and color sets are kept in ascending order so that score ties resolve to
/// the smallest spatial, then smallest color variance.
struct VarianceGrid {
  struct ColorPair {
    double primary;
    double secondary;

    friend bool operator<(const ColorPair& a, const ColorPair& b) {
      return a.primary != b.primary ? a.primary < b.primary
                                    : a.secondary < b.secondary;
    }
    friend bool operator==(const ColorPair& a, const ColorPair& b) {
      return a.primary == b.primary && a.secondary == b.secondary;
    }
  };

  FeatureMode mode = FeatureMode::kRgb;
  std::vector<double> spatial;
  std::vector<ColorPair> color;
  double siltp = 0.75;  // texture variance is fixed, not searched

  static VarianceGrid defaults(FeatureMode mode) {
    VarianceGrid grid;
    grid.mode = mode;
    grid.spatial = {0.25, 0.75};
    if (mode == FeatureMode::kRgb) {
      grid.color = {{1.25, 1.25}, {3.75, 3.75}, {11.25, 11.25}};
    } else {
      grid.color = {{1.25, 1.0}, {1.25, 1.5}, {2.5, 1.0},
                    {2.5, 1.5},  {5.0, 1.0},  {5.0, 1.5}};
    }
    return grid;
  }

  int spatial_count() const { return static_cast<int>(spatial.size()); }
  int color_count() const { return static_cast<int>(color.size()); }
  int candidate_count() const { return spatial_count() * color_count(); }

  DiagonalCovariance candidate(int spatial_index, int color_index) const {
    return {spatial[spatial_index], color[color_index].primary,
            color[color_index].secondary, siltp, mode};
  }

  double max_spatial() const {
    return *std::max_element(spatial.begin(), spatial.end());
  }

  void normalize() {
    std::sort(spatial.begin(), spatial.end());
    spatial.erase(std::unique(spatial.begin(), spatial.end()), spatial.end());
    std::sort(color.begin(), color.end());
    color.erase(std::unique(color.begin(), color.end()), color.end());
  }

  void validate() const {
    if (spatial.empty() || color.empty())
      throw std::invalid_argument("VarianceGrid: empty candidate set");
    for (int s = 0; s < spatial_count(); ++s)
      for (int c = 0; c < color_count(); ++c) candidate(s, c).validate();
  }
};

/// Fixed foreground kernel variances.
inline DiagonalCovariance fixed_foreground_sigma(FeatureMode mode) {
  if (mode == FeatureMode::kRgb) return {3.0, 3.75, 3.75, 0.75, mode};
  return {3.0, 3.75, 1.0, 0.75, mode};
}

// ========================== per-pixel selection ===========================

struct VarianceSelection {
  int spatial_index = 0;
  int color_index = 0;
  double score = 0.0;  // S_B under the selected candidate
  DiagonalCovariance sigma;
};

/// Exhaustive per-pixel search: evaluates S_B under every (spatial, color)
/// candidate and keeps the argmax. All candidates share one window scan, and
/// ties go to the earliest candidate in ascending grid order.
inline VarianceSelection select_variances(const FeatureVector& a,
                                          const ProcessModel& background,
                                          const VarianceGrid& grid,
                                          int window_radius) {
  grid.validate();
  const int n = grid.candidate_count();
  std::vector<DiagonalCovariance> sigmas;
  sigmas.reserve(n);
  for (int s = 0; s < grid.spatial_count(); ++s)
    for (int c = 0; c < grid.color_count(); ++c)
      sigmas.push_back(grid.candidate(s, c));

  std::vector<double> scores(n);
  kernel_scores(a, background, sigmas, window_radius, scores);

  int best = 0;
  for (int j = 1; j < n; ++j)
    if (scores[j] > scores[best]) best = j;

  VarianceSelection selection;
  selection.spatial_index = best / grid.color_count();
  selection.color_index = best % grid.color_count();
  selection.score = scores[best];
  selection.sigma = sigmas[best];
  return selection;
}

// ============================ variance cache ==============================

/// Per-pixel cache of the last selected grid indices. Entries start invalid
/// and are invalidated wholesale on model resets.
class VarianceCache {
 public:
  VarianceCache() = default;
  VarianceCache(int width, int height)
      : spatial_(width, height, 1, 0),
        color_(width, height, 1, 0),
        valid_(width, height, 1, 0) {}

  bool valid(int x, int y) const { return valid_.at(x, y) != 0; }
  int spatial_index(int x, int y) const { return spatial_.at(x, y); }
  int color_index(int x, int y) const { return color_.at(x, y); }

  void store(int x, int y, const VarianceSelection& selection) {
    spatial_.at(x, y) = static_cast<uint8_t>(selection.spatial_index);
    color_.at(x, y) = static_cast<uint8_t>(selection.color_index);
    valid_.at(x, y) = 1;
  }

  void invalidate_all() {
    std::fill(valid_.storage().begin(), valid_.storage().end(),
              static_cast<uint8_t>(0));
  }

 private:
  Image<uint8_t> spatial_;
  Image<uint8_t> color_;
  Image<uint8_t> valid_;
};

// =========================== cached fast path =============================

struct CachedClassification {
  double posterior = 0.0;
  double s_b = 0.0;
  ForegroundScore s_f;
  VarianceSelection selection;
  bool searched = false;
};

/// Cached classification: score with the last selected variances first and
/// only rerun the full search when neither score dominates the other by the
/// confidence ratio tau_bf. An infinite tau_bf always searches (and must
/// reproduce the exhaustive path exactly); tau_bf near 1 never searches
/// again once either ratio exceeds it.
inline CachedClassification classify_with_cache(
    const FeatureVector& a, const ProcessModel& background,
    const ProcessModel& foreground, VarianceCache& cache,
    const VarianceGrid& grid, const DiagonalCovariance& fg_sigma,
    double tau_bf, double u, double alpha_f, int bg_window_radius,
    int fg_window_radius) {
  const int x = static_cast<int>(a.x);
  const int y = static_cast<int>(a.y);

  CachedClassification result;
  result.s_f = foreground_score(a, foreground, fg_sigma, u, alpha_f,
                                fg_window_radius);

  if (cache.valid(x, y)) {
    VarianceSelection cached;
    cached.spatial_index = cache.spatial_index(x, y);
    cached.color_index = cache.color_index(x, y);
    cached.sigma = grid.candidate(cached.spatial_index, cached.color_index);
    double s_b = background_score(a, background, cached.sigma,
                                  bg_window_radius);
    if (s_b > tau_bf * result.s_f.mixed ||
        result.s_f.mixed > tau_bf * s_b) {
      cached.score = s_b;
      result.s_b = s_b;
      result.selection = cached;
      result.posterior = posterior_bg(s_b, result.s_f.mixed);
      return result;
    }
  }

  result.selection = select_variances(a, background, grid, bg_window_radius);
  result.s_b = result.selection.score;
  result.searched = true;
  result.posterior = posterior_bg(result.s_b, result.s_f.mixed);
  cache.store(x, y, result.selection);
  return result;
}

}  // namespace vks
