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

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vks/components.hpp"
#include "vks/config.hpp"
#include "vks/features.hpp"
#include "vks/image.hpp"
#include "vks/kde.hpp"
#include "vks/model.hpp"
#include "vks/mrf.hpp"
#include "vks/parallel.hpp"
#include "vks/variance.hpp"

namespace vks {

struct FrameResult {
  long frame_index = 0;
  PosteriorMap posterior;           // pre-smoothing P(bg | a)
  LabelMask mask;                   // MRF-smoothed, size-filtered labels
  Image<uint8_t> selected_spatial;  // per-pixel grid indices
  Image<uint8_t> selected_color;
  double search_fraction = 0.0;     // pixels that ran the full search
  double elapsed_ms = 0.0;
};

/// Streaming background-subtraction engine. Frames fed in order are first
/// buffered for model initialization; afterwards every feed() classifies the
/// frame and folds it back into the models. Results for frame t depend only
/// on frames 0..t, and pixel classification writes to disjoint per-pixel
/// slots, so output is identical for any worker-thread count.
class Engine {
 public:
  explicit Engine(PipelineConfig config) : config_(std::move(config)) {
    config_.validate();
    features_ = config_.features();
    grid_ = config_.grid();
    fg_sigma_ = config_.foreground_sigma();
    fg_window_ = window_radius(fg_sigma_.spatial, config_.window_multiplier);
    bg_window_ = window_radius(
        config_.variance_mode == VarianceMode::kUniform ? grid_.spatial.front()
                                                        : grid_.max_spatial(),
        config_.window_multiplier);
  }

  const PipelineConfig& config() const { return config_; }
  bool initialized() const { return ready_; }
  long frames_seen() const { return frames_seen_; }
  const ProcessModel& background_model() const { return models_.background; }
  const ProcessModel& foreground_model() const { return models_.foreground; }

  /// Feeds the next frame; returns a result once the engine is past its
  /// initialization (or relearning) window.
  std::optional<FrameResult> feed(const Frame& frame) {
    auto start = std::chrono::steady_clock::now();
    ++frames_seen_;

    FeaturePlanes planes = build_feature_planes(frame, features_);

    if (ready_ && config_.reset_enabled && have_prev_intensity_ &&
        illumination_reset_check(
            prev_intensity_, planes.intensity,
            reset_threshold(config_.reset(), config_.feature_mode))) {
      // Illumination jump: drop the models and relearn from this frame on.
      ready_ = false;
      init_buffer_.clear();
    }
    prev_intensity_ = planes.intensity;
    have_prev_intensity_ = true;

    if (!ready_) {
      init_buffer_.push_back(frame);
      if (static_cast<int>(init_buffer_.size()) >= config_.init_frames) {
        models_ = initialize(init_buffer_, features_, config_.init_samples,
                             config_.fg_frames, config_.init_frames);
        init_buffer_.clear();
        cache_ = VarianceCache(frame.width(), frame.height());
        ready_ = true;
      }
      return std::nullopt;
    }

    FrameResult result = classify(planes, frame.index);
    update_models(planes, result.posterior, frame.index);

    result.elapsed_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    return result;
  }

 private:
  FrameResult classify(const FeaturePlanes& planes, long frame_index) {
    const int w = planes.color.width();
    const int h = planes.color.height();

    FrameResult result;
    result.frame_index = frame_index;
    result.posterior = PosteriorMap(w, h, 1);
    result.selected_spatial = Image<uint8_t>(w, h, 1, 0);
    result.selected_color = Image<uint8_t>(w, h, 1, 0);

    std::vector<uint8_t> searched(static_cast<size_t>(w) * h, 0);

    parallel_for(h, [&](int y_begin, int y_end) {
      for (int y = y_begin; y < y_end; ++y) {
        for (int x = 0; x < w; ++x) {
          FeatureVector a = feature_at(planes, x, y);
          double posterior;
          VarianceSelection selection;
          switch (config_.variance_mode) {
            case VarianceMode::kUniform: {
              selection.sigma = grid_.candidate(0, 0);
              double s_b = background_score(a, models_.background,
                                            selection.sigma, bg_window_);
              ForegroundScore s_f =
                  foreground_score(a, models_.foreground, fg_sigma_,
                                   config_.u, config_.alpha_f, fg_window_);
              selection.score = s_b;
              posterior = posterior_bg(s_b, s_f.mixed);
              break;
            }
            case VarianceMode::kVks: {
              selection = select_variances(a, models_.background, grid_,
                                           bg_window_);
              ForegroundScore s_f =
                  foreground_score(a, models_.foreground, fg_sigma_,
                                   config_.u, config_.alpha_f, fg_window_);
              posterior = posterior_bg(selection.score, s_f.mixed);
              searched[static_cast<size_t>(y) * w + x] = 1;
              break;
            }
            default: {
              CachedClassification c = classify_with_cache(
                  a, models_.background, models_.foreground, cache_, grid_,
                  fg_sigma_, config_.tau_bf, config_.u, config_.alpha_f,
                  bg_window_, fg_window_);
              selection = c.selection;
              posterior = c.posterior;
              searched[static_cast<size_t>(y) * w + x] = c.searched ? 1 : 0;
              break;
            }
          }
          result.posterior.at(x, y) = posterior;
          result.selected_spatial.at(x, y) =
              static_cast<uint8_t>(selection.spatial_index);
          result.selected_color.at(x, y) =
              static_cast<uint8_t>(selection.color_index);
        }
      }
    });

    size_t searches = 0;
    for (uint8_t flag : searched) searches += flag;
    result.search_fraction =
        static_cast<double>(searches) / (static_cast<size_t>(w) * h);

    result.mask = filter_small_components(
        mrf_smooth(result.posterior, config_.lambda),
        config_.min_component_size);
    return result;
  }

  void update_models(const FeaturePlanes& planes, const PosteriorMap& posterior,
                     long frame_index) {
    const int w = planes.color.width();
    const int h = planes.color.height();
    parallel_for(h, [&](int y_begin, int y_end) {
      for (int y = y_begin; y < y_end; ++y) {
        for (int x = 0; x < w; ++x) {
          FeatureVector a = feature_at(planes, x, y);
          double p_bg = posterior.at(x, y);
          if (!config_.conditional_bg_update) {
            // Regression switch: unconditional background absorption, which
            // reintroduces ghost trails after long occlusions.
            models_.background.push(
                x, y,
                {a.appearance.data(), static_cast<size_t>(a.appearance_size)},
                p_bg, frame_index);
            models_.foreground.push(
                x, y,
                {a.appearance.data(), static_cast<size_t>(a.appearance_size)},
                1.0 - p_bg, frame_index);
          } else {
            update(models_.background, models_.foreground, a, p_bg,
                   frame_index, config_.posterior_threshold);
          }
        }
      }
    });
    models_.foreground.note_frame_complete();
  }

  PipelineConfig config_;
  FeatureConfig features_;
  VarianceGrid grid_;
  DiagonalCovariance fg_sigma_;
  int bg_window_ = 0;
  int fg_window_ = 0;

  std::vector<Frame> init_buffer_;
  ModelPair models_;
  VarianceCache cache_;
  Image<double> prev_intensity_;
  bool have_prev_intensity_ = false;
  bool ready_ = false;
  long frames_seen_ = 0;
};

/// Runs the engine over a whole in-memory sequence. When the sequence is
/// shorter than the configured initialization window, the window shrinks to
/// the sequence length (with a warning from the initializer).
inline std::vector<FrameResult> process_sequence(const PipelineConfig& config,
                                                 std::span<const Frame> frames) {
  PipelineConfig effective = config;
  if (static_cast<int>(frames.size()) < config.init_frames &&
      !frames.empty()) {
    effective.init_frames = static_cast<int>(frames.size());
    if (effective.init_samples > effective.init_frames)
      effective.init_samples = effective.init_frames;
    std::cerr << "warning: sequence has " << frames.size()
              << " frames; shrinking initialization window from "
              << config.init_frames << "\n";
  }
  Engine engine(effective);
  std::vector<FrameResult> results;
  for (const Frame& frame : frames)
    if (auto result = engine.feed(frame)) results.push_back(std::move(*result));
  return results;
}

}  // namespace vks
