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
#include <iostream>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "vks/features.hpp"
#include "vks/image.hpp"

namespace vks {

/// Read-only view of one stored sample. The sample's spatial coordinates are
/// the pixel location it is stored at.
struct ModelSample {
  std::span<const double> appearance;
  double weight = 0.0;      // soft label: P(bg|sample) or P(fg|sample)
  double log_weight = 0.0;  // cached log(weight); -inf when weight == 0
  long source_frame = -1;
};

/// Per-pixel ring buffers of soft-labeled samples, one ring per location.
/// Rings replace their oldest entry once full; `frame_count` tracks how many
/// frames the model currently represents and normalizes the kernel scores.
class ProcessModel {
 public:
  ProcessModel() = default;

  ProcessModel(int width, int height, int capacity, int appearance_size)
      : width_(width),
        height_(height),
        capacity_(capacity),
        appearance_size_(appearance_size) {
    if (width <= 0 || height <= 0)
      throw std::invalid_argument("ProcessModel: dimensions must be positive");
    if (capacity <= 0)
      throw std::invalid_argument("ProcessModel: capacity must be positive");
    size_t pixels = static_cast<size_t>(width) * height;
    appearance_.assign(pixels * capacity * appearance_size, 0.0);
    weights_.assign(pixels * capacity, 0.0);
    log_weights_.assign(pixels * capacity, 0.0);
    source_frames_.assign(pixels * capacity, -1);
    heads_.assign(pixels, 0);
    counts_.assign(pixels, 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int capacity() const { return capacity_; }
  int appearance_size() const { return appearance_size_; }
  bool empty() const { return frame_count_ == 0; }

  /// Number of frames represented; the 1/N factor of the kernel scores.
  int frame_count() const { return frame_count_; }
  void set_frame_count(int n) { frame_count_ = n; }
  void note_frame_complete() {
    if (frame_count_ < capacity_) ++frame_count_;
  }

  /// Samples currently stored at a pixel. Slots [0, count) are always the
  /// filled ones: the head only advances once a ring is full.
  int count_at(int x, int y) const { return counts_[pixel_index(x, y)]; }

  ModelSample sample_at(int x, int y, int slot) const {
    size_t p = pixel_index(x, y);
    size_t s = p * capacity_ + slot;
    return {{&appearance_[s * appearance_size_],
             static_cast<size_t>(appearance_size_)},
            weights_[s],
            log_weights_[s],
            source_frames_[s]};
  }

  /// Stores a sample at (x, y), filling the next free slot or replacing the
  /// oldest entry once the ring is full.
  void push(int x, int y, std::span<const double> appearance, double weight,
            long source_frame) {
    size_t p = pixel_index(x, y);
    uint8_t& head = heads_[p];
    uint8_t& count = counts_[p];
    int slot;
    if (count < capacity_) {
      slot = (head + count) % capacity_;
      ++count;
    } else {
      slot = head;
      head = static_cast<uint8_t>((head + 1) % capacity_);
    }
    size_t s = p * capacity_ + slot;
    for (int c = 0; c < appearance_size_; ++c)
      appearance_[s * appearance_size_ + c] = appearance[c];
    weights_[s] = weight;
    log_weights_[s] = weight > 0.0 ? std::log(weight)
                                   : -std::numeric_limits<double>::infinity();
    source_frames_[s] = source_frame;
  }

  // Raw accessors for the scoring hot path.
  const double* appearance_ptr(size_t pixel) const {
    return &appearance_[pixel * capacity_ * appearance_size_];
  }
  const double* weights_ptr(size_t pixel) const {
    return &weights_[pixel * capacity_];
  }
  const double* log_weights_ptr(size_t pixel) const {
    return &log_weights_[pixel * capacity_];
  }
  int count_at(size_t pixel) const { return counts_[pixel]; }
  size_t pixel_index(int x, int y) const {
    return static_cast<size_t>(y) * width_ + x;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int capacity_ = 0;
  int appearance_size_ = 0;
  int frame_count_ = 0;
  std::vector<double> appearance_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  std::vector<long> source_frames_;
  std::vector<uint8_t> heads_;
  std::vector<uint8_t> counts_;
};

struct ModelPair {
  ProcessModel background;
  ProcessModel foreground;
};

// ============================ initialization ==============================

/// Builds the background model from `sample_count` frames spaced evenly
/// through the initialization window (for 50 frames and 5 samples: indices
/// 9, 19, 29, 39, 49), every sample weighted P(bg) = 1. The foreground model
/// starts empty with capacity `fg_capacity`.
inline ModelPair initialize(std::span<const Frame> frames,
                            const FeatureConfig& features, int sample_count,
                            int fg_capacity, int expected_window = 50) {
  if (frames.empty())
    throw std::invalid_argument("initialize: no frames provided");
  if (sample_count <= 0)
    throw std::invalid_argument("initialize: sample_count must be positive");
  if (static_cast<int>(frames.size()) < expected_window)
    std::cerr << "warning: initializing from " << frames.size()
              << " frames (expected " << expected_window << ")\n";

  const int total = static_cast<int>(frames.size());
  const int samples = std::min(sample_count, total);
  const int w = frames[0].width();
  const int h = frames[0].height();
  const int dims = appearance_dims(features.mode);

  ModelPair models{ProcessModel(w, h, samples, dims),
                   ProcessModel(w, h, fg_capacity, dims)};

  for (int k = 0; k < samples; ++k) {
    // ceil((k+1) * total / samples) - 1, evenly spaced with the last frame
    // of the window always included.
    int idx = ((k + 1) * total + samples - 1) / samples - 1;
    const Frame& frame = frames[idx];
    if (frame.width() != w || frame.height() != h)
      throw std::invalid_argument("initialize: frame sizes differ");
    FeaturePlanes planes = build_feature_planes(frame, features);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        FeatureVector fv = feature_at(planes, x, y);
        models.background.push(
            x, y, {fv.appearance.data(), static_cast<size_t>(dims)}, 1.0,
            frame.index);
      }
    }
  }
  models.background.set_frame_count(samples);
  return models;
}

// =============================== update ==================================

/// Folds a classified sample into the models. The foreground ring always
/// advances with weight P(fg) = 1 - p_bg; the background ring only absorbs
/// the sample when p_bg exceeds the threshold, so pixels occluded by
/// foreground keep their background history (no ghost trail on reveal).
inline void update(ProcessModel& background, ProcessModel& foreground,
                   const FeatureVector& a, double p_bg, long frame_index,
                   double bg_update_threshold = 0.5) {
  int x = static_cast<int>(a.x);
  int y = static_cast<int>(a.y);
  std::span<const double> appearance{a.appearance.data(),
                                     static_cast<size_t>(a.appearance_size)};
  if (p_bg > bg_update_threshold)
    background.push(x, y, appearance, p_bg, frame_index);
  foreground.push(x, y, appearance, 1.0 - p_bg, frame_index);
}

// ========================= illumination reset =============================

struct ResetConfig {
  bool enabled = false;
  /// Minimum per-pixel intensity change to count toward the majority vote.
  /// <= 0 selects the mode default: 10 (RGB grayscale) or 2.5 (LAB L).
  double intensity_threshold = 0.0;
};

inline double reset_threshold(const ResetConfig& config, FeatureMode mode) {
  if (config.intensity_threshold > 0.0) return config.intensity_threshold;
  return mode == FeatureMode::kRgb ? 10.0 : 2.5;
}

/// True when a strict majority of pixels changed intensity by at least the
/// threshold between consecutive frames — the global illumination jump that
/// triggers model relearning.
inline bool illumination_reset_check(const Image<double>& prev_intensity,
                                     const Image<double>& cur_intensity,
                                     double threshold) {
  if (!prev_intensity.same_shape(cur_intensity))
    throw std::invalid_argument("illumination_reset_check: shape mismatch");
  const size_t total = prev_intensity.size();
  size_t changed = 0;
  const double* prev = prev_intensity.data();
  const double* cur = cur_intensity.data();
  for (size_t i = 0; i < total; ++i)
    if (std::abs(cur[i] - prev[i]) >= threshold) ++changed;
  return 2 * changed > total;
}

inline bool illumination_reset_check(const Frame& prev, const Frame& cur,
                                     const ResetConfig& config,
                                     const FeatureConfig& features) {
  FeaturePlanes prev_planes = build_feature_planes(prev, features);
  FeaturePlanes cur_planes = build_feature_planes(cur, features);
  return illumination_reset_check(prev_planes.intensity, cur_planes.intensity,
                                  reset_threshold(config, features.mode));
}

}  // namespace vks
