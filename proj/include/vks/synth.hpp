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
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "vks/image.hpp"

namespace vks {

enum class SceneKind { kStatic, kDynamicTexture, kOcclusion, kIlluminationJump };

inline SceneKind parse_scene_kind(const std::string& name) {
  if (name == "static") return SceneKind::kStatic;
  if (name == "dynamic-texture") return SceneKind::kDynamicTexture;
  if (name == "occlusion") return SceneKind::kOcclusion;
  if (name == "illumination-jump") return SceneKind::kIlluminationJump;
  throw std::invalid_argument("unknown scene kind: " + name);
}

struct SynthSpec {
  SceneKind kind = SceneKind::kDynamicTexture;
  int width = 64;
  int height = 64;
  int frame_count = 150;
  uint64_t seed = 1;
  double noise_std = 2.0;
  bool keep_clean_plate = false;

  // Moving foreground object (all scenes except static/occlusion).
  int object_size = 10;
  int object_start_frame = 50;
  double object_speed = 1.5;

  // Dynamic texture band covering the right half of the frame: every band
  // pixel holds its own color and oscillates around it with an independent
  // phase, so the motion is periodic in time but incoherent in space.
  double texture_amplitude = 10.0;
  double texture_period = 8.0;    // frames per flicker cycle

  // Occlusion scene: a constant-color square over a static plate.
  int occluder_size = 20;
  int occlusion_start = 60;
  int occlusion_frames = 15;
  double occluder_speed = 0.0;    // pixels/frame; 0 keeps it parked

  // Illumination jump: additive intensity step on every pixel.
  int jump_frame = 120;
  double jump_amount = 40.0;
};

struct SynthSequence {
  std::vector<Frame> frames;
  std::vector<LabelMask> gt;
  /// Noise-free, object-free background per frame (kept on request).
  std::vector<Image<double>> clean_plate;
};

namespace detail {

/// Deterministic scalar draws on top of the standard mt19937_64 stream;
/// the stdlib distributions are implementation-defined, so the transforms
/// are spelled out here.
class SynthRng {
 public:
  explicit SynthRng(uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Position bouncing inside [0, extent] with constant speed, sampled at
/// integer frames and rounded to whole pixels.
inline int bounce(double start, double velocity, int t, int extent) {
  if (extent <= 0) return 0;
  double pos = start + velocity * t;
  double period = 2.0 * extent;
  pos = std::fmod(pos, period);
  if (pos < 0.0) pos += period;
  if (pos > extent) pos = period - pos;
  return static_cast<int>(std::lround(pos));
}

}  // namespace detail

/// Renders a deterministic synthetic sequence with exact ground truth.
/// The background is a block mosaic; scene kinds layer a dynamic-texture
/// band, a parked occluder, or a global illumination step on top, plus an
/// optional moving square object. Per-pixel Gaussian noise is added last.
inline SynthSequence synth_generate(const SynthSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0 || spec.frame_count <= 0)
    throw std::invalid_argument("synth_generate: invalid dimensions");

  const int w = spec.width;
  const int h = spec.height;
  detail::SynthRng rng(spec.seed);

  // Static mosaic plate: 8x8 blocks with muted per-block colors.
  const int block = 8;
  const int blocks_x = (w + block - 1) / block;
  const int blocks_y = (h + block - 1) / block;
  std::vector<std::array<double, 3>> block_colors(
      static_cast<size_t>(blocks_x) * blocks_y);
  for (auto& color : block_colors)
    color = {rng.uniform(70.0, 170.0), rng.uniform(70.0, 170.0),
             rng.uniform(70.0, 170.0)};

  // Dynamic texture band (right half of the frame): per-pixel confetti base
  // colors, each flickering with its own phase and an amplitude spread of
  // +/-40% around the configured value.
  const int band_start = w / 2;
  const std::array<double, 3> flicker_scale = {1.0, 0.85, 0.7};
  Image<double> flicker_base(w, h, 3);
  Image<double> flicker_phase(w, h, 1);
  Image<double> flicker_amp(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = band_start; x < w; ++x) {
      for (int c = 0; c < 3; ++c)
        flicker_base.at(x, y, c) = rng.uniform(70.0, 170.0);
      flicker_phase.at(x, y) = rng.uniform(0.0, 2.0 * std::numbers::pi);
      flicker_amp.at(x, y) = spec.texture_amplitude * rng.uniform(0.6, 1.4);
    }
  }

  // Moving object: strong-contrast color, bouncing in the left half so it
  // never enters the texture band.
  const std::array<double, 3> object_color = {rng.uniform(215.0, 240.0),
                                              rng.uniform(20.0, 45.0),
                                              rng.uniform(215.0, 240.0)};
  const bool has_object = spec.kind == SceneKind::kDynamicTexture ||
                          spec.kind == SceneKind::kIlluminationJump;
  const int object_region_w =
      spec.kind == SceneKind::kDynamicTexture ? band_start : w;
  const int object_extent_x = std::max(0, object_region_w - spec.object_size);
  const int object_extent_y = std::max(0, h - spec.object_size);
  const double object_x0 = rng.uniform(0.0, std::max(1, object_extent_x));
  const double object_y0 = rng.uniform(0.0, std::max(1, object_extent_y));
  const double object_vx = spec.object_speed;
  const double object_vy = 0.7 * spec.object_speed;

  const std::array<double, 3> occluder_color = {rng.uniform(15.0, 40.0),
                                                rng.uniform(190.0, 215.0),
                                                rng.uniform(45.0, 70.0)};
  const int occluder_x0 =
      std::clamp((w - spec.occluder_size) / 2, 0, std::max(0, w - spec.occluder_size));
  const int occluder_y0 =
      std::clamp((h - spec.occluder_size) / 2, 0, std::max(0, h - spec.occluder_size));

  SynthSequence sequence;
  sequence.frames.reserve(spec.frame_count);
  sequence.gt.reserve(spec.frame_count);

  for (int t = 0; t < spec.frame_count; ++t) {
    Image<double> plate(w, h, 3);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto& base = block_colors[static_cast<size_t>(y / block) * blocks_x + x / block];
        for (int c = 0; c < 3; ++c) plate.at(x, y, c) = base[c];
      }
    }

    if (spec.kind == SceneKind::kDynamicTexture) {
      const double angle = 2.0 * std::numbers::pi * t / spec.texture_period;
      for (int y = 0; y < h; ++y) {
        for (int x = band_start; x < w; ++x) {
          double swing =
              std::sin(angle + flicker_phase.at(x, y)) * flicker_amp.at(x, y);
          for (int c = 0; c < 3; ++c)
            plate.at(x, y, c) = std::clamp(
                flicker_base.at(x, y, c) + flicker_scale[c] * swing, 0.0,
                255.0);
        }
      }
    }

    if (spec.kind == SceneKind::kIlluminationJump && t >= spec.jump_frame)
      for (double& v : plate.storage())
        v = std::clamp(v + spec.jump_amount, 0.0, 255.0);

    Frame frame(w, h, t);
    frame.pixels = plate;
    LabelMask gt(w, h, 1, kBackground);

    if (has_object && t >= spec.object_start_frame && spec.object_size > 0) {
      // The illumination step brightens the object along with the scene.
      double lift = spec.kind == SceneKind::kIlluminationJump &&
                            t >= spec.jump_frame
                        ? spec.jump_amount
                        : 0.0;
      int ox = detail::bounce(object_x0, object_vx, t - spec.object_start_frame,
                              object_extent_x);
      int oy = detail::bounce(object_y0, object_vy, t - spec.object_start_frame,
                              object_extent_y);
      for (int y = oy; y < oy + spec.object_size && y < h; ++y)
        for (int x = ox; x < ox + spec.object_size && x < w; ++x) {
          for (int c = 0; c < 3; ++c)
            frame.pixels.at(x, y, c) =
                std::clamp(object_color[c] + lift, 0.0, 255.0);
          gt.at(x, y) = kForeground;
        }
    }

    if (spec.kind == SceneKind::kOcclusion && t >= spec.occlusion_start &&
        t < spec.occlusion_start + spec.occlusion_frames) {
      int step = t - spec.occlusion_start;
      int ox = std::clamp(
          occluder_x0 + static_cast<int>(std::lround(spec.occluder_speed * step)),
          0, std::max(0, w - spec.occluder_size));
      int oy = occluder_y0;
      for (int y = oy; y < oy + spec.occluder_size && y < h; ++y)
        for (int x = ox; x < ox + spec.occluder_size && x < w; ++x) {
          for (int c = 0; c < 3; ++c) frame.pixels.at(x, y, c) = occluder_color[c];
          gt.at(x, y) = kForeground;
        }
    }

    if (spec.keep_clean_plate) sequence.clean_plate.push_back(plate);

    if (spec.noise_std > 0.0)
      for (double& v : frame.pixels.storage())
        v = std::clamp(v + spec.noise_std * rng.gaussian(), 0.0, 255.0);

    sequence.frames.push_back(std::move(frame));
    sequence.gt.push_back(std::move(gt));
  }
  return sequence;
}

}  // namespace vks
