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
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "vks/image.hpp"

namespace vks {

enum class FeatureMode { kRgb, kLabSiltp };

inline const char* to_string(FeatureMode mode) {
  return mode == FeatureMode::kRgb ? "rgb" : "lab+siltp";
}

struct FeatureConfig {
  FeatureMode mode = FeatureMode::kRgb;
  double siltp_tau = 0.05;
  std::array<int, 3> siltp_radii = {1, 2, 4};
};

/// Joint domain-range sample: pixel coordinates plus appearance channels.
/// Appearance layout: RGB mode uses [r, g, b]; LAB+SILTP mode uses
/// [L, a, b, code_r1, code_r2, code_r4] with texture codes stored as exact
/// small integers.
struct FeatureVector {
  double x = 0.0;
  double y = 0.0;
  std::array<double, 6> appearance{};
  int appearance_size = 3;
};

inline int appearance_dims(FeatureMode mode) {
  return mode == FeatureMode::kRgb ? 3 : 6;
}

// ============================ color conversion ============================

namespace detail {

inline double srgb_to_linear(double c8) {
  double c = c8 / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

inline double lab_f(double t) {
  constexpr double kDelta3 = 0.008856451679035631;   // (6/29)^3
  constexpr double kSlope = 1.0 / 0.12841854934601665;  // 1 / (3*(6/29)^2)
  return t > kDelta3 ? std::cbrt(t) : t * kSlope + 4.0 / 29.0;
}

}  // namespace detail

/// sRGB (D65, 8-bit range) to CIELAB, rescaled so every channel spans
/// [0,255]: L* is multiplied by 2.55 and a*/b* are offset by +128.
inline std::array<double, 3> rgb_to_lab(double r, double g, double b) {
  double rl = detail::srgb_to_linear(r);
  double gl = detail::srgb_to_linear(g);
  double bl = detail::srgb_to_linear(b);

  double x = 0.412453 * rl + 0.357580 * gl + 0.180423 * bl;
  double y = 0.212671 * rl + 0.715160 * gl + 0.072169 * bl;
  double z = 0.019334 * rl + 0.119193 * gl + 0.950227 * bl;

  constexpr double kXn = 0.950456;
  constexpr double kZn = 1.088754;

  double fx = detail::lab_f(x / kXn);
  double fy = detail::lab_f(y);
  double fz = detail::lab_f(z / kZn);

  double l_star = 116.0 * fy - 16.0;
  double a_star = 500.0 * (fx - fy);
  double b_star = 200.0 * (fy - fz);

  return {l_star * 2.55, a_star + 128.0, b_star + 128.0};
}

// ================================ SILTP ===================================

/// Scale-invariant local ternary pattern over the 8 neighbors on the square
/// ring at the given radius. Each neighbor contributes a 2-bit field:
/// 01 if brighter than (1+tau) * center, 10 if darker than (1-tau) * center,
/// 00 otherwise. Out-of-bounds neighbors replicate the nearest edge pixel.
struct SiltpCode {
  uint16_t code = 0;
  int radius = 0;
  double tau = 0.0;
};

namespace detail {

inline double gray_at(const Frame& frame, int x, int y) {
  auto px = frame.pixels.pixel(x, y);
  return (px[0] + px[1] + px[2]) / 3.0;
}

inline uint16_t siltp_from_gray(const Image<double>& gray, int x, int y,
                                int radius, double tau) {
  const int w = gray.width();
  const int h = gray.height();
  const double center = gray.at(x, y);
  const double hi = (1.0 + tau) * center;
  const double lo = (1.0 - tau) * center;

  static constexpr int kOffsets[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                         {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
  uint16_t code = 0;
  for (int k = 0; k < 8; ++k) {
    int nx = std::clamp(x + kOffsets[k][0] * radius, 0, w - 1);
    int ny = std::clamp(y + kOffsets[k][1] * radius, 0, h - 1);
    double n = gray.at(nx, ny);
    uint16_t field = n > hi ? 1u : (n < lo ? 2u : 0u);
    code = static_cast<uint16_t>(code | (field << (2 * k)));
  }
  return code;
}

}  // namespace detail

inline SiltpCode siltp_encode(const Frame& frame, int x, int y, int radius,
                              double tau) {
  if (!frame.pixels.in_bounds(x, y))
    throw std::invalid_argument("siltp_encode: pixel out of bounds");
  if (radius <= 0) throw std::invalid_argument("siltp_encode: radius must be positive");

  const int w = frame.width();
  const int h = frame.height();
  const double center = detail::gray_at(frame, x, y);
  const double hi = (1.0 + tau) * center;
  const double lo = (1.0 - tau) * center;

  static constexpr int kOffsets[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                         {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
  uint16_t code = 0;
  for (int k = 0; k < 8; ++k) {
    int nx = std::clamp(x + kOffsets[k][0] * radius, 0, w - 1);
    int ny = std::clamp(y + kOffsets[k][1] * radius, 0, h - 1);
    double n = detail::gray_at(frame, nx, ny);
    uint16_t field = n > hi ? 1u : (n < lo ? 2u : 0u);
    code = static_cast<uint16_t>(code | (field << (2 * k)));
  }
  return {code, radius, tau};
}

/// Number of 2-bit neighbor fields that differ between two codes (0..8).
inline int siltp_hamming(uint16_t a, uint16_t b) {
  uint32_t x = a ^ b;
  uint32_t nonzero_fields = (x | (x >> 1)) & 0x5555u;
  return std::popcount(nonzero_fields);
}

// ============================ feature planes ==============================

/// Per-frame feature rasters so window scans do not recompute conversions.
/// `color` holds raw RGB or rescaled LAB depending on the mode; `siltp`
/// holds one code plane per radius (LAB+SILTP mode only); `intensity` is the
/// grayscale mean (RGB mode) or the rescaled L channel (LAB+SILTP mode).
struct FeaturePlanes {
  FeatureMode mode = FeatureMode::kRgb;
  long frame_index = 0;
  Image<double> color;
  std::array<Image<uint16_t>, 3> siltp;
  Image<double> intensity;
};

inline FeaturePlanes build_feature_planes(const Frame& frame,
                                          const FeatureConfig& config) {
  const int w = frame.width();
  const int h = frame.height();
  FeaturePlanes planes;
  planes.mode = config.mode;
  planes.frame_index = frame.index;
  planes.color = Image<double>(w, h, 3);
  planes.intensity = Image<double>(w, h, 1);

  if (config.mode == FeatureMode::kRgb) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        auto px = frame.pixels.pixel(x, y);
        planes.color.at(x, y, 0) = px[0];
        planes.color.at(x, y, 1) = px[1];
        planes.color.at(x, y, 2) = px[2];
        planes.intensity.at(x, y) = (px[0] + px[1] + px[2]) / 3.0;
      }
    }
    return planes;
  }

  Image<double> gray(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto px = frame.pixels.pixel(x, y);
      auto lab = rgb_to_lab(px[0], px[1], px[2]);
      planes.color.at(x, y, 0) = lab[0];
      planes.color.at(x, y, 1) = lab[1];
      planes.color.at(x, y, 2) = lab[2];
      planes.intensity.at(x, y) = lab[0];
      gray.at(x, y) = (px[0] + px[1] + px[2]) / 3.0;
    }
  }
  for (int s = 0; s < 3; ++s) {
    planes.siltp[s] = Image<uint16_t>(w, h, 1);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        planes.siltp[s].at(x, y) = detail::siltp_from_gray(
            gray, x, y, config.siltp_radii[s], config.siltp_tau);
  }
  return planes;
}

inline FeatureVector feature_at(const FeaturePlanes& planes, int x, int y) {
  FeatureVector fv;
  fv.x = x;
  fv.y = y;
  auto color = planes.color.pixel(x, y);
  fv.appearance[0] = color[0];
  fv.appearance[1] = color[1];
  fv.appearance[2] = color[2];
  if (planes.mode == FeatureMode::kLabSiltp) {
    fv.appearance[3] = planes.siltp[0].at(x, y);
    fv.appearance[4] = planes.siltp[1].at(x, y);
    fv.appearance[5] = planes.siltp[2].at(x, y);
    fv.appearance_size = 6;
  } else {
    fv.appearance_size = 3;
  }
  return fv;
}

/// One-off extraction for a single pixel; the pipeline uses
/// build_feature_planes + feature_at, which produce identical values.
inline FeatureVector build_feature_vector(const Frame& frame, int x, int y,
                                          const FeatureConfig& config) {
  if (!frame.pixels.in_bounds(x, y))
    throw std::invalid_argument("build_feature_vector: pixel out of bounds");

  FeatureVector fv;
  fv.x = x;
  fv.y = y;
  auto px = frame.pixels.pixel(x, y);
  if (config.mode == FeatureMode::kRgb) {
    fv.appearance[0] = px[0];
    fv.appearance[1] = px[1];
    fv.appearance[2] = px[2];
    fv.appearance_size = 3;
    return fv;
  }
  auto lab = rgb_to_lab(px[0], px[1], px[2]);
  fv.appearance[0] = lab[0];
  fv.appearance[1] = lab[1];
  fv.appearance[2] = lab[2];
  for (int s = 0; s < 3; ++s)
    fv.appearance[3 + s] =
        siltp_encode(frame, x, y, config.siltp_radii[s], config.siltp_tau).code;
  fv.appearance_size = 6;
  return fv;
}

}  // namespace vks
