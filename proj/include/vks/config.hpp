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

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vks/features.hpp"
#include "vks/model.hpp"
#include "vks/variance.hpp"

namespace vks {

enum class VarianceMode { kUniform, kVks, kVksCached };

inline const char* to_string(VarianceMode mode) {
  switch (mode) {
    case VarianceMode::kUniform: return "uniform";
    case VarianceMode::kVks: return "vks";
    default: return "vks-cached";
  }
}

inline VarianceMode parse_variance_mode(const std::string& name) {
  if (name == "uniform") return VarianceMode::kUniform;
  if (name == "vks") return VarianceMode::kVks;
  if (name == "vks-cached") return VarianceMode::kVksCached;
  throw std::invalid_argument("unknown variance mode: " + name);
}

inline FeatureMode parse_feature_mode(const std::string& name) {
  if (name == "rgb") return FeatureMode::kRgb;
  if (name == "lab+siltp") return FeatureMode::kLabSiltp;
  throw std::invalid_argument("unknown feature mode: " + name);
}

/// Full engine configuration. Config files hold one `key value` pair per
/// line with keys matching the field names; list values are comma-separated.
struct PipelineConfig {
  FeatureMode feature_mode = FeatureMode::kRgb;
  VarianceMode variance_mode = VarianceMode::kVks;

  // Background kernel candidate sets (true variances).
  std::vector<double> bg_sigma_spatial = {0.25, 0.75};
  std::vector<double> bg_sigma_rgb = {1.25, 3.75, 11.25};
  std::vector<double> bg_sigma_l = {1.25, 2.5, 5.0};
  std::vector<double> bg_sigma_ab = {1.0, 1.5};
  double bg_sigma_siltp = 0.75;

  // Fixed foreground kernel variances.
  double fg_sigma_spatial = 3.0;
  double fg_sigma_rgb = 3.75;
  double fg_sigma_l = 3.75;
  double fg_sigma_ab = 1.0;
  double fg_sigma_siltp = 0.75;

  double u = 1e-6;           // uniform foreground density
  double alpha_f = 0.5;      // mix of uniform vs kernel foreground score
  double tau_bf = 2.0;       // cached-path confidence ratio; inf always searches
  double lambda = 1.0;       // Potts smoothness weight
  double posterior_threshold = 0.5;
  int min_component_size = 15;

  int init_frames = 50;
  int init_samples = 5;      // background samples per pixel (N_B)
  int fg_frames = 5;         // foreground history span (N_F)

  double window_multiplier = 4.0;
  double siltp_tau = 0.05;
  std::array<int, 3> siltp_radii = {1, 2, 4};

  bool reset_enabled = false;
  double reset_intensity_threshold = 0.0;  // <= 0 selects the mode default

  bool conditional_bg_update = true;

  FeatureConfig features() const {
    return {feature_mode, siltp_tau, siltp_radii};
  }

  VarianceGrid grid() const {
    VarianceGrid grid;
    grid.mode = feature_mode;
    grid.spatial = bg_sigma_spatial;
    grid.siltp = bg_sigma_siltp;
    if (feature_mode == FeatureMode::kRgb) {
      for (double s : bg_sigma_rgb) grid.color.push_back({s, s});
    } else {
      for (double l : bg_sigma_l)
        for (double ab : bg_sigma_ab) grid.color.push_back({l, ab});
    }
    grid.normalize();
    return grid;
  }

  DiagonalCovariance foreground_sigma() const {
    if (feature_mode == FeatureMode::kRgb)
      return {fg_sigma_spatial, fg_sigma_rgb, fg_sigma_rgb, fg_sigma_siltp,
              feature_mode};
    return {fg_sigma_spatial, fg_sigma_l, fg_sigma_ab, fg_sigma_siltp,
            feature_mode};
  }

  ResetConfig reset() const {
    return {reset_enabled, reset_intensity_threshold};
  }

  void validate() const {
    grid().validate();
    foreground_sigma().validate();
    if (u <= 0.0) throw std::invalid_argument("config: u must be positive");
    if (alpha_f < 0.0 || alpha_f > 1.0)
      throw std::invalid_argument("config: alpha_f must lie in [0,1]");
    if (!(tau_bf >= 1.0))  // accepts +inf
      throw std::invalid_argument("config: tau_bf must be >= 1");
    if (lambda < 0.0)
      throw std::invalid_argument("config: lambda must be non-negative");
    if (posterior_threshold <= 0.0 || posterior_threshold >= 1.0)
      throw std::invalid_argument(
          "config: posterior_threshold must lie in (0,1)");
    if (min_component_size < 0)
      throw std::invalid_argument(
          "config: min_component_size must be non-negative");
    if (init_frames <= 0 || init_samples <= 0 || fg_frames <= 0)
      throw std::invalid_argument("config: frame counts must be positive");
    if (init_samples > init_frames)
      throw std::invalid_argument(
          "config: init_samples cannot exceed init_frames");
    if (window_multiplier <= 0.0)
      throw std::invalid_argument(
          "config: window_multiplier must be positive");
    if (siltp_tau <= 0.0)
      throw std::invalid_argument("config: siltp_tau must be positive");
    for (int r : siltp_radii)
      if (r <= 0)
        throw std::invalid_argument("config: siltp radii must be positive");
  }
};

// ============================ file parsing ================================

namespace detail {

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  if (values.empty()) throw std::invalid_argument("empty list value");
  return values;
}

inline bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "on") return true;
  if (text == "false" || text == "0" || text == "off") return false;
  throw std::invalid_argument("expected a boolean, got: " + text);
}

}  // namespace detail

/// Applies one key/value pair; unknown keys and malformed values throw.
inline void apply_config_value(PipelineConfig& config, const std::string& key,
                               const std::string& value) {
  try {
    if (key == "feature_mode") config.feature_mode = parse_feature_mode(value);
    else if (key == "variance_mode") config.variance_mode = parse_variance_mode(value);
    else if (key == "bg_sigma_spatial") config.bg_sigma_spatial = detail::parse_double_list(value);
    else if (key == "bg_sigma_rgb") config.bg_sigma_rgb = detail::parse_double_list(value);
    else if (key == "bg_sigma_l") config.bg_sigma_l = detail::parse_double_list(value);
    else if (key == "bg_sigma_ab") config.bg_sigma_ab = detail::parse_double_list(value);
    else if (key == "bg_sigma_siltp") config.bg_sigma_siltp = std::stod(value);
    else if (key == "fg_sigma_spatial") config.fg_sigma_spatial = std::stod(value);
    else if (key == "fg_sigma_rgb") config.fg_sigma_rgb = std::stod(value);
    else if (key == "fg_sigma_l") config.fg_sigma_l = std::stod(value);
    else if (key == "fg_sigma_ab") config.fg_sigma_ab = std::stod(value);
    else if (key == "fg_sigma_siltp") config.fg_sigma_siltp = std::stod(value);
    else if (key == "u") config.u = std::stod(value);
    else if (key == "alpha_f") config.alpha_f = std::stod(value);
    else if (key == "tau_bf") config.tau_bf = std::stod(value);
    else if (key == "lambda") config.lambda = std::stod(value);
    else if (key == "posterior_threshold") config.posterior_threshold = std::stod(value);
    else if (key == "min_component_size") config.min_component_size = std::stoi(value);
    else if (key == "init_frames") config.init_frames = std::stoi(value);
    else if (key == "init_samples") config.init_samples = std::stoi(value);
    else if (key == "fg_frames") config.fg_frames = std::stoi(value);
    else if (key == "window_multiplier") config.window_multiplier = std::stod(value);
    else if (key == "siltp_tau") config.siltp_tau = std::stod(value);
    else if (key == "siltp_radii") {
      auto radii = detail::parse_double_list(value);
      if (radii.size() != 3)
        throw std::invalid_argument("siltp_radii needs exactly 3 entries");
      for (int i = 0; i < 3; ++i)
        config.siltp_radii[i] = static_cast<int>(radii[i]);
    }
    else if (key == "reset_enabled") config.reset_enabled = detail::parse_bool(value);
    else if (key == "reset_intensity_threshold") config.reset_intensity_threshold = std::stod(value);
    else if (key == "conditional_bg_update") config.conditional_bg_update = detail::parse_bool(value);
    else throw std::invalid_argument("unknown config key: " + key);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value for config key " + key + ": " + value);
  }
}

/// Parses a flat key-value config file. Blank lines and `#` comments are
/// ignored; `key value` and `key = value` are both accepted.
inline void load_config_file(const std::string& path, PipelineConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    size_t eq = line.find('=');
    if (eq != std::string::npos) line[eq] = ' ';
    std::string key, value;
    std::stringstream stream(line);
    if (!(stream >> key)) continue;
    std::getline(stream, value);
    size_t begin = value.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(line_number) +
                                  ": missing value for key " + key);
    size_t end = value.find_last_not_of(" \t\r");
    value = value.substr(begin, end - begin + 1);
    apply_config_value(config, key, value);
  }
}

}  // namespace vks
