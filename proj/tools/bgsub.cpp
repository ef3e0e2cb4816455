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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vks/vks.hpp"

namespace fs = std::filesystem;

namespace {

std::optional<fs::path> find_ground_truth(const fs::path& gt_dir,
                                          const std::string& stem) {
  static const char* kExtensions[] = {".pgm", ".ppm", ".bmp"};
  static const char* kPrefixes[] = {"", "GT_", "gt_"};
  for (const char* prefix : kPrefixes)
    for (const char* ext : kExtensions) {
      fs::path candidate = gt_dir / (prefix + stem + ext);
      if (fs::exists(candidate)) return candidate;
    }
  return std::nullopt;
}

int run_synth(const std::string& out_dir, const std::string& kind,
              uint64_t seed, int frames, int size, double noise) {
  vks::SynthSpec spec;
  spec.kind = vks::parse_scene_kind(kind);
  spec.seed = seed;
  spec.frame_count = frames;
  spec.width = size;
  spec.height = size;
  spec.noise_std = noise;

  vks::SynthSequence sequence = vks::synth_generate(spec);

  fs::create_directories(fs::path(out_dir) / "frames");
  fs::create_directories(fs::path(out_dir) / "gt");
  char name[64];
  for (int t = 0; t < spec.frame_count; ++t) {
    std::snprintf(name, sizeof(name), "frame_%06d", t);
    vks::write_ppm((fs::path(out_dir) / "frames" / (std::string(name) + ".ppm"))
                       .string(),
                   vks::frame_to_rgb8(sequence.frames[t]));
    vks::write_pgm(
        (fs::path(out_dir) / "gt" / (std::string(name) + ".pgm")).string(),
        sequence.gt[t]);
  }
  std::cout << "wrote " << spec.frame_count << " frames to " << out_dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bgsub: background subtraction with per-pixel adaptive kernel "
      "variances"};
  app.require_subcommand(0, 1);

  std::string input_dir, out_dir, config_path, gt_dir, report_path;
  std::string features, mode;
  int init_frames = 0;

  app.add_option("--input", input_dir, "directory of ordered input frames");
  app.add_option("--out", out_dir, "directory for mask/posterior images");
  app.add_option("--config", config_path, "key-value config file");
  app.add_option("--gt", gt_dir, "directory of ground-truth masks");
  app.add_option("--report", report_path, "per-frame metrics CSV");
  auto* features_opt = app.add_option("--features", features,
                                      "feature mode: rgb or lab+siltp");
  auto* mode_opt = app.add_option(
      "--mode", mode, "variance mode: uniform, vks, or vks-cached");
  auto* init_opt =
      app.add_option("--init-frames", init_frames, "initialization window");

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic sequence");
  std::string synth_out, synth_kind = "dynamic-texture";
  uint64_t synth_seed = 1;
  int synth_frames = 150, synth_size = 64;
  double synth_noise = 2.0;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--kind", synth_kind,
                    "static, dynamic-texture, occlusion, illumination-jump");
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--frames", synth_frames, "frame count");
  synth->add_option("--size", synth_size, "frame width and height");
  synth->add_option("--noise", synth_noise, "sensor noise std");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed())
      return run_synth(synth_out, synth_kind, synth_seed, synth_frames,
                       synth_size, synth_noise);

    if (input_dir.empty()) {
      std::cerr << "error: --input is required (or use the synth subcommand)\n";
      return 1;
    }

    vks::PipelineConfig config;
    if (!config_path.empty()) vks::load_config_file(config_path, config);
    if (features_opt->count())
      config.feature_mode = vks::parse_feature_mode(features);
    if (mode_opt->count()) config.variance_mode = vks::parse_variance_mode(mode);
    if (init_opt->count()) config.init_frames = init_frames;

    std::vector<fs::path> files = vks::list_images(input_dir);
    if (files.empty()) {
      std::cerr << "error: no frames found in " << input_dir << "\n";
      return 1;
    }
    if (static_cast<int>(files.size()) < config.init_frames) {
      std::cerr << "warning: only " << files.size()
                << " frames available; shrinking initialization window from "
                << config.init_frames << "\n";
      config.init_frames = static_cast<int>(files.size());
      if (config.init_samples > config.init_frames)
        config.init_samples = config.init_frames;
    }

    std::cout << "bgsub: " << files.size() << " frames, features="
              << vks::to_string(config.feature_mode)
              << ", mode=" << vks::to_string(config.variance_mode)
              << ", init_frames=" << config.init_frames << "\n";

    if (!out_dir.empty()) fs::create_directories(out_dir);

    vks::Engine engine(config);
    std::vector<vks::FrameScore> scores;
    double total_ms = 0.0;
    double search_fraction_sum = 0.0;
    long classified = 0;

    for (size_t i = 0; i < files.size(); ++i) {
      vks::Frame frame =
          vks::to_frame(vks::read_image(files[i].string()), static_cast<long>(i));
      std::optional<vks::FrameResult> result = engine.feed(frame);
      if (!result) continue;

      ++classified;
      total_ms += result->elapsed_ms;
      search_fraction_sum += result->search_fraction;
      std::string stem = files[i].stem().string();

      if (!out_dir.empty()) {
        vks::write_pgm((fs::path(out_dir) / (stem + "_mask.pgm")).string(),
                       result->mask);
        vks::write_pgm(
            (fs::path(out_dir) / (stem + "_posterior.pgm")).string(),
            vks::posterior_to_gray(result->posterior));
      }

      if (!gt_dir.empty()) {
        std::optional<fs::path> gt_path = find_ground_truth(gt_dir, stem);
        if (gt_path) {
          vks::LabelMask truth =
              vks::to_mask(vks::read_image(gt_path->string()));
          scores.push_back(
              vks::f_measure(result->mask, truth, static_cast<long>(i)));
        }
      }
    }

    if (classified == 0) {
      std::cerr << "warning: sequence ended before classification began\n";
      return 0;
    }

    std::cout << "classified " << classified << " frames, avg "
              << total_ms / classified << " ms/frame";
    if (config.variance_mode == vks::VarianceMode::kVksCached)
      std::cout << ", search fraction "
                << search_fraction_sum / classified;
    std::cout << "\n";

    if (!scores.empty()) {
      vks::EvalSummary summary = vks::summarize(scores);
      std::cout << "evaluated " << summary.frames
                << " frames: mean F = " << summary.mean_f
                << ", pooled F = " << summary.pooled.f_measure
                << " (P = " << summary.pooled.precision
                << ", R = " << summary.pooled.recall << ")\n";
    }
    if (!report_path.empty()) {
      vks::write_report(report_path, scores);
      std::cout << "report written to " << report_path << "\n";
    }
    return 0;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
}
