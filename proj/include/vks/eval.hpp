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

#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vks/image.hpp"

namespace vks {

struct FrameScore {
  long frame_index = -1;
  uint64_t tp = 0;
  uint64_t fp = 0;
  uint64_t fn = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f_measure = 1.0;
};

namespace detail {

inline void fill_metrics(FrameScore& score) {
  if (score.tp + score.fp > 0)
    score.precision = static_cast<double>(score.tp) / (score.tp + score.fp);
  else
    score.precision = score.fn == 0 ? 1.0 : 0.0;
  if (score.tp + score.fn > 0)
    score.recall = static_cast<double>(score.tp) / (score.tp + score.fn);
  else
    score.recall = score.fp == 0 ? 1.0 : 0.0;
  double denom = score.precision + score.recall;
  score.f_measure =
      denom > 0.0 ? 2.0 * score.precision * score.recall / denom : 0.0;
}

}  // namespace detail

/// Pixel-level precision/recall/F against a binary ground-truth mask.
/// Two empty masks score F = 1; exactly one empty mask scores F = 0.
inline FrameScore f_measure(const LabelMask& predicted, const LabelMask& truth,
                            long frame_index = -1) {
  if (!predicted.same_shape(truth))
    throw std::invalid_argument("f_measure: mask shapes differ");

  FrameScore score;
  score.frame_index = frame_index;
  const uint8_t* pred = predicted.data();
  const uint8_t* gt = truth.data();
  const size_t total = predicted.size();
  for (size_t i = 0; i < total; ++i) {
    bool p = pred[i] != kBackground;
    bool t = gt[i] != kBackground;
    if (p && t)
      ++score.tp;
    else if (p && !t)
      ++score.fp;
    else if (!p && t)
      ++score.fn;
  }
  detail::fill_metrics(score);
  return score;
}

struct EvalSummary {
  double mean_f = 1.0;       // average of per-frame F scores
  FrameScore pooled;         // metrics over summed counts
  size_t frames = 0;
};

inline EvalSummary summarize(std::span<const FrameScore> rows) {
  EvalSummary summary;
  summary.frames = rows.size();
  if (rows.empty()) return summary;
  double sum_f = 0.0;
  for (const FrameScore& row : rows) {
    sum_f += row.f_measure;
    summary.pooled.tp += row.tp;
    summary.pooled.fp += row.fp;
    summary.pooled.fn += row.fn;
  }
  summary.mean_f = sum_f / rows.size();
  detail::fill_metrics(summary.pooled);
  return summary;
}

/// Writes one CSV row per evaluated frame.
inline void write_report(const std::string& path,
                         std::span<const FrameScore> rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot open " + path);
  out << "frame_index,tp,fp,fn,precision,recall,f_measure\n";
  for (const FrameScore& row : rows)
    out << row.frame_index << ',' << row.tp << ',' << row.fp << ',' << row.fn
        << ',' << row.precision << ',' << row.recall << ',' << row.f_measure
        << '\n';
  if (!out) throw std::runtime_error("write_report: write failed: " + path);
}

}  // namespace vks
