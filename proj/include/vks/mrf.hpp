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
#include <cmath>
#include <stdexcept>

#include "vks/image.hpp"
#include "vks/maxflow.hpp"

namespace vks {

constexpr double kMrfLogEpsilon = 1e-10;

/// Negative log-likelihood unaries for the two labels, with posteriors
/// clamped away from 0/1 so the terms stay finite.
inline double unary_background(double p_bg, double epsilon = kMrfLogEpsilon) {
  return -std::log(std::max(p_bg, epsilon));
}
inline double unary_foreground(double p_bg, double epsilon = kMrfLogEpsilon) {
  return -std::log(std::max(1.0 - p_bg, epsilon));
}

/// Exact MAP smoothing of the posterior map under a Potts model on the
/// 4-neighborhood: E(l) = sum_p U_p(l_p) + lambda * |{(p,q) : l_p != l_q}|,
/// minimized by a single min-cut. Pixels on the source side of the cut are
/// background. A posterior of exactly 0.5 labels foreground, matching the
/// plain-threshold convention.
inline LabelMask mrf_smooth(const PosteriorMap& posterior, double lambda,
                            double epsilon = kMrfLogEpsilon) {
  if (posterior.channels() != 1)
    throw std::invalid_argument("mrf_smooth: posterior must be single-channel");
  if (lambda < 0.0)
    throw std::invalid_argument("mrf_smooth: lambda must be non-negative");

  const int w = posterior.width();
  const int h = posterior.height();
  const int pixels = w * h;
  const int source = pixels;
  const int sink = pixels + 1;

  MaxFlow graph(pixels + 2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int p = y * w + x;
      double p_bg = posterior.at(x, y);
      graph.add_edge(source, p, unary_foreground(p_bg, epsilon));
      graph.add_edge(p, sink, unary_background(p_bg, epsilon));
      if (lambda > 0.0) {
        if (x + 1 < w) graph.add_edge(p, p + 1, lambda, lambda);
        if (y + 1 < h) graph.add_edge(p, p + w, lambda, lambda);
      }
    }
  }
  graph.solve(source, sink);

  LabelMask mask(w, h, 1, kBackground);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (!graph.source_side(y * w + x)) mask.at(x, y) = kForeground;
  return mask;
}

}  // namespace vks
