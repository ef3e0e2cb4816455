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

#include <stdexcept>
#include <vector>

#include "vks/image.hpp"

namespace vks {

/// Removes 4-connected foreground components smaller than min_size pixels.
inline LabelMask filter_small_components(const LabelMask& mask, int min_size) {
  if (mask.channels() != 1)
    throw std::invalid_argument(
        "filter_small_components: mask must be single-channel");
  if (min_size <= 1) return mask;

  const int w = mask.width();
  const int h = mask.height();
  LabelMask filtered = mask;
  std::vector<uint8_t> visited(static_cast<size_t>(w) * h, 0);
  std::vector<int> stack;
  std::vector<int> component;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int start = y * w + x;
      if (mask.at(x, y) == kBackground || visited[start]) continue;
      stack.assign(1, start);
      component.clear();
      visited[start] = 1;
      while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        component.push_back(p);
        int px = p % w;
        int py = p / w;
        const int neighbors[4][2] = {
            {px - 1, py}, {px + 1, py}, {px, py - 1}, {px, py + 1}};
        for (const auto& n : neighbors) {
          if (n[0] < 0 || n[0] >= w || n[1] < 0 || n[1] >= h) continue;
          int q = n[1] * w + n[0];
          if (!visited[q] && mask.at(n[0], n[1]) != kBackground) {
            visited[q] = 1;
            stack.push_back(q);
          }
        }
      }
      if (static_cast<int>(component.size()) < min_size)
        for (int p : component)
          filtered.at(p % w, p / w) = kBackground;
    }
  }
  return filtered;
}

}  // namespace vks
