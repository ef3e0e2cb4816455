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
#include <span>
#include <stdexcept>
#include <vector>

namespace vks {

/// Dense row-major raster with interleaved channels.
template <typename T>
class Image {
 public:
  Image() = default;

  Image(int width, int height, int channels = 1, T fill = T{})
      : width_(width), height_(height), channels_(channels) {
    if (width <= 0 || height <= 0 || channels <= 0)
      throw std::invalid_argument("Image: dimensions must be positive");
    data_.assign(static_cast<size_t>(width) * height * channels, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  size_t size() const { return data_.size(); }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  T& at(int x, int y, int c = 0) {
    return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
  }
  const T& at(int x, int y, int c = 0) const {
    return data_[(static_cast<size_t>(y) * width_ + x) * channels_ + c];
  }

  /// All channels of one pixel.
  std::span<T> pixel(int x, int y) {
    return {&data_[(static_cast<size_t>(y) * width_ + x) * channels_],
            static_cast<size_t>(channels_)};
  }
  std::span<const T> pixel(int x, int y) const {
    return {&data_[(static_cast<size_t>(y) * width_ + x) * channels_],
            static_cast<size_t>(channels_)};
  }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  friend bool operator==(const Image& a, const Image& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.channels_ == b.channels_ && a.data_ == b.data_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<T> data_;
};

/// Raw video frame: 3 interleaved channels, values in [0,255].
/// Values are kept in doubles so synthetic real-valued intensities pass
/// through the feature encoders without quantization.
struct Frame {
  Image<double> pixels;
  long index = 0;

  Frame() = default;
  Frame(int width, int height, long frame_index = 0)
      : pixels(width, height, 3), index(frame_index) {}

  int width() const { return pixels.width(); }
  int height() const { return pixels.height(); }
};

/// Binary mask; 0 = background, 255 = foreground.
using LabelMask = Image<uint8_t>;

constexpr uint8_t kForeground = 255;
constexpr uint8_t kBackground = 0;

/// Per-pixel P(bg | a) in [0,1].
using PosteriorMap = Image<double>;

}  // namespace vks
