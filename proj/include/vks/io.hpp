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
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vks/image.hpp"

namespace vks {

namespace detail {

inline void skip_pnm_whitespace(std::istream& in) {
  while (true) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

inline int read_pnm_int(std::istream& in) {
  skip_pnm_whitespace(in);
  int value = 0;
  if (!(in >> value)) throw std::runtime_error("corrupt PNM header");
  return value;
}

inline Image<uint8_t> read_pnm(std::istream& in, const std::string& path) {
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw std::runtime_error("not a binary PNM file: " + path);
  const int channels = magic[1] == '6' ? 3 : 1;
  int w = read_pnm_int(in);
  int h = read_pnm_int(in);
  int maxval = read_pnm_int(in);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
    throw std::runtime_error("unsupported PNM geometry in " + path);
  in.get();  // single whitespace before raster data

  Image<uint8_t> image(w, h, channels);
  in.read(reinterpret_cast<char*>(image.data()),
          static_cast<std::streamsize>(image.size()));
  if (static_cast<size_t>(in.gcount()) != image.size())
    throw std::runtime_error("truncated PNM data in " + path);
  return image;
}

inline uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}
inline uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

inline Image<uint8_t> read_bmp(std::istream& in, const std::string& path) {
  std::vector<uint8_t> raw((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
  if (raw.size() < 54 || raw[0] != 'B' || raw[1] != 'M')
    throw std::runtime_error("not a BMP file: " + path);

  uint32_t data_offset = read_u32(&raw[10]);
  uint32_t header_size = read_u32(&raw[14]);
  if (header_size < 40) throw std::runtime_error("unsupported BMP header in " + path);
  int32_t width = static_cast<int32_t>(read_u32(&raw[18]));
  int32_t height_raw = static_cast<int32_t>(read_u32(&raw[22]));
  uint16_t bpp = read_u16(&raw[28]);
  uint32_t compression = read_u32(&raw[30]);
  if (width <= 0 || height_raw == 0 || compression != 0 ||
      (bpp != 24 && bpp != 8))
    throw std::runtime_error("unsupported BMP variant in " + path);

  const bool bottom_up = height_raw > 0;
  const int height = bottom_up ? height_raw : -height_raw;

  const uint8_t* palette = nullptr;
  if (bpp == 8) {
    uint32_t colors = read_u32(&raw[46]);
    if (colors == 0) colors = 256;
    palette = &raw[14 + header_size];
    if (14 + header_size + colors * 4 > raw.size())
      throw std::runtime_error("truncated BMP palette in " + path);
  }

  const size_t stride = ((static_cast<size_t>(width) * bpp + 31) / 32) * 4;
  if (data_offset + stride * height > raw.size())
    throw std::runtime_error("truncated BMP data in " + path);

  Image<uint8_t> image(width, height, 3);
  for (int y = 0; y < height; ++y) {
    const uint8_t* row =
        &raw[data_offset + stride * (bottom_up ? height - 1 - y : y)];
    for (int x = 0; x < width; ++x) {
      if (bpp == 24) {
        image.at(x, y, 0) = row[x * 3 + 2];  // BMP stores BGR
        image.at(x, y, 1) = row[x * 3 + 1];
        image.at(x, y, 2) = row[x * 3 + 0];
      } else {
        const uint8_t* entry = &palette[row[x] * 4];
        image.at(x, y, 0) = entry[2];
        image.at(x, y, 1) = entry[1];
        image.at(x, y, 2) = entry[0];
      }
    }
  }
  return image;
}

}  // namespace detail

/// Reads a PPM (P6), PGM (P5), or uncompressed BMP image.
inline Image<uint8_t> read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open image: " + path);
  int first = in.peek();
  if (first == 'P') return detail::read_pnm(in, path);
  if (first == 'B') return detail::read_bmp(in, path);
  throw std::runtime_error("unsupported image format: " + path);
}

inline void write_pgm(const std::string& path, const Image<uint8_t>& image) {
  if (image.channels() != 1)
    throw std::invalid_argument("write_pgm: image must be single-channel");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image: " + path);
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data()),
            static_cast<std::streamsize>(image.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline void write_ppm(const std::string& path, const Image<uint8_t>& image) {
  if (image.channels() != 3)
    throw std::invalid_argument("write_ppm: image must have 3 channels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image: " + path);
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data()),
            static_cast<std::streamsize>(image.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ============================= conversions ================================

inline Frame to_frame(const Image<uint8_t>& rgb, long index) {
  if (rgb.channels() != 3)
    throw std::invalid_argument("to_frame: expected a 3-channel image");
  Frame frame(rgb.width(), rgb.height(), index);
  const uint8_t* src = rgb.data();
  double* dst = frame.pixels.data();
  for (size_t i = 0; i < rgb.size(); ++i) dst[i] = src[i];
  return frame;
}

inline Image<uint8_t> frame_to_rgb8(const Frame& frame) {
  Image<uint8_t> out(frame.width(), frame.height(), 3);
  const double* src = frame.pixels.data();
  uint8_t* dst = out.data();
  for (size_t i = 0; i < out.size(); ++i)
    dst[i] = static_cast<uint8_t>(std::lround(std::clamp(src[i], 0.0, 255.0)));
  return out;
}

/// Any image to a binary mask: a pixel is foreground when its channel mean
/// exceeds half intensity.
inline LabelMask to_mask(const Image<uint8_t>& image) {
  LabelMask mask(image.width(), image.height(), 1, kBackground);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      auto px = image.pixel(x, y);
      int sum = 0;
      for (uint8_t v : px) sum += v;
      if (sum > 127 * image.channels()) mask.at(x, y) = kForeground;
    }
  }
  return mask;
}

inline Image<uint8_t> posterior_to_gray(const PosteriorMap& posterior) {
  Image<uint8_t> out(posterior.width(), posterior.height(), 1);
  const double* src = posterior.data();
  uint8_t* dst = out.data();
  for (size_t i = 0; i < out.size(); ++i) {
    double p_fg = 1.0 - std::clamp(src[i], 0.0, 1.0);
    dst[i] = static_cast<uint8_t>(std::lround(255.0 * p_fg));
  }
  return out;
}

// ============================== directories ===============================

inline bool has_image_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".ppm" || ext == ".pgm" || ext == ".bmp";
}

/// Image files in a directory, sorted by filename.
inline std::vector<std::filesystem::path> list_images(
    const std::string& directory) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory))
    throw std::runtime_error("not a directory: " + directory);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && has_image_extension(entry.path()))
      files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) {
              return a.filename().string() < b.filename().string();
            });
  return files;
}

}  // namespace vks
