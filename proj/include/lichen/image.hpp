// Copyright 2026 The lichenwatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LICHEN_IMAGE_HPP_
#define LICHEN_IMAGE_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "lichen/error.hpp"

namespace lichen {

/// 8-bit single-channel luminance grid, row-major.
struct Grid8 {
  int height = 0;
  int width = 0;
  std::vector<uint8_t> pixels;

  Grid8() = default;
  Grid8(int h, int w, uint8_t fill = 0) : height(h), width(w), pixels(size_t(h) * w, fill) {}

  uint8_t at(int row, int col) const { return pixels[size_t(row) * width + col]; }
  uint8_t& at(int row, int col) { return pixels[size_t(row) * width + col]; }

  bool operator==(const Grid8& o) const = default;
};

/// Rec.601 luminance, rounded to nearest integer.
inline uint8_t luminance601(uint8_t r, uint8_t g, uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return uint8_t(std::lround(y));
}

// ---------------------------------------------------------------------------
// Binary PGM (P5), the toolkit's lossless interchange format.
// ---------------------------------------------------------------------------

inline void write_pgm(const Grid8& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw error(errc::io, "cannot open for writing: " + path);
  f << "P5\n" << img.width << " " << img.height << "\n255\n";
  f.write(reinterpret_cast<const char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
  if (!f) throw error(errc::io, "write failed: " + path);
}

inline Grid8 read_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw error(errc::io, "cannot open: " + path);
  std::string magic;
  f >> magic;
  if (magic != "P5") throw error(errc::parse, "not a binary PGM: " + path);
  int w = 0, h = 0, maxval = 0;
  // Skip whitespace and '#' comment lines between header tokens.
  auto next_int = [&f, &path]() {
    int c = f.peek();
    while (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#') {
      if (c == '#') f.ignore(1 << 16, '\n');
      else f.get();
      c = f.peek();
    }
    int v;
    if (!(f >> v)) throw error(errc::parse, "truncated PGM header: " + path);
    return v;
  };
  w = next_int();
  h = next_int();
  maxval = next_int();
  if (w < 1 || h < 1 || maxval != 255) throw error(errc::parse, "unsupported PGM header: " + path);
  f.get();  // single whitespace after maxval
  Grid8 img(h, w);
  f.read(reinterpret_cast<char*>(img.pixels.data()), std::streamsize(img.pixels.size()));
  if (f.gcount() != std::streamsize(img.pixels.size()))
    throw error(errc::parse, "truncated PGM data: " + path);
  return img;
}

}  // namespace lichen

#endif  // LICHEN_IMAGE_HPP_
