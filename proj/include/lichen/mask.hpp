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
#ifndef LICHEN_MASK_HPP_
#define LICHEN_MASK_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <variant>
#include <vector>

#include "lichen/error.hpp"

namespace lichen {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Simple polygon in image coordinates (origin top-left, y down), implicitly
/// closed. At least 3 vertices, all coordinates finite.
struct Polygon {
  std::vector<Point> points;

  void validate() const {
    if (points.size() < 3)
      throw error(errc::degenerate_polygon, "polygon needs at least 3 vertices, got " +
                                                std::to_string(points.size()));
    for (const Point& p : points)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw error(errc::invalid_geometry, "non-finite polygon coordinate");
  }
};

/// Dense binary mask, stored row-major.
class BitMask {
 public:
  BitMask() = default;
  BitMask(int height, int width) : height_(height), width_(width), bits_(size_t(height) * width, 0) {}

  int height() const { return height_; }
  int width() const { return width_; }

  bool get(int row, int col) const { return bits_[size_t(row) * width_ + col] != 0; }
  void set(int row, int col, bool v = true) { bits_[size_t(row) * width_ + col] = v ? 1 : 0; }

  const std::vector<uint8_t>& data() const { return bits_; }
  std::vector<uint8_t>& data() { return bits_; }

  long long area() const {
    long long n = 0;
    for (uint8_t b : bits_) n += b;
    return n;
  }

  bool empty_mask() const { return area() == 0; }

  bool operator==(const BitMask& o) const {
    return height_ == o.height_ && width_ == o.width_ && bits_ == o.bits_;
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<uint8_t> bits_;
};

/// COCO-compatible run-length encoding: mask flattened column-major, runs
/// alternating background first (counts[0] may be 0).
struct Rle {
  int height = 0;
  int width = 0;
  std::vector<long long> counts;
};

struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool operator==(const Box& o) const = default;
};

using MaskGeometry = std::variant<Polygon, Rle, BitMask>;

// ---------------------------------------------------------------------------
// Rasterization
// ---------------------------------------------------------------------------

/// Rasterizes a polygon to a bitmask. A pixel (row i, col j) is set iff its
/// center (j+0.5, i+0.5) lies inside the polygon under the even-odd rule;
/// geometry outside the grid is clipped.
inline BitMask rasterize(const Polygon& poly, int height, int width) {
  poly.validate();
  if (height < 1 || width < 1)
    throw error(errc::bad_parameter, "rasterize: grid dimensions must be >= 1");

  BitMask mask(height, width);
  const size_t n = poly.points.size();
  std::vector<double> xs;
  for (int row = 0; row < height; ++row) {
    const double yc = row + 0.5;
    xs.clear();
    // Half-open crossing rule [min,max) keeps vertex hits unambiguous.
    for (size_t k = 0; k < n; ++k) {
      const Point& a = poly.points[k];
      const Point& b = poly.points[(k + 1) % n];
      if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y)) {
        xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(xs.begin(), xs.end());
    // Fill between pairs of crossings.
    for (size_t k = 0; k + 1 < xs.size(); k += 2) {
      int first = int(std::ceil(xs[k] - 0.5));
      int last = int(std::ceil(xs[k + 1] - 0.5));  // exclusive
      first = std::max(first, 0);
      last = std::min(last, width);
      for (int col = first; col < last; ++col) mask.set(row, col);
    }
  }
  return mask;
}

/// Even-odd point-in-polygon test with the same half-open crossing rule as
/// rasterize().
inline bool contains(const Polygon& poly, double px, double py) {
  const size_t n = poly.points.size();
  bool inside = false;
  for (size_t k = 0; k < n; ++k) {
    const Point& a = poly.points[k];
    const Point& b = poly.points[(k + 1) % n];
    if ((a.y <= py && py < b.y) || (b.y <= py && py < a.y)) {
      const double cx = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y);
      if (cx > px) inside = !inside;
    }
  }
  return inside;
}

// ---------------------------------------------------------------------------
// Run-length codec
// ---------------------------------------------------------------------------

inline Rle rle_encode(const BitMask& mask) {
  Rle rle;
  rle.height = mask.height();
  rle.width = mask.width();
  long long run = 0;
  uint8_t value = 0;  // background first
  for (int col = 0; col < mask.width(); ++col) {
    for (int row = 0; row < mask.height(); ++row) {
      const uint8_t bit = mask.get(row, col) ? 1 : 0;
      if (bit == value) {
        ++run;
      } else {
        rle.counts.push_back(run);
        run = 1;
        value = bit;
      }
    }
  }
  rle.counts.push_back(run);
  if (rle.counts.empty()) rle.counts.push_back(0);
  return rle;
}

inline BitMask rle_decode(const Rle& rle) {
  const long long total = std::accumulate(rle.counts.begin(), rle.counts.end(), 0LL);
  if (total != (long long)rle.height * rle.width)
    throw error(errc::corrupt_rle, "rle counts sum to " + std::to_string(total) + ", expected " +
                                       std::to_string((long long)rle.height * rle.width));
  for (long long c : rle.counts)
    if (c < 0) throw error(errc::corrupt_rle, "negative run length");

  BitMask mask(rle.height, rle.width);
  long long pos = 0;
  uint8_t value = 0;
  for (long long c : rle.counts) {
    for (long long i = 0; i < c; ++i, ++pos) {
      const int col = int(pos / rle.height);
      const int row = int(pos % rle.height);
      if (value) mask.set(row, col);
    }
    value = !value;
  }
  return mask;
}

// ---------------------------------------------------------------------------
// Set operations, area, bounding box
// ---------------------------------------------------------------------------

inline void require_same_grid(const BitMask& a, const BitMask& b) {
  if (a.height() != b.height() || a.width() != b.width())
    throw error(errc::shape_mismatch,
                "mask grids differ: " + std::to_string(a.height()) + "x" + std::to_string(a.width()) +
                    " vs " + std::to_string(b.height()) + "x" + std::to_string(b.width()));
}

inline BitMask mask_intersect(const BitMask& a, const BitMask& b) {
  require_same_grid(a, b);
  BitMask out(a.height(), a.width());
  for (size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i] & b.data()[i];
  return out;
}

inline BitMask mask_union(const BitMask& a, const BitMask& b) {
  require_same_grid(a, b);
  BitMask out(a.height(), a.width());
  for (size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i] | b.data()[i];
  return out;
}

/// IoU of two binary masks on the same grid. Two empty masks give 0, not NaN,
/// so matchers stay total.
inline double mask_iou(const BitMask& a, const BitMask& b) {
  require_same_grid(a, b);
  long long inter = 0, uni = 0;
  for (size_t i = 0; i < a.data().size(); ++i) {
    inter += a.data()[i] & b.data()[i];
    uni += a.data()[i] | b.data()[i];
  }
  return uni == 0 ? 0.0 : double(inter) / double(uni);
}

/// Analytic box IoU on (x, y, w, h). Two empty boxes give 0.
inline double box_iou(const Box& a, const Box& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni <= 0.0 ? 0.0 : inter / uni;
}

/// Materializes any geometry encoding on the given grid.
inline BitMask to_bitmask(const MaskGeometry& g, int height, int width) {
  if (const Polygon* p = std::get_if<Polygon>(&g)) return rasterize(*p, height, width);
  if (const Rle* r = std::get_if<Rle>(&g)) {
    BitMask m = rle_decode(*r);
    if (m.height() != height || m.width() != width)
      throw error(errc::shape_mismatch, "rle grid does not match requested grid");
    return m;
  }
  const BitMask& m = std::get<BitMask>(g);
  if (m.height() != height || m.width() != width)
    throw error(errc::shape_mismatch, "bitmask grid does not match requested grid");
  return m;
}

inline long long area(const BitMask& m) { return m.area(); }

inline long long area(const MaskGeometry& g, int height, int width) {
  return to_bitmask(g, height, width).area();
}

/// Tightest axis-aligned box containing all set pixels; empty mask gives a
/// zero-extent box at the origin.
inline Box bbox_of(const BitMask& m) {
  int rmin = m.height(), rmax = -1, cmin = m.width(), cmax = -1;
  for (int r = 0; r < m.height(); ++r)
    for (int c = 0; c < m.width(); ++c)
      if (m.get(r, c)) {
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
      }
  if (rmax < 0) return Box{0, 0, 0, 0};
  return Box{double(cmin), double(rmin), double(cmax - cmin + 1), double(rmax - rmin + 1)};
}

inline Box bbox_of(const MaskGeometry& g, int height, int width) {
  return bbox_of(to_bitmask(g, height, width));
}

}  // namespace lichen

#endif  // LICHEN_MASK_HPP_
