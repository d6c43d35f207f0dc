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
#ifndef LICHEN_QUALITY_HPP_
#define LICHEN_QUALITY_HPP_

#include <string>
#include <vector>

#include "lichen/error.hpp"
#include "lichen/image.hpp"

namespace lichen {

struct QualityScores {
  double blur = 0.0;      // population variance of the 3x3 Laplacian response
  double darkness = 0.0;  // mean luminance, 0..255
  double snow = 0.0;      // fraction of pixels with luminance >= 230
};

struct QualityThresholds {
  double min_blur = 100.0;
  double min_darkness = 30.0;
  double max_snow = 0.5;
};

enum class Verdict { keep, drop_blurry, drop_dark, drop_snow };

inline const char* verdict_reason(Verdict v) {
  switch (v) {
    case Verdict::drop_blurry: return "blurry";
    case Verdict::drop_dark: return "dark";
    case Verdict::drop_snow: return "snow";
    default: return "";
  }
}

struct QualityReport {
  std::string file_name;
  QualityScores scores;
  Verdict verdict = Verdict::keep;
};

inline constexpr int kSnowLuminance = 230;

/// Blur, darkness and snow scores of a luminance grid. Blur is the population
/// variance of the discrete Laplacian [[0,1,0],[1,-4,1],[0,1,0]] over the
/// valid (interior) region.
inline QualityScores quality_scores(const Grid8& img) {
  if (img.height < 3 || img.width < 3)
    throw error(errc::too_small, "quality scoring needs at least a 3x3 grid");

  QualityScores s;
  double lum_sum = 0.0;
  long long bright = 0;
  for (uint8_t p : img.pixels) {
    lum_sum += p;
    if (p >= kSnowLuminance) ++bright;
  }
  const double n_pixels = double(img.pixels.size());
  s.darkness = lum_sum / n_pixels;
  s.snow = double(bright) / n_pixels;

  const long long n_valid = (long long)(img.height - 2) * (img.width - 2);
  double sum = 0.0, sumsq = 0.0;
  for (int r = 1; r + 1 < img.height; ++r) {
    for (int c = 1; c + 1 < img.width; ++c) {
      const double lap = double(img.at(r - 1, c)) + img.at(r + 1, c) + img.at(r, c - 1) +
                         img.at(r, c + 1) - 4.0 * img.at(r, c);
      sum += lap;
      sumsq += lap * lap;
    }
  }
  const double mean = sum / double(n_valid);
  s.blur = sumsq / double(n_valid) - mean * mean;
  if (s.blur < 0.0) s.blur = 0.0;  // guard fp cancellation on constant inputs
  return s;
}

inline Verdict classify(const QualityScores& s, const QualityThresholds& t) {
  if (s.blur < t.min_blur) return Verdict::drop_blurry;
  if (s.darkness < t.min_darkness) return Verdict::drop_dark;
  if (s.snow > t.max_snow) return Verdict::drop_snow;
  return Verdict::keep;
}

struct FilterResult {
  std::vector<QualityReport> reports;       // one per input, input order
  std::vector<std::string> kept;
  std::vector<std::string> dropped;
};

/// Applies thresholds to pre-computed scores. First matching drop reason wins
/// (blurry, then dark, then snow).
inline FilterResult filter_manifest(const std::vector<std::pair<std::string, QualityScores>>& scored,
                                    const QualityThresholds& thresholds) {
  FilterResult out;
  for (const auto& [name, scores] : scored) {
    QualityReport rep;
    rep.file_name = name;
    rep.scores = scores;
    rep.verdict = classify(scores, thresholds);
    if (rep.verdict == Verdict::keep) out.kept.push_back(name);
    else out.dropped.push_back(name);
    out.reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace lichen

#endif  // LICHEN_QUALITY_HPP_
