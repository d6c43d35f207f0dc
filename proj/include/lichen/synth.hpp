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
#ifndef LICHEN_SYNTH_HPP_
#define LICHEN_SYNTH_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "lichen/dataset.hpp"
#include "lichen/image.hpp"
#include "lichen/mask.hpp"
#include "lichen/rng.hpp"
#include "lichen/timeutil.hpp"

namespace lichen {

struct Degradation {
  enum class Kind { none, blur, darken, snow };
  Kind kind = Kind::none;
  double param = 0.0;  // blur: sigma; darken: scale; snow: coverage fraction
};

struct SynthConfig {
  uint64_t seed = 7;
  int width = 256;
  int height = 256;
  int n_lichens = 3;
  int frames = 10;
  double growth_factor = 1.05;                    // per-frame area ratio
  std::vector<Degradation> schedule;              // per frame, missing entries mean none
  std::vector<std::string> species_codes = {"PP", "EP", "LP"};  // assigned round-robin
  UnixTime start_time = make_utc(2021, 6, 1, 8, 0);
  long long interval_seconds = 7200;              // 2-hour capture cadence
  std::string camera_id = "CAM1";
  int vertices = 24;
  double radial_jitter = 0.3;
  int noise_amplitude = 25;                       // per-pixel texture, +-amplitude
  uint8_t background_value = 110;

  void validate() const {
    if (growth_factor <= 0.0) throw error(errc::bad_parameter, "growth_factor must be > 0");
    if (n_lichens < 0) throw error(errc::bad_parameter, "n_lichens must be >= 0");
    if (frames < 1) throw error(errc::bad_parameter, "frames must be >= 1");
    if (species_codes.empty()) throw error(errc::bad_parameter, "need at least one species code");
    for (const Degradation& d : schedule)
      if (d.kind == Degradation::Kind::snow && (d.param < 0.0 || d.param > 1.0))
        throw error(errc::bad_parameter, "snow coverage must lie in [0,1]");
  }
};

struct LedgerEntry {
  int frame = 0;      // 0-based frame index
  int instance = 0;   // 0-based lichen index
  long long true_area_px = 0;
};

struct SynthResult {
  std::vector<Grid8> images;         // rendered frames, degradations applied
  Dataset dataset;                   // pre-degradation ground truth
  std::vector<ManifestRow> manifest;
  std::vector<LedgerEntry> ledger;
  std::vector<std::string> file_names;
};

namespace detail {

struct Thallus {
  double cx = 0, cy = 0;
  double base_radius = 0;
  std::vector<double> radial;  // per-vertex radius multiplier
  long long category_id = 0;
  uint8_t shade = 0;
};

inline Polygon thallus_polygon(const Thallus& t, double scale) {
  Polygon p;
  const size_t k = t.radial.size();
  for (size_t i = 0; i < k; ++i) {
    const double angle = 2.0 * 3.14159265358979323846 * double(i) / double(k);
    const double r = t.base_radius * t.radial[i] * scale;
    p.points.push_back({t.cx + r * std::cos(angle), t.cy + r * std::sin(angle)});
  }
  return p;
}

inline Grid8 gaussian_blur(const Grid8& img, double sigma) {
  const int radius = std::max(1, int(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double ksum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    ksum += kernel[i + radius];
  }
  for (double& k : kernel) k /= ksum;

  std::vector<double> tmp(img.pixels.size());
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int cc = std::clamp(c + i, 0, img.width - 1);
        acc += kernel[i + radius] * img.at(r, cc);
      }
      tmp[size_t(r) * img.width + c] = acc;
    }
  Grid8 out(img.height, img.width);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int rr = std::clamp(r + i, 0, img.height - 1);
        acc += kernel[i + radius] * tmp[size_t(rr) * img.width + c];
      }
      out.at(r, c) = uint8_t(std::clamp(std::lround(acc), 0L, 255L));
    }
  return out;
}

inline void apply_degradation(Grid8& img, const Degradation& deg, Rng& rng) {
  switch (deg.kind) {
    case Degradation::Kind::none:
      break;
    case Degradation::Kind::blur:
      img = gaussian_blur(img, deg.param);
      break;
    case Degradation::Kind::darken:
      for (uint8_t& p : img.pixels)
        p = uint8_t(std::clamp(std::lround(p * deg.param), 0L, 255L));
      break;
    case Degradation::Kind::snow: {
      std::vector<uint32_t> idx(img.pixels.size());
      for (uint32_t i = 0; i < idx.size(); ++i) idx[i] = i;
      rng.shuffle(idx);
      const size_t n = size_t(std::llround(deg.param * double(img.pixels.size())));
      for (size_t i = 0; i < n; ++i) img.pixels[idx[i]] = 255;
      break;
    }
  }
}

}  // namespace detail

/// Generates a deterministic synthetic time-lapse: star-convex thalli whose
/// area grows by growth_factor each frame, rendered over a noisy background,
/// with the scheduled per-frame degradations applied after rendering. The
/// ground-truth dataset and the area ledger always describe the
/// pre-degradation geometry.
inline SynthResult generate_sequence(const SynthConfig& cfg) {
  cfg.validate();
  Rng layout_rng(cfg.seed);

  const double final_scale = std::pow(std::sqrt(cfg.growth_factor), cfg.frames - 1);
  std::vector<detail::Thallus> thalli;
  const uint8_t shades[] = {170, 195, 150, 205, 140};
  for (int i = 0; i < cfg.n_lichens; ++i) {
    detail::Thallus t;
    t.base_radius = layout_rng.uniform(0.05, 0.09) * std::min(cfg.width, cfg.height);
    t.category_id = i % (long long)cfg.species_codes.size() + 1;
    t.shade = shades[i % 5];
    for (int v = 0; v < cfg.vertices; ++v)
      t.radial.push_back(1.0 + layout_rng.uniform(-cfg.radial_jitter, cfg.radial_jitter));

    const double reach = t.base_radius * (1.0 + cfg.radial_jitter) * final_scale;
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      t.cx = layout_rng.uniform(reach + 2.0, cfg.width - reach - 2.0);
      t.cy = layout_rng.uniform(reach + 2.0, cfg.height - reach - 2.0);
      placed = true;
      for (const detail::Thallus& other : thalli) {
        const double other_reach =
            other.base_radius * (1.0 + cfg.radial_jitter) * final_scale;
        const double dx = t.cx - other.cx, dy = t.cy - other.cy;
        if (std::sqrt(dx * dx + dy * dy) < reach + other_reach + 4.0) {
          placed = false;
          break;
        }
      }
    }
    if (!placed)
      throw error(errc::placement_failed,
                  "could not place lichen " + std::to_string(i) + " without overlap in 1000 attempts");
    thalli.push_back(std::move(t));
  }

  SynthResult out;
  for (size_t s = 0; s < cfg.species_codes.size(); ++s)
    out.dataset.categories.push_back({(long long)s + 1, cfg.species_codes[s], cfg.species_codes[s]});

  long long next_ann = 1;
  for (int f = 0; f < cfg.frames; ++f) {
    const double scale = std::pow(std::sqrt(cfg.growth_factor), f);
    const UnixTime t = cfg.start_time + f * cfg.interval_seconds;
    char name[64];
    std::snprintf(name, sizeof name, "synth_%s_f%04d.pgm", cfg.camera_id.c_str(), f);

    ImageRecord im;
    im.image_id = f + 1;
    im.file_name = name;
    im.width = cfg.width;
    im.height = cfg.height;
    im.camera_id = cfg.camera_id;
    im.captured_at = t;
    out.dataset.images.push_back(im);
    out.manifest.push_back({name, cfg.width, cfg.height, cfg.camera_id, format_iso8601(t)});
    out.file_names.push_back(name);

    // background texture; a fresh frame-keyed generator keeps every frame
    // reproducible independent of how many draws earlier frames consumed
    Rng frame_rng(cfg.seed ^ (uint64_t(f + 1) * 0x9E3779B97F4A7C15ULL));
    Grid8 img(cfg.height, cfg.width, cfg.background_value);
    for (uint8_t& p : img.pixels) {
      const int delta = int(frame_rng.below(uint32_t(2 * cfg.noise_amplitude + 1))) - cfg.noise_amplitude;
      p = uint8_t(std::clamp(int(p) + delta, 0, 255));
    }

    for (int i = 0; i < cfg.n_lichens; ++i) {
      const Polygon poly = detail::thallus_polygon(thalli[i], scale);
      const BitMask raster = rasterize(poly, cfg.height, cfg.width);
      for (int r = 0; r < cfg.height; ++r)
        for (int c = 0; c < cfg.width; ++c)
          if (raster.get(r, c)) {
            const int delta =
                int(frame_rng.below(uint32_t(2 * cfg.noise_amplitude + 1))) - cfg.noise_amplitude;
            img.at(r, c) = uint8_t(std::clamp(int(thalli[i].shade) + delta, 0, 255));
          }

      InstanceAnnotation ann;
      ann.ann_id = next_ann++;
      ann.image_id = im.image_id;
      ann.category_id = thalli[i].category_id;
      ann.box = bbox_of(raster);
      ann.mask = poly;
      out.dataset.annotations.push_back(std::move(ann));
      out.ledger.push_back({f, i, raster.area()});
    }

    if (f < (int)cfg.schedule.size()) detail::apply_degradation(img, cfg.schedule[f], frame_rng);
    out.images.push_back(std::move(img));
  }
  out.dataset.validate();
  return out;
}

inline SynthConfig synth_config_from_json(const json& j) {
  SynthConfig cfg;
  cfg.seed = j.value("seed", cfg.seed);
  cfg.width = j.value("width", cfg.width);
  cfg.height = j.value("height", cfg.height);
  cfg.n_lichens = j.value("n_lichens", cfg.n_lichens);
  cfg.frames = j.value("frames", cfg.frames);
  cfg.growth_factor = j.value("growth_factor", cfg.growth_factor);
  if (j.contains("species_codes"))
    cfg.species_codes = j["species_codes"].get<std::vector<std::string>>();
  if (j.contains("camera_id")) cfg.camera_id = j["camera_id"].get<std::string>();
  if (j.contains("start_time")) {
    auto t = parse_iso8601(j["start_time"].get<std::string>());
    if (!t) throw error(errc::parse, "bad start_time");
    cfg.start_time = *t;
  }
  cfg.interval_seconds = j.value("interval_seconds", cfg.interval_seconds);
  cfg.noise_amplitude = j.value("noise_amplitude", cfg.noise_amplitude);
  if (j.contains("schedule")) {
    for (const json& s : j["schedule"]) {
      Degradation d;
      const std::string kind = s.value("kind", "none");
      if (kind == "blur") d.kind = Degradation::Kind::blur;
      else if (kind == "darken") d.kind = Degradation::Kind::darken;
      else if (kind == "snow") d.kind = Degradation::Kind::snow;
      else if (kind != "none") throw error(errc::parse, "unknown degradation kind: " + kind);
      d.param = s.value("param", 0.0);
      cfg.schedule.push_back(d);
    }
  }
  return cfg;
}

}  // namespace lichen

#endif  // LICHEN_SYNTH_HPP_
