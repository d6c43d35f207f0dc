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
#include <doctest.h>

#include "lichen/eval.hpp"
#include "lichen/monitor.hpp"
#include "lichen/quality.hpp"
#include "lichen/synth.hpp"

using namespace lichen;

namespace {

SynthConfig small_config() {
  SynthConfig cfg;
  cfg.seed = 11;
  cfg.width = 192;
  cfg.height = 192;
  cfg.n_lichens = 3;
  cfg.frames = 5;
  cfg.growth_factor = 1.1;
  return cfg;
}

std::vector<Detection> echo_detections(const SynthResult& sr) {
  std::vector<Detection> dets;
  for (const auto& a : sr.dataset.annotations) {
    const ImageRecord* im = sr.dataset.find_image(a.image_id);
    Detection det;
    det.image_id = a.image_id;
    det.category_id = a.category_id;
    det.score = 1.0;
    det.box = a.box;
    det.mask = to_bitmask(a.mask, im->height, im->width);
    dets.push_back(std::move(det));
  }
  return dets;
}

}  // namespace

TEST_CASE("generate_sequence: two runs of the same config are byte-identical") {
  const SynthResult a = generate_sequence(small_config());
  const SynthResult b = generate_sequence(small_config());
  REQUIRE(a.images.size() == b.images.size());
  for (size_t i = 0; i < a.images.size(); ++i) CHECK(a.images[i].pixels == b.images[i].pixels);
  REQUIRE(a.ledger.size() == b.ledger.size());
  for (size_t i = 0; i < a.ledger.size(); ++i)
    CHECK(a.ledger[i].true_area_px == b.ledger[i].true_area_px);
  CHECK(a.file_names == b.file_names);

  SynthConfig other = small_config();
  other.seed = 12;
  const SynthResult c = generate_sequence(other);
  CHECK(c.images[0].pixels != a.images[0].pixels);
}

TEST_CASE("generate_sequence: counts, naming, and metadata for 3 lichens x 5 frames") {
  const SynthResult sr = generate_sequence(small_config());
  CHECK(sr.images.size() == 5);
  CHECK(sr.dataset.images.size() == 5);
  CHECK(sr.dataset.annotations.size() == 15);
  CHECK(sr.manifest.size() == 5);
  CHECK(sr.ledger.size() == 15);
  CHECK(sr.file_names[0] == "synth_CAM1_f0000.pgm");
  CHECK(sr.file_names[4] == "synth_CAM1_f0004.pgm");
  // round-robin species over the three default codes
  CHECK(sr.dataset.annotations[0].category_id == 1);
  CHECK(sr.dataset.annotations[1].category_id == 2);
  CHECK(sr.dataset.annotations[2].category_id == 3);
  // 2-hour cadence from the configured start
  const long long t0 = *sr.dataset.images[0].captured_at;
  for (size_t i = 1; i < sr.dataset.images.size(); ++i)
    CHECK(*sr.dataset.images[i].captured_at - *sr.dataset.images[i - 1].captured_at == 7200);
  CHECK(t0 == make_utc(2021, 6, 1, 8, 0));
  sr.dataset.validate();
}

TEST_CASE("generate_sequence: per-frame area growth tracks the growth factor") {
  const SynthResult sr = generate_sequence(small_config());
  // ledger rows are frame-major: frame f holds entries [3f, 3f+3)
  for (int i = 0; i < 3; ++i)
    for (int f = 0; f + 1 < 5; ++f) {
      const double before = double(sr.ledger[3 * f + i].true_area_px);
      const double after = double(sr.ledger[3 * (f + 1) + i].true_area_px);
      CHECK(after / before == doctest::Approx(1.1).epsilon(0.03));
    }
}

TEST_CASE("generate_sequence: ground truth echoed back evaluates to perfect mAP") {
  const SynthResult sr = generate_sequence(small_config());
  const std::vector<Detection> dets = echo_detections(sr);
  for (EvalMode mode : {EvalMode::box, EvalMode::mask}) {
    EvalParams p;
    p.mode = mode;
    const EvalResult r = evaluate(sr.dataset, dets, p);
    CHECK(r.map == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.map50 == 1.0);
  }
}

TEST_CASE("generate_sequence: clean frames pass the default quality gate") {
  const SynthResult sr = generate_sequence(small_config());
  const QualityThresholds thr;
  for (const Grid8& img : sr.images)
    CHECK(classify(quality_scores(img), thr) == Verdict::keep);
}

TEST_CASE("generate_sequence: scheduled degradations trip the matching quality check") {
  SynthConfig cfg = small_config();
  cfg.schedule = {{Degradation::Kind::none, 0.0},
                  {Degradation::Kind::blur, 3.0},
                  {Degradation::Kind::darken, 0.2},
                  {Degradation::Kind::snow, 0.6}};
  const SynthResult sr = generate_sequence(cfg);
  const QualityThresholds thr;

  CHECK(classify(quality_scores(sr.images[0]), thr) == Verdict::keep);
  CHECK(classify(quality_scores(sr.images[1]), thr) == Verdict::drop_blurry);
  CHECK(classify(quality_scores(sr.images[2]), thr) == Verdict::drop_dark);
  CHECK(quality_scores(sr.images[3]).snow > 0.5);
  CHECK(classify(quality_scores(sr.images[3]), thr) == Verdict::drop_snow);
  CHECK(classify(quality_scores(sr.images[4]), thr) == Verdict::keep);

  // darken to zero blacks the frame out entirely
  SynthConfig dark = small_config();
  dark.frames = 1;
  dark.schedule = {{Degradation::Kind::darken, 0.0}};
  const SynthResult black = generate_sequence(dark);
  CHECK(quality_scores(black.images[0]).darkness == 0.0);
}

TEST_CASE("generate_sequence: degradations never alter the recorded ground truth") {
  SynthConfig clean = small_config();
  SynthConfig degraded = small_config();
  degraded.schedule = {{Degradation::Kind::blur, 2.0},
                       {Degradation::Kind::darken, 0.3},
                       {Degradation::Kind::snow, 0.5}};
  const SynthResult a = generate_sequence(clean);
  const SynthResult b = generate_sequence(degraded);
  REQUIRE(a.ledger.size() == b.ledger.size());
  for (size_t i = 0; i < a.ledger.size(); ++i)
    CHECK(a.ledger[i].true_area_px == b.ledger[i].true_area_px);
  CHECK(export_coco(a.dataset) == export_coco(b.dataset));
}

TEST_CASE("generate_sequence: tracker recovers every thallus with ledger-exact areas") {
  const SynthConfig cfg = small_config();
  const SynthResult sr = generate_sequence(cfg);
  const auto frames = frames_from_dataset(sr.dataset, cfg.camera_id);
  const auto tracks = link_instances(frames, LinkParams{});
  REQUIRE(tracks.size() == size_t(cfg.n_lichens));
  for (const Track& t : tracks) {
    REQUIRE(t.members.size() == size_t(cfg.frames));
    CHECK(t.gap_count == 0);
  }
  // track i follows thallus i-1 (tracks open in ascending annotation id)
  for (int i = 0; i < cfg.n_lichens; ++i)
    for (int f = 0; f < cfg.frames; ++f)
      CHECK(tracks[i].members[f].area_px == sr.ledger[3 * f + i].true_area_px);
}

TEST_CASE("generate_sequence: impossible placement raises placement_failed") {
  SynthConfig cfg;
  cfg.seed = 1;
  cfg.width = 64;
  cfg.height = 64;
  cfg.n_lichens = 20;
  cfg.frames = 3;
  try {
    generate_sequence(cfg);
    FAIL("expected a placement error");
  } catch (const error& e) {
    CHECK(e.code() == errc::placement_failed);
  }
}

TEST_CASE("generate_sequence: parameter validation") {
  SynthConfig cfg = small_config();
  cfg.growth_factor = 0.0;
  CHECK_THROWS_AS(generate_sequence(cfg), error);
  cfg = small_config();
  cfg.frames = 0;
  CHECK_THROWS_AS(generate_sequence(cfg), error);
  cfg = small_config();
  cfg.schedule = {{Degradation::Kind::snow, 1.5}};
  CHECK_THROWS_AS(generate_sequence(cfg), error);
}

TEST_CASE("synth_config_from_json: overrides and schedule parsing") {
  const json j = {{"seed", 99},
                  {"width", 128},
                  {"frames", 4},
                  {"growth_factor", 1.2},
                  {"species_codes", {"XX"}},
                  {"camera_id", "CAM9"},
                  {"start_time", "2022-01-02T03:04:05Z"},
                  {"schedule", {{{"kind", "blur"}, {"param", 2.5}}, {{"kind", "none"}}}}};
  const SynthConfig cfg = synth_config_from_json(j);
  CHECK(cfg.seed == 99);
  CHECK(cfg.width == 128);
  CHECK(cfg.height == 256);  // untouched default
  CHECK(cfg.frames == 4);
  CHECK(cfg.growth_factor == 1.2);
  CHECK(cfg.species_codes == std::vector<std::string>{"XX"});
  CHECK(cfg.camera_id == "CAM9");
  CHECK(cfg.start_time == make_utc(2022, 1, 2, 3, 4) + 5);
  REQUIRE(cfg.schedule.size() == 2);
  CHECK(cfg.schedule[0].kind == Degradation::Kind::blur);
  CHECK(cfg.schedule[0].param == 2.5);
  CHECK(cfg.schedule[1].kind == Degradation::Kind::none);

  CHECK_THROWS_AS(synth_config_from_json(json{{"schedule", {{{"kind", "fog"}}}}}), error);
  CHECK_THROWS_AS(synth_config_from_json(json{{"start_time", "yesterday"}}), error);
}
