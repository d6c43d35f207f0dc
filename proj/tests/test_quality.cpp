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

#include "lichen/quality.hpp"
#include "lichen/rng.hpp"

using namespace lichen;

namespace {

Grid8 checkerboard(int h, int w) {
  Grid8 img(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) img.at(r, c) = (r + c) % 2 ? 255 : 0;
  return img;
}

// direct per-pixel Laplacian variance, no incremental accumulation tricks
double laplacian_variance_oracle(const Grid8& img) {
  std::vector<double> responses;
  for (int r = 1; r + 1 < img.height; ++r)
    for (int c = 1; c + 1 < img.width; ++c)
      responses.push_back(double(img.at(r - 1, c)) + img.at(r + 1, c) + img.at(r, c - 1) +
                          img.at(r, c + 1) - 4.0 * img.at(r, c));
  double mean = 0;
  for (double v : responses) mean += v;
  mean /= double(responses.size());
  double var = 0;
  for (double v : responses) var += (v - mean) * (v - mean);
  return var / double(responses.size());
}

Grid8 random_grid(Rng& rng, int h, int w) {
  Grid8 img(h, w);
  for (auto& p : img.pixels) p = uint8_t(rng.below(256));
  return img;
}

}  // namespace

TEST_CASE("quality_scores: constant inputs") {
  const QualityScores black = quality_scores(Grid8(8, 8, 0));
  CHECK(black.blur == 0.0);
  CHECK(black.darkness == 0.0);
  CHECK(black.snow == 0.0);

  const QualityScores white = quality_scores(Grid8(8, 8, 255));
  CHECK(white.blur == 0.0);
  CHECK(white.darkness == 255.0);
  CHECK(white.snow == 1.0);
}

TEST_CASE("quality_scores: grids under 3x3 are rejected") {
  CHECK_THROWS_AS(quality_scores(Grid8(2, 8)), error);
  CHECK_THROWS_AS(quality_scores(Grid8(8, 2)), error);
}

TEST_CASE("quality_scores: checkerboard matches the brute-force Laplacian oracle") {
  const Grid8 img = checkerboard(9, 11);
  const QualityScores s = quality_scores(img);
  CHECK(s.blur == doctest::Approx(laplacian_variance_oracle(img)).epsilon(1e-9));
}

TEST_CASE("quality_scores: random grids match the oracle and flip invariance holds") {
  Rng rng(41);
  for (int i = 0; i < 30; ++i) {
    const Grid8 img = random_grid(rng, 3 + int(rng.below(20)), 3 + int(rng.below(20)));
    const QualityScores s = quality_scores(img);
    CHECK(s.blur == doctest::Approx(laplacian_variance_oracle(img)).epsilon(1e-9));

    Grid8 hflip(img.height, img.width), vflip(img.height, img.width);
    for (int r = 0; r < img.height; ++r)
      for (int c = 0; c < img.width; ++c) {
        hflip.at(r, img.width - 1 - c) = img.at(r, c);
        vflip.at(img.height - 1 - r, c) = img.at(r, c);
      }
    for (const Grid8* g : {&hflip, &vflip}) {
      const QualityScores f = quality_scores(*g);
      CHECK(f.blur == doctest::Approx(s.blur).epsilon(1e-9));
      CHECK(f.darkness == s.darkness);
      CHECK(f.snow == s.snow);
    }
  }
}

TEST_CASE("filter_manifest: vacuous thresholds keep everything") {
  std::vector<std::pair<std::string, QualityScores>> scored{
      {"a", {5.0, 10.0, 0.9}}, {"b", {0.0, 0.0, 1.0}}};
  const FilterResult r = filter_manifest(scored, {0.0, 0.0, 1.0});
  CHECK(r.kept.size() == 2);
  CHECK(r.dropped.empty());
}

TEST_CASE("filter_manifest: dark image dropped with reason dark") {
  const QualityScores s = quality_scores(Grid8(8, 8, 0));
  const FilterResult r = filter_manifest({{"black", s}}, {0.0, 30.0, 1.0});
  REQUIRE(r.dropped.size() == 1);
  CHECK(r.reports[0].verdict == Verdict::drop_dark);
}

TEST_CASE("filter_manifest: first matching reason wins, blur before dark") {
  const FilterResult r = filter_manifest({{"both", {1.0, 1.0, 0.0}}}, {100.0, 30.0, 0.5});
  CHECK(r.reports[0].verdict == Verdict::drop_blurry);
}

TEST_CASE("filter_manifest: kept and dropped partition the input") {
  Rng rng(55);
  std::vector<std::pair<std::string, QualityScores>> scored;
  for (int i = 0; i < 100; ++i)
    scored.push_back({"img" + std::to_string(i),
                      {rng.uniform(0, 300), rng.uniform(0, 255), rng.uniform()}});
  const QualityThresholds thr{120, 40, 0.4};
  const FilterResult r = filter_manifest(scored, thr);
  CHECK(r.kept.size() + r.dropped.size() == scored.size());
  for (const auto& name : r.kept)
    CHECK(std::find(r.dropped.begin(), r.dropped.end(), name) == r.dropped.end());

  // monotone in thresholds: loosening never drops a previously kept image
  const FilterResult loose = filter_manifest(scored, {thr.min_blur - 50, thr.min_darkness - 20,
                                                      thr.max_snow + 0.3});
  for (const auto& name : r.kept)
    CHECK(std::find(loose.kept.begin(), loose.kept.end(), name) != loose.kept.end());
}
