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

#include "lichen/dataset.hpp"
#include "oracles.hpp"

using namespace lichen;

namespace {

json via_doc() {
  return json::parse(R"({
    "_via_img_metadata": {
      "cam1_001.jpg12345": {
        "filename": "cam1_001.jpg",
        "size": 12345,
        "regions": [
          {"shape_attributes": {"name": "polygon",
                                "all_points_x": [0, 4, 4, 0],
                                "all_points_y": [0, 0, 4, 4]},
           "region_attributes": {"species": "LP"}},
          {"shape_attributes": {"name": "rect", "x": 1, "y": 1, "width": 2, "height": 2},
           "region_attributes": {"species": "LP"}},
          {"shape_attributes": {"name": "polygon",
                                "all_points_x": [5, 9, 5],
                                "all_points_y": [5, 5, 9]},
           "region_attributes": {}}
        ]
      }
    }
  })");
}

std::vector<ManifestRow> via_manifest() {
  return {{"cam1_001.jpg", 16, 16, "CAM1", "2021-06-01T10:00:00Z"}};
}

Dataset small_dataset() {
  Dataset d;
  d.images.push_back({1, "a.jpg", 16, 16, "CAM1", make_utc(2021, 6, 1, 10, 0)});
  d.images.push_back({2, "b.jpg", 16, 16, "CAM1", make_utc(2021, 6, 1, 12, 0)});
  d.categories.push_back({1, "Pectenia plumbea", "PP"});
  d.categories.push_back({2, "Lobaria pulmonaria", "LP"});
  Polygon sq{{{2, 2}, {10, 2}, {10, 10}, {2, 10}}};
  d.annotations.push_back({1, 1, 1, sq, bbox_of(rasterize(sq, 16, 16))});
  Polygon tri{{{1, 1}, {9, 1}, {1, 9}}};
  d.annotations.push_back({2, 2, 2, tri, bbox_of(rasterize(tri, 16, 16))});
  return d;
}

}  // namespace

TEST_CASE("parse_via: polygon regions become annotations, others are reported") {
  const ViaParseResult r = parse_via(via_doc(), "species", via_manifest());
  CHECK(r.dataset.annotations.size() == 1);
  CHECK(r.dataset.categories.size() == 1);
  CHECK(r.dataset.categories[0].code == "LP");
  CHECK(r.dataset.images.size() == 1);
  CHECK(r.dataset.images[0].width == 16);
  REQUIRE(r.skipped.size() == 2);
  CHECK(r.skipped[0].reason == "unsupported-shape:rect");
  CHECK(r.skipped[1].reason == "missing-attribute:species");

  const Polygon& poly = std::get<Polygon>(r.dataset.annotations[0].mask);
  CHECK(poly.points.size() == 4);
  CHECK(area(r.dataset.annotations[0].mask, 16, 16) == 16);
}

TEST_CASE("parse_via: image absent from the manifest is an integrity error") {
  CHECK_THROWS_AS(parse_via(via_doc(), "species", {}), error);
}

TEST_CASE("coco round trip: empty and small datasets") {
  const json empty = export_coco(Dataset{});
  CHECK(empty["images"].empty());
  CHECK(empty["annotations"].empty());
  CHECK(empty["categories"].empty());

  const Dataset d = small_dataset();
  const json doc = export_coco(d);
  CHECK(doc["images"].size() == 2);
  CHECK(doc["annotations"].size() == 2);

  const Dataset back = parse_coco(doc);
  REQUIRE(back.images.size() == d.images.size());
  REQUIRE(back.annotations.size() == d.annotations.size());
  REQUIRE(back.categories.size() == d.categories.size());
  for (size_t i = 0; i < d.images.size(); ++i) {
    CHECK(back.images[i].image_id == d.images[i].image_id);
    CHECK(back.images[i].camera_id == d.images[i].camera_id);
    CHECK(back.images[i].captured_at == d.images[i].captured_at);
  }
  for (size_t i = 0; i < d.annotations.size(); ++i) {
    CHECK(back.annotations[i].category_id == d.annotations[i].category_id);
    CHECK(area(back.annotations[i].mask, 16, 16) == area(d.annotations[i].mask, 16, 16));
    CHECK(back.annotations[i].box == d.annotations[i].box);
  }
  for (size_t i = 0; i < d.categories.size(); ++i) CHECK(back.categories[i].code == d.categories[i].code);
}

TEST_CASE("coco round trip: via -> coco -> coco preserves counts, areas, codes") {
  const ViaParseResult r = parse_via(via_doc(), "species", via_manifest());
  const Dataset back = parse_coco(export_coco(r.dataset));
  CHECK(back.annotations.size() == r.dataset.annotations.size());
  CHECK(back.categories[0].code == "LP");
  CHECK(area(back.annotations[0].mask, 16, 16) == area(r.dataset.annotations[0].mask, 16, 16));
}

TEST_CASE("export_coco: dangling references are an integrity error") {
  Dataset d = small_dataset();
  d.annotations[0].image_id = 99;
  CHECK_THROWS_AS(export_coco(d), error);
}

TEST_CASE("parse_predictions: validation and ordering") {
  const Dataset d = small_dataset();
  CHECK(parse_predictions(json::array(), d).empty());

  json bad = json::array();
  bad.push_back({{"image_id", 1}, {"category_id", 1}, {"score", 1.5}, {"bbox", {0, 0, 2, 2}}});
  CHECK_THROWS_WITH_AS(parse_predictions(bad, d), doctest::Contains("entry 0"), error);

  json unknown = json::array();
  unknown.push_back({{"image_id", 42}, {"category_id", 1}, {"score", 0.5}, {"bbox", {0, 0, 2, 2}}});
  CHECK_THROWS_AS(parse_predictions(unknown, d), error);

  json three = json::array();
  for (double s : {0.2, 0.9, 0.5})
    three.push_back({{"image_id", 1}, {"category_id", 1}, {"score", s}, {"bbox", {0, 0, 2, 2}}});
  const auto dets = parse_predictions(three, d);
  REQUIRE(dets.size() == 3);
  CHECK(dets[0].score == 0.9);
  CHECK(dets[1].score == 0.5);
  CHECK(dets[2].score == 0.2);
}

TEST_CASE("parse_predictions: ordering does not depend on input order") {
  const Dataset d = small_dataset();
  json a = json::array(), b = json::array();
  const double scores[] = {0.3, 0.8, 0.1, 0.6};
  for (double s : scores)
    a.push_back({{"image_id", 2}, {"category_id", 1}, {"score", s}, {"bbox", {0, 0, 2, 2}}});
  for (int i = 3; i >= 0; --i)
    b.push_back({{"image_id", 2}, {"category_id", 1}, {"score", scores[i]}, {"bbox", {0, 0, 2, 2}}});
  const auto da = parse_predictions(a, d), db = parse_predictions(b, d);
  for (size_t i = 0; i < da.size(); ++i) CHECK(da[i].score == db[i].score);
}

TEST_CASE("resolve_timestamps: manifest column, filename pattern, failure path") {
  std::vector<ManifestRow> rows{
      {"x.jpg", 8, 8, "CAM1", "2021-06-01T10:00:00Z"},
      {"CAM3_20210601_1000.jpg", 8, 8, "CAM3", ""},
      {"nodate.jpg", 8, 8, "CAM1", ""},
  };
  const auto res = resolve_timestamps(rows, std::string(R"((\d{4})(\d{2})(\d{2})_(\d{2})(\d{2}))"));
  REQUIRE(res.images.size() == 2);
  CHECK(*res.images[0].captured_at == make_utc(2021, 6, 1, 10, 0));
  CHECK(*res.images[1].captured_at == make_utc(2021, 6, 1, 10, 0));
  REQUIRE(res.failed_files.size() == 1);
  CHECK(res.failed_files[0] == "nodate.jpg");
}

TEST_CASE("augment: hflip maps x-coordinates and keeps area") {
  Polygon p{{{1, 2}, {3, 2}, {3, 6}, {1, 6}}};
  InstanceAnnotation ann{1, 1, 1, p, bbox_of(rasterize(p, 10, 10))};
  const AugmentOutput out = augment(10, 10, {ann}, hflip_transform());
  REQUIRE(out.annotations.size() == 1);
  const Polygon& q = std::get<Polygon>(out.annotations[0].mask);
  CHECK(q.points[0].x == 9);
  CHECK(q.points[1].x == 7);
  CHECK(area(out.annotations[0].mask, 10, 10) == area(ann.mask, 10, 10));
}

TEST_CASE("augment: flips twice is the identity up to 1e-9") {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    Polygon p = oracle::random_polygon(rng, 10, 10, 6);
    InstanceAnnotation ann{1, 1, 1, p, bbox_of(rasterize(p, 24, 24))};
    for (const Transform& t : {hflip_transform(), vflip_transform()}) {
      const AugmentOutput once = augment(24, 24, {ann}, t);
      const AugmentOutput twice = augment(24, 24, once.annotations, t);
      REQUIRE(twice.annotations.size() == 1);
      const Polygon& q = std::get<Polygon>(twice.annotations[0].mask);
      for (size_t k = 0; k < p.points.size(); ++k) {
        CHECK(q.points[k].x == doctest::Approx(p.points[k].x).epsilon(1e-9));
        CHECK(q.points[k].y == doctest::Approx(p.points[k].y).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("augment: quarter turns preserve rasterized area exactly") {
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    Polygon p = oracle::random_polygon(rng, 12, 9, 7);
    InstanceAnnotation ann{1, 1, 1, p, bbox_of(rasterize(p, 20, 30))};
    const long long base_area = area(ann.mask, 20, 30);
    for (double deg : {90.0, 180.0, 270.0}) {
      const AugmentOutput out = augment(30, 20, {ann}, rotate_transform(deg));
      REQUIRE(out.annotations.size() == 1);
      CHECK(area(out.annotations[0].mask, out.height, out.width) == base_area);
    }
  }
}

TEST_CASE("augment: crop clipping matches the rasterize-then-crop oracle") {
  // square straddling the crop window edge
  Polygon p{{{3, 3}, {8, 3}, {8, 8}, {3, 8}}};
  InstanceAnnotation ann{1, 1, 1, p, bbox_of(rasterize(p, 10, 10))};
  const AugmentOutput out = augment(10, 10, {ann}, crop_transform(Box{0, 0, 5, 5}));
  REQUIRE(out.annotations.size() == 1);

  // oracle: rasterize on the full grid, then count pixels inside the window
  const BitMask full = oracle::rasterize(p, 10, 10);
  long long inside = 0;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) inside += full.get(r, c);
  CHECK(area(out.annotations[0].mask, out.height, out.width) == inside);
}

TEST_CASE("augment: random crops match the rasterize-then-crop oracle") {
  Rng rng(77);
  for (int i = 0; i < 30; ++i) {
    Polygon p = oracle::random_polygon(rng, rng.uniform(6, 18), rng.uniform(6, 18), 7);
    InstanceAnnotation ann{1, 1, 1, p, {}};
    const int x0 = int(rng.below(10)), y0 = int(rng.below(10));
    const int w = 4 + int(rng.below(24 - unsigned(x0) - 3)), h = 4 + int(rng.below(24 - unsigned(y0) - 3));
    const AugmentOutput out =
        augment(24, 24, {ann}, crop_transform(Box{double(x0), double(y0), double(w), double(h)}));
    const BitMask full = oracle::rasterize(p, 24, 24);
    long long inside = 0;
    for (int r = y0; r < y0 + h; ++r)
      for (int c = x0; c < x0 + w; ++c) inside += full.get(r, c);
    if (out.annotations.empty()) {
      CHECK(inside == 0);
      CHECK(out.dropped_ann_ids.size() == 1);
    } else {
      CHECK(area(out.annotations[0].mask, out.height, out.width) == inside);
    }
  }
}

TEST_CASE("augment: crop outside the image is rejected") {
  Polygon p{{{1, 1}, {3, 1}, {3, 3}}};
  InstanceAnnotation ann{1, 1, 1, p, {}};
  CHECK_THROWS_AS(augment(10, 10, {ann}, crop_transform(Box{5, 5, 10, 10})), error);
}

TEST_CASE("augment_image: grid transforms agree with geometry transforms") {
  Grid8 img(6, 4);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 4; ++c) img.at(r, c) = uint8_t(r * 4 + c);

  const Grid8 h = augment_image(img, hflip_transform());
  CHECK(h.at(0, 0) == img.at(0, 3));
  const Grid8 v = augment_image(img, vflip_transform());
  CHECK(v.at(0, 0) == img.at(5, 0));
  const Grid8 r90 = augment_image(img, rotate_transform(90));
  CHECK(r90.height == 4);
  CHECK(r90.width == 6);
  CHECK(r90.at(0, 5) == img.at(0, 0));  // (x,y) -> (H - y, x)
  const Grid8 crop = augment_image(img, crop_transform(Box{1, 2, 2, 3}));
  CHECK(crop.height == 3);
  CHECK(crop.width == 2);
  CHECK(crop.at(0, 0) == img.at(2, 1));
}
