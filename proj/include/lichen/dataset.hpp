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
#ifndef LICHEN_DATASET_HPP_
#define LICHEN_DATASET_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lichen/error.hpp"
#include "lichen/image.hpp"
#include "lichen/mask.hpp"
#include "lichen/timeutil.hpp"

namespace lichen {

using json = nlohmann::json;

struct ImageRecord {
  long long image_id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::string camera_id;
  std::optional<UnixTime> captured_at;
};

struct Category {
  long long category_id = 0;
  std::string name;
  std::string code;  // short label, e.g. PP, EP, LP
};

struct InstanceAnnotation {
  long long ann_id = 0;
  long long image_id = 0;
  long long category_id = 0;
  MaskGeometry mask;
  Box box;
};

struct Detection {
  long long image_id = 0;
  long long category_id = 0;
  double score = 0.0;
  std::optional<MaskGeometry> mask;
  Box box;
  std::optional<double> predicted_maskiou;
};

struct Dataset {
  std::vector<ImageRecord> images;
  std::vector<Category> categories;
  std::vector<InstanceAnnotation> annotations;

  const ImageRecord* find_image(long long id) const {
    for (const auto& im : images)
      if (im.image_id == id) return &im;
    return nullptr;
  }
  const Category* find_category(long long id) const {
    for (const auto& c : categories)
      if (c.category_id == id) return &c;
    return nullptr;
  }
  const Category* find_category_by_code(const std::string& code) const {
    for (const auto& c : categories)
      if (c.code == code) return &c;
    return nullptr;
  }

  /// Referential integrity: every annotation must point at an existing image
  /// and category.
  void validate() const {
    std::string bad;
    for (const auto& a : annotations) {
      if (!find_image(a.image_id)) bad += " ann " + std::to_string(a.ann_id) + " -> image " + std::to_string(a.image_id);
      if (!find_category(a.category_id)) bad += " ann " + std::to_string(a.ann_id) + " -> category " + std::to_string(a.category_id);
    }
    if (!bad.empty()) throw error(errc::integrity, "dangling references:" + bad);
  }
};

// ---------------------------------------------------------------------------
// Geometry <-> JSON (COCO conventions)
// ---------------------------------------------------------------------------

inline json geometry_to_json(const MaskGeometry& g) {
  if (const Polygon* p = std::get_if<Polygon>(&g)) {
    json flat = json::array();
    for (const Point& pt : p->points) {
      flat.push_back(pt.x);
      flat.push_back(pt.y);
    }
    return json::array({flat});
  }
  const Rle* r = std::get_if<Rle>(&g);
  Rle tmp;
  if (!r) {
    tmp = rle_encode(std::get<BitMask>(g));
    r = &tmp;
  }
  return json{{"size", {r->height, r->width}}, {"counts", r->counts}};
}

inline MaskGeometry geometry_from_json(const json& seg) {
  if (seg.is_array()) {
    // [[x1,y1,x2,y2,...], ...]; a single outer ring is expected here
    if (seg.empty() || !seg[0].is_array())
      throw error(errc::parse, "empty polygon segmentation");
    const json& flat = seg[0];
    if (flat.size() < 6 || flat.size() % 2 != 0)
      throw error(errc::parse, "polygon list must hold >= 3 (x, y) pairs");
    Polygon p;
    for (size_t i = 0; i < flat.size(); i += 2)
      p.points.push_back({flat[i].get<double>(), flat[i + 1].get<double>()});
    return p;
  }
  if (seg.is_object() && seg.contains("size") && seg.contains("counts")) {
    Rle r;
    r.height = seg["size"][0].get<int>();
    r.width = seg["size"][1].get<int>();
    r.counts = seg["counts"].get<std::vector<long long>>();
    return r;
  }
  throw error(errc::parse, "unrecognized segmentation encoding");
}

// ---------------------------------------------------------------------------
// Manifest + timestamps
// ---------------------------------------------------------------------------

/// One row of the sidecar image manifest CSV. The manifest, not the VIA file,
/// is the authority for image dimensions, camera and capture time.
struct ManifestRow {
  std::string file_name;
  int width = 0;
  int height = 0;
  std::string camera_id;
  std::string captured_at;  // ISO-8601, may be empty when a filename pattern applies
};

inline std::vector<ManifestRow> parse_manifest(const std::vector<std::vector<std::string>>& rows) {
  std::vector<ManifestRow> out;
  size_t start = 0;
  if (!rows.empty() && !rows[0].empty() && rows[0][0] == "file_name") start = 1;  // header
  for (size_t i = start; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() < 4)
      throw error(errc::parse, "manifest row " + std::to_string(i) + " has fewer than 4 columns");
    ManifestRow m;
    m.file_name = r[0];
    try {
      m.width = std::stoi(r[1]);
      m.height = std::stoi(r[2]);
    } catch (const std::exception&) {
      throw error(errc::parse, "manifest row " + std::to_string(i) + ": bad width/height");
    }
    m.camera_id = r[3];
    if (r.size() > 4) m.captured_at = r[4];
    out.push_back(std::move(m));
  }
  return out;
}

struct TimestampResolution {
  std::vector<ImageRecord> images;            // rows that resolved, in input order
  std::vector<std::string> failed_files;      // rows excluded
};

/// Resolves capture times from the manifest column, falling back to a filename
/// pattern whose capture groups are year, month, day, hour, minute.
inline TimestampResolution resolve_timestamps(const std::vector<ManifestRow>& rows,
                                              const std::optional<std::string>& filename_pattern,
                                              long long first_image_id = 1) {
  std::optional<std::regex> re;
  if (filename_pattern) re.emplace(*filename_pattern);

  TimestampResolution out;
  long long next_id = first_image_id;
  for (const ManifestRow& row : rows) {
    std::optional<UnixTime> t;
    if (!row.captured_at.empty()) t = parse_iso8601(row.captured_at);
    if (!t && re) {
      std::smatch m;
      if (std::regex_search(row.file_name, m, *re) && m.size() >= 6) {
        try {
          t = make_utc(std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]), std::stoi(m[4]),
                       std::stoi(m[5]));
        } catch (const std::exception&) {
        }
      }
    }
    if (!t) {
      out.failed_files.push_back(row.file_name);
      continue;
    }
    ImageRecord im;
    im.image_id = next_id++;
    im.file_name = row.file_name;
    im.width = row.width;
    im.height = row.height;
    im.camera_id = row.camera_id;
    im.captured_at = t;
    out.images.push_back(std::move(im));
  }
  return out;
}

// ---------------------------------------------------------------------------
// VIA 2.x project parsing
// ---------------------------------------------------------------------------

struct RegionIssue {
  std::string file_name;
  size_t region_index = 0;
  std::string reason;  // "unsupported-shape:<name>" or "missing-attribute:<key>"
};

struct ViaParseResult {
  Dataset dataset;
  std::vector<RegionIssue> skipped;
};

/// Parses a VIA 2.x project. Only polygon regions become annotations; other
/// shapes and regions missing the category attribute are skipped and reported.
/// Image dimensions, camera and timestamps come from the manifest.
inline ViaParseResult parse_via(const json& doc, const std::string& category_attribute,
                                const std::vector<ManifestRow>& manifest,
                                const std::optional<std::string>& filename_pattern = std::nullopt) {
  const json* metadata = &doc;
  if (doc.contains("_via_img_metadata")) metadata = &doc["_via_img_metadata"];
  if (!metadata->is_object()) throw error(errc::parse, "VIA document: image metadata is not an object");

  ViaParseResult out;
  TimestampResolution ts = resolve_timestamps(manifest, filename_pattern);
  // rows without timestamps still get records; time is optional at this stage
  std::map<std::string, ImageRecord> by_name;
  long long next_id = 1;
  for (const ManifestRow& row : manifest) {
    ImageRecord im;
    im.image_id = next_id++;
    im.file_name = row.file_name;
    im.width = row.width;
    im.height = row.height;
    im.camera_id = row.camera_id;
    by_name[row.file_name] = im;
  }
  for (const ImageRecord& im : ts.images) by_name[im.file_name].captured_at = im.captured_at;

  std::map<std::string, long long> code_to_cat;
  long long next_ann = 1;
  for (auto it = metadata->begin(); it != metadata->end(); ++it) {
    const json& entry = it.value();
    if (!entry.is_object() || !entry.contains("filename")) continue;
    const std::string file_name = entry["filename"].get<std::string>();
    auto found = by_name.find(file_name);
    if (found == by_name.end())
      throw error(errc::integrity, "VIA image '" + file_name + "' missing from manifest");
    ImageRecord& im = found->second;

    const json regions = entry.value("regions", json::array());
    for (size_t ri = 0; ri < regions.size(); ++ri) {
      const json& region = regions[ri];
      const json& shape = region.value("shape_attributes", json::object());
      const std::string shape_name = shape.value("name", "");
      if (shape_name != "polygon") {
        out.skipped.push_back({file_name, ri, "unsupported-shape:" + shape_name});
        continue;
      }
      const json& attrs = region.value("region_attributes", json::object());
      if (!attrs.contains(category_attribute) || !attrs[category_attribute].is_string() ||
          attrs[category_attribute].get<std::string>().empty()) {
        out.skipped.push_back({file_name, ri, "missing-attribute:" + category_attribute});
        continue;
      }
      const std::string code = attrs[category_attribute].get<std::string>();

      const auto xs = shape.value("all_points_x", std::vector<double>{});
      const auto ys = shape.value("all_points_y", std::vector<double>{});
      if (xs.size() != ys.size() || xs.size() < 3) {
        out.skipped.push_back({file_name, ri, "degenerate-polygon"});
        continue;
      }
      Polygon poly;
      for (size_t i = 0; i < xs.size(); ++i) poly.points.push_back({xs[i], ys[i]});

      long long cat_id;
      auto cit = code_to_cat.find(code);
      if (cit == code_to_cat.end()) {
        cat_id = (long long)code_to_cat.size() + 1;
        code_to_cat[code] = cat_id;
        out.dataset.categories.push_back({cat_id, code, code});
      } else {
        cat_id = cit->second;
      }

      InstanceAnnotation ann;
      ann.ann_id = next_ann++;
      ann.image_id = im.image_id;
      ann.category_id = cat_id;
      ann.box = bbox_of(rasterize(poly, im.height, im.width));
      ann.mask = std::move(poly);
      out.dataset.annotations.push_back(std::move(ann));
    }
  }
  for (const ManifestRow& row : manifest) out.dataset.images.push_back(by_name[row.file_name]);
  out.dataset.validate();
  return out;
}

// ---------------------------------------------------------------------------
// COCO interchange
// ---------------------------------------------------------------------------

inline json export_coco(const Dataset& d) {
  d.validate();
  json images = json::array();
  for (const auto& im : d.images) {
    json j{{"id", im.image_id}, {"file_name", im.file_name}, {"width", im.width},
           {"height", im.height}};
    if (!im.camera_id.empty()) j["camera_id"] = im.camera_id;
    if (im.captured_at) j["captured_at"] = format_iso8601(*im.captured_at);
    images.push_back(std::move(j));
  }
  json categories = json::array();
  for (const auto& c : d.categories)
    categories.push_back({{"id", c.category_id}, {"name", c.name}, {"code", c.code}});
  json annotations = json::array();
  for (const auto& a : d.annotations) {
    const ImageRecord* im = d.find_image(a.image_id);
    annotations.push_back({{"id", a.ann_id},
                           {"image_id", a.image_id},
                           {"category_id", a.category_id},
                           {"segmentation", geometry_to_json(a.mask)},
                           {"bbox", {a.box.x, a.box.y, a.box.w, a.box.h}},
                           {"area", area(a.mask, im->height, im->width)},
                           {"iscrowd", 0}});
  }
  return json{{"images", images}, {"annotations", annotations}, {"categories", categories}};
}

inline Dataset parse_coco(const json& doc) {
  Dataset d;
  for (const json& j : doc.value("images", json::array())) {
    ImageRecord im;
    im.image_id = j.at("id").get<long long>();
    im.file_name = j.value("file_name", "");
    im.width = j.at("width").get<int>();
    im.height = j.at("height").get<int>();
    im.camera_id = j.value("camera_id", "");
    if (j.contains("captured_at")) {
      auto t = parse_iso8601(j["captured_at"].get<std::string>());
      if (!t) throw error(errc::parse, "bad captured_at for image " + std::to_string(im.image_id));
      im.captured_at = t;
    }
    d.images.push_back(std::move(im));
  }
  for (const json& j : doc.value("categories", json::array())) {
    Category c;
    c.category_id = j.at("id").get<long long>();
    c.name = j.value("name", "");
    c.code = j.value("code", c.name);
    d.categories.push_back(std::move(c));
  }
  for (const json& j : doc.value("annotations", json::array())) {
    InstanceAnnotation a;
    a.ann_id = j.at("id").get<long long>();
    a.image_id = j.at("image_id").get<long long>();
    a.category_id = j.at("category_id").get<long long>();
    a.mask = geometry_from_json(j.at("segmentation"));
    if (j.contains("bbox")) {
      const json& b = j["bbox"];
      a.box = Box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
    } else {
      const ImageRecord* im = d.find_image(a.image_id);
      if (im) a.box = bbox_of(a.mask, im->height, im->width);
    }
    d.annotations.push_back(std::move(a));
  }
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// Prediction ingestion
// ---------------------------------------------------------------------------

inline json detections_to_json(const std::vector<Detection>& dets) {
  json out = json::array();
  for (const Detection& det : dets) {
    json j{{"image_id", det.image_id},
           {"category_id", det.category_id},
           {"score", det.score},
           {"bbox", {det.box.x, det.box.y, det.box.w, det.box.h}}};
    if (det.mask) j["segmentation"] = geometry_to_json(*det.mask);
    if (det.predicted_maskiou) j["maskiou"] = *det.predicted_maskiou;
    out.push_back(std::move(j));
  }
  return out;
}

/// Parses a COCO-style results array, validating references against the
/// dataset. Output is stably sorted by (image_id, descending score).
inline std::vector<Detection> parse_predictions(const json& doc, const Dataset& dataset) {
  if (!doc.is_array()) throw error(errc::parse, "predictions document must be a JSON array");
  std::vector<Detection> dets;
  for (size_t i = 0; i < doc.size(); ++i) {
    const json& j = doc[i];
    Detection det;
    det.image_id = j.at("image_id").get<long long>();
    det.category_id = j.at("category_id").get<long long>();
    det.score = j.at("score").get<double>();
    if (det.score < 0.0 || det.score > 1.0)
      throw error(errc::validation,
                  "entry " + std::to_string(i) + ": score " + std::to_string(det.score) + " outside [0,1]");
    const ImageRecord* im = dataset.find_image(det.image_id);
    if (!im)
      throw error(errc::validation,
                  "entry " + std::to_string(i) + ": unknown image_id " + std::to_string(det.image_id));
    if (!dataset.find_category(det.category_id))
      throw error(errc::validation,
                  "entry " + std::to_string(i) + ": unknown category_id " + std::to_string(det.category_id));
    bool has_geom = false;
    if (j.contains("segmentation")) {
      det.mask = geometry_from_json(j["segmentation"]);
      has_geom = true;
    }
    if (j.contains("bbox")) {
      const json& b = j["bbox"];
      det.box = Box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
      has_geom = true;
    } else if (det.mask) {
      det.box = bbox_of(*det.mask, im->height, im->width);
    }
    if (!has_geom)
      throw error(errc::validation, "entry " + std::to_string(i) + ": neither segmentation nor bbox");
    if (j.contains("maskiou")) {
      const double miou = j["maskiou"].get<double>();
      if (miou < 0.0 || miou > 1.0)
        throw error(errc::validation, "entry " + std::to_string(i) + ": maskiou outside [0,1]");
      det.predicted_maskiou = miou;
    }
    dets.push_back(std::move(det));
  }
  std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
    if (a.image_id != b.image_id) return a.image_id < b.image_id;
    return a.score > b.score;
  });
  return dets;
}

// ---------------------------------------------------------------------------
// Annotation-consistent augmentation
// ---------------------------------------------------------------------------

struct Transform {
  enum class Kind { hflip, vflip, rotate, crop };
  Kind kind = Kind::hflip;
  double angle_deg = 0.0;  // rotate only, about the image center
  Box crop{};              // crop only
};

inline Transform hflip_transform() { return Transform{Transform::Kind::hflip, 0.0, {}}; }
inline Transform vflip_transform() { return Transform{Transform::Kind::vflip, 0.0, {}}; }
inline Transform rotate_transform(double deg) { return Transform{Transform::Kind::rotate, deg, {}}; }
inline Transform crop_transform(Box b) { return Transform{Transform::Kind::crop, 0.0, b}; }

namespace detail {

inline bool is_multiple_of_90(double deg) {
  const double q = deg / 90.0;
  return std::abs(q - std::round(q)) < 1e-9;
}

inline int quarter_turns(double deg) {
  int q = int(std::lround(deg / 90.0)) % 4;
  return q < 0 ? q + 4 : q;
}

/// Clips a polygon against one half-plane keep-side of the line; part of
/// Sutherland–Hodgman rectangle clipping.
inline std::vector<Point> clip_halfplane(const std::vector<Point>& pts, int axis, double bound,
                                         bool keep_less) {
  auto inside = [&](const Point& p) {
    const double v = axis == 0 ? p.x : p.y;
    return keep_less ? v <= bound : v >= bound;
  };
  auto intersect = [&](const Point& a, const Point& b) {
    const double va = axis == 0 ? a.x : a.y;
    const double vb = axis == 0 ? b.x : b.y;
    const double t = (bound - va) / (vb - va);
    return Point{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  };
  std::vector<Point> out;
  for (size_t i = 0; i < pts.size(); ++i) {
    const Point& cur = pts[i];
    const Point& nxt = pts[(i + 1) % pts.size()];
    const bool cin = inside(cur), nin = inside(nxt);
    if (cin) out.push_back(cur);
    if (cin != nin) out.push_back(intersect(cur, nxt));
  }
  return out;
}

}  // namespace detail

struct AugmentOutput {
  int width = 0;
  int height = 0;
  std::vector<InstanceAnnotation> annotations;
  std::vector<long long> dropped_ann_ids;  // emptied by crop clipping
};

inline Point transform_point(const Transform& t, Point p, int width, int height) {
  switch (t.kind) {
    case Transform::Kind::hflip: return {width - p.x, p.y};
    case Transform::Kind::vflip: return {p.x, height - p.y};
    case Transform::Kind::crop: return {p.x - t.crop.x, p.y - t.crop.y};
    case Transform::Kind::rotate: {
      if (detail::is_multiple_of_90(t.angle_deg)) {
        switch (detail::quarter_turns(t.angle_deg)) {
          case 0: return p;
          case 1: return {height - p.y, p.x};             // 90 degrees, dims swap
          case 2: return {width - p.x, height - p.y};
          case 3: return {p.y, width - p.x};
        }
      }
      const double rad = t.angle_deg * 3.14159265358979323846 / 180.0;
      const double cx = width / 2.0, cy = height / 2.0;
      const double dx = p.x - cx, dy = p.y - cy;
      return {cx + std::cos(rad) * dx - std::sin(rad) * dy,
              cy + std::sin(rad) * dx + std::cos(rad) * dy};
    }
  }
  return p;
}

/// Applies one transform to annotations; geometry first, so the result is
/// consistent with a pixel grid transformed by augment_image(). Crop uses
/// convex-window clipping; annotations clipped away entirely are dropped and
/// reported.
inline AugmentOutput augment(int width, int height, const std::vector<InstanceAnnotation>& anns,
                             const Transform& t) {
  AugmentOutput out;
  out.width = width;
  out.height = height;
  if (t.kind == Transform::Kind::rotate && detail::is_multiple_of_90(t.angle_deg) &&
      detail::quarter_turns(t.angle_deg) % 2 == 1) {
    out.width = height;
    out.height = width;
  }
  if (t.kind == Transform::Kind::crop) {
    const Box& b = t.crop;
    if (b.x < 0 || b.y < 0 || b.x + b.w > width || b.y + b.h > height || b.w <= 0 || b.h <= 0)
      throw error(errc::invalid_crop, "crop box outside image");
    out.width = int(std::lround(b.w));
    out.height = int(std::lround(b.h));
  }

  for (const InstanceAnnotation& src : anns) {
    const Polygon* poly = std::get_if<Polygon>(&src.mask);
    if (!poly)
      throw error(errc::bad_parameter, "augment requires polygon geometry (ann " +
                                           std::to_string(src.ann_id) + ")");
    std::vector<Point> pts = poly->points;
    if (t.kind == Transform::Kind::crop) {
      const Box& b = t.crop;
      pts = detail::clip_halfplane(pts, 0, b.x, false);
      pts = detail::clip_halfplane(pts, 0, b.x + b.w, true);
      pts = detail::clip_halfplane(pts, 1, b.y, false);
      pts = detail::clip_halfplane(pts, 1, b.y + b.h, true);
      if (pts.size() < 3) {
        out.dropped_ann_ids.push_back(src.ann_id);
        continue;
      }
    }
    Polygon moved;
    for (const Point& p : pts) moved.points.push_back(transform_point(t, p, width, height));

    InstanceAnnotation ann = src;
    BitMask raster = rasterize(moved, out.height, out.width);
    if (raster.area() == 0) {
      out.dropped_ann_ids.push_back(src.ann_id);
      continue;
    }
    ann.box = bbox_of(raster);
    ann.mask = std::move(moved);
    out.annotations.push_back(std::move(ann));
  }
  return out;
}

/// Pixel-grid counterpart of augment(). Arbitrary-angle rotation uses inverse
/// nearest-neighbor sampling; flips, quarter turns and crops are exact.
inline Grid8 augment_image(const Grid8& img, const Transform& t) {
  switch (t.kind) {
    case Transform::Kind::hflip: {
      Grid8 out(img.height, img.width);
      for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) out.at(r, img.width - 1 - c) = img.at(r, c);
      return out;
    }
    case Transform::Kind::vflip: {
      Grid8 out(img.height, img.width);
      for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) out.at(img.height - 1 - r, c) = img.at(r, c);
      return out;
    }
    case Transform::Kind::crop: {
      const Box& b = t.crop;
      if (b.x < 0 || b.y < 0 || b.x + b.w > img.width || b.y + b.h > img.height)
        throw error(errc::invalid_crop, "crop box outside image");
      const int x0 = int(std::lround(b.x)), y0 = int(std::lround(b.y));
      const int w = int(std::lround(b.w)), h = int(std::lround(b.h));
      Grid8 out(h, w);
      for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) out.at(r, c) = img.at(y0 + r, x0 + c);
      return out;
    }
    case Transform::Kind::rotate: {
      if (detail::is_multiple_of_90(t.angle_deg)) {
        const int q = detail::quarter_turns(t.angle_deg);
        if (q == 0) return img;
        const bool swap = q % 2 == 1;
        Grid8 out(swap ? img.width : img.height, swap ? img.height : img.width);
        for (int r = 0; r < img.height; ++r)
          for (int c = 0; c < img.width; ++c) {
            // pixel center maps under the same quarter-turn as polygon points
            if (q == 1) out.at(c, img.height - 1 - r) = img.at(r, c);
            else if (q == 2) out.at(img.height - 1 - r, img.width - 1 - c) = img.at(r, c);
            else out.at(img.width - 1 - c, r) = img.at(r, c);
          }
        return out;
      }
      const double rad = -t.angle_deg * 3.14159265358979323846 / 180.0;  // inverse map
      const double cx = img.width / 2.0, cy = img.height / 2.0;
      Grid8 out(img.height, img.width);
      for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) {
          const double dx = c + 0.5 - cx, dy = r + 0.5 - cy;
          const int sc = int(std::floor(cx + std::cos(rad) * dx - std::sin(rad) * dy));
          const int sr = int(std::floor(cy + std::sin(rad) * dx + std::cos(rad) * dy));
          if (sr >= 0 && sr < img.height && sc >= 0 && sc < img.width) out.at(r, c) = img.at(sr, sc);
        }
      return out;
    }
  }
  return img;
}

}  // namespace lichen

#endif  // LICHEN_DATASET_HPP_
