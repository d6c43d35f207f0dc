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
#ifndef LICHEN_EVAL_HPP_
#define LICHEN_EVAL_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lichen/dataset.hpp"
#include "lichen/mask.hpp"

namespace lichen {

enum class EvalMode { box, mask };
enum class Divisor { paper_9, n_thresholds };
enum class RecallPointSet { paper, coco };

inline std::vector<double> default_iou_thresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(0.50 + 0.05 * i);
  return t;
}

inline std::vector<double> recall_points(RecallPointSet set) {
  std::vector<double> r;
  if (set == RecallPointSet::paper) {
    for (int i = 0; i < 10; ++i) r.push_back(0.50 + 0.05 * i);
  } else {
    for (int i = 0; i <= 100; ++i) r.push_back(0.01 * i);
  }
  return r;
}

struct EvalParams {
  std::vector<double> iou_thresholds = default_iou_thresholds();
  RecallPointSet recall_point_set = RecallPointSet::coco;
  Divisor divisor = Divisor::n_thresholds;
  EvalMode mode = EvalMode::mask;
  int max_detections = 100;

  // Number of leading thresholds entering the mAP average. The nine-point
  // variant keeps the literal 1/9 normalization by averaging the thresholds
  // 0.50..0.90; the default averages over every configured threshold.
  size_t map_terms() const {
    return divisor == Divisor::paper_9 ? std::min<size_t>(9, iou_thresholds.size())
                                       : iou_thresholds.size();
  }
  void validate() const {
    for (size_t i = 0; i < iou_thresholds.size(); ++i) {
      if (iou_thresholds[i] <= 0.0 || iou_thresholds[i] > 1.0)
        throw error(errc::bad_parameter, "iou threshold outside (0,1]");
      if (i > 0 && iou_thresholds[i] <= iou_thresholds[i - 1])
        throw error(errc::bad_parameter, "iou thresholds must be strictly increasing");
    }
  }
};

/// One detection's fate at a single (image, category, threshold).
struct DetMatch {
  size_t det_index = 0;                 // into the score-ordered detection list
  std::optional<long long> gt_id;       // matched ground truth, if any
  double iou = 0.0;
};
using MatchResult = std::vector<DetMatch>;

/// Greedy matching over a precomputed IoU matrix (rows: detections in
/// descending score order; columns: ground truths). Each detection takes the
/// unmatched ground truth of maximal IoU when that IoU clears the threshold
/// (ties on IoU go to the lower column index, i.e. the smaller gt id when
/// columns are id-ordered).
inline MatchResult match_detections(const std::vector<std::vector<double>>& iou,
                                    const std::vector<long long>& gt_ids, double threshold) {
  MatchResult result;
  std::vector<char> gt_taken(gt_ids.size(), 0);
  for (size_t di = 0; di < iou.size(); ++di) {
    int best = -1;
    double best_iou = 0.0;
    for (size_t gi = 0; gi < gt_ids.size(); ++gi) {
      if (gt_taken[gi]) continue;
      if (iou[di][gi] >= threshold && iou[di][gi] > best_iou) {
        best = int(gi);
        best_iou = iou[di][gi];
      }
    }
    DetMatch m;
    m.det_index = di;
    if (best >= 0) {
      gt_taken[best] = 1;
      m.gt_id = gt_ids[best];
      m.iou = best_iou;
    }
    result.push_back(m);
  }
  return result;
}

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

/// PR curve from TP flags in global descending-score order: one point per
/// detection prefix. An empty ground-truth set yields an empty curve.
inline std::vector<PrPoint> pr_curve(const std::vector<char>& tp_flags, long long total_gt) {
  std::vector<PrPoint> curve;
  if (total_gt == 0) return curve;
  long long tp = 0, fp = 0;
  for (char flag : tp_flags) {
    if (flag) ++tp;
    else ++fp;
    curve.push_back({double(tp) / double(total_gt), double(tp) / double(tp + fp)});
  }
  return curve;
}

/// Interpolated AP: mean over the recall points of max precision at recall at
/// least that point; 0 where the curve never reaches the recall point.
inline double ap_at_iou(const std::vector<PrPoint>& curve, const std::vector<double>& points) {
  if (curve.empty() || points.empty()) return 0.0;
  // suffix max of precision; recall is non-decreasing along the curve
  std::vector<double> suffix(curve.size());
  double running = 0.0;
  for (size_t i = curve.size(); i-- > 0;) {
    running = std::max(running, curve[i].precision);
    suffix[i] = running;
  }
  double sum = 0.0;
  for (double r : points) {
    size_t lo = 0, hi = curve.size();
    while (lo < hi) {
      const size_t mid = (lo + hi) / 2;
      if (curve[mid].recall >= r) hi = mid;
      else lo = mid + 1;
    }
    if (lo < curve.size()) sum += suffix[lo];
  }
  return sum / double(points.size());
}

struct CategoryEval {
  long long category_id = 0;
  long long n_gt = 0;
  std::vector<double> ap;                      // per threshold
  std::vector<long long> tp, fp, fn;           // per threshold
  std::vector<std::vector<PrPoint>> curves;    // per threshold
};

struct EvalResult {
  EvalParams params;
  std::vector<CategoryEval> per_category;
  double map = 0.0;
  double map50 = 0.0;
  double map75 = 0.0;
};

namespace detail {

inline double pair_iou(const Detection& det, const InstanceAnnotation& gt, const ImageRecord& im,
                       EvalMode mode, std::map<long long, BitMask>& gt_cache) {
  if (mode == EvalMode::box) return box_iou(det.box, gt.box);
  if (!det.mask)
    throw error(errc::validation, "mask-mode evaluation but detection has no segmentation");
  auto it = gt_cache.find(gt.ann_id);
  if (it == gt_cache.end())
    it = gt_cache.emplace(gt.ann_id, to_bitmask(gt.mask, im.height, im.width)).first;
  return mask_iou(to_bitmask(*det.mask, im.height, im.width), it->second);
}

}  // namespace detail

/// Full evaluation: greedy matching per (image, category, threshold), PR
/// curves over the global score ordering, interpolated AP, and the mAP family.
/// Categories with no ground truth are excluded from the averages.
inline EvalResult evaluate(const Dataset& gt, const std::vector<Detection>& detections,
                           const EvalParams& params) {
  params.validate();
  gt.validate();

  // canonical order: (image_id, -score, input index); ties resolved by input
  // position so the result does not depend on caller-side ordering quirks
  std::vector<size_t> order(detections.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (detections[a].image_id != detections[b].image_id)
      return detections[a].image_id < detections[b].image_id;
    return detections[a].score > detections[b].score;
  });

  // truncate per image to max_detections (list is already score-sorted per image)
  std::vector<size_t> considered;
  {
    long long cur_image = -1;
    int count = 0;
    for (size_t idx : order) {
      if (detections[idx].image_id != cur_image) {
        cur_image = detections[idx].image_id;
        count = 0;
      }
      if (count < params.max_detections) considered.push_back(idx);
      ++count;
    }
  }
  for (size_t idx : considered) {
    const Detection& det = detections[idx];
    if (!gt.find_category(det.category_id))
      throw error(errc::validation, "detection references unknown category " +
                                        std::to_string(det.category_id));
    if (!gt.find_image(det.image_id))
      throw error(errc::validation, "detection references unknown image " +
                                        std::to_string(det.image_id));
  }

  EvalResult result;
  result.params = params;
  const size_t n_thr = params.iou_thresholds.size();
  const std::vector<double> rpoints = recall_points(params.recall_point_set);
  std::map<long long, BitMask> gt_cache;

  for (const Category& cat : gt.categories) {
    CategoryEval ce;
    ce.category_id = cat.category_id;
    ce.ap.assign(n_thr, 0.0);
    ce.tp.assign(n_thr, 0);
    ce.fp.assign(n_thr, 0);
    ce.fn.assign(n_thr, 0);
    ce.curves.resize(n_thr);

    // per-image ground truths and detections of this category
    std::map<long long, std::vector<const InstanceAnnotation*>> gts_by_image;
    for (const auto& a : gt.annotations)
      if (a.category_id == cat.category_id) {
        gts_by_image[a.image_id].push_back(&a);
        ++ce.n_gt;
      }
    for (auto& [img, anns] : gts_by_image)
      std::sort(anns.begin(), anns.end(),
                [](const InstanceAnnotation* a, const InstanceAnnotation* b) { return a->ann_id < b->ann_id; });

    std::map<long long, std::vector<size_t>> dets_by_image;  // score-ordered per image
    for (size_t idx : considered)
      if (detections[idx].category_id == cat.category_id)
        dets_by_image[detections[idx].image_id].push_back(idx);

    // per-image IoU matrices, shared across thresholds
    std::map<long long, std::vector<std::vector<double>>> iou_by_image;
    std::map<long long, std::vector<long long>> gtid_by_image;
    for (const auto& [img, det_idx] : dets_by_image) {
      const ImageRecord* im = gt.find_image(img);
      const auto git = gts_by_image.find(img);
      const std::vector<const InstanceAnnotation*> empty;
      const auto& anns = git == gts_by_image.end() ? empty : git->second;
      std::vector<std::vector<double>> mat(det_idx.size(), std::vector<double>(anns.size(), 0.0));
      for (size_t di = 0; di < det_idx.size(); ++di)
        for (size_t gi = 0; gi < anns.size(); ++gi)
          mat[di][gi] = detail::pair_iou(detections[det_idx[di]], *anns[gi], *im, params.mode, gt_cache);
      iou_by_image[img] = std::move(mat);
      std::vector<long long> ids;
      for (const auto* a : anns) ids.push_back(a->ann_id);
      gtid_by_image[img] = std::move(ids);
    }

    // global score order across images for the PR curve
    std::vector<std::pair<long long, size_t>> global;  // (image, position within image list)
    for (const auto& [img, det_idx] : dets_by_image)
      for (size_t pos = 0; pos < det_idx.size(); ++pos) global.emplace_back(img, pos);
    std::stable_sort(global.begin(), global.end(), [&](const auto& a, const auto& b) {
      return detections[dets_by_image[a.first][a.second]].score >
             detections[dets_by_image[b.first][b.second]].score;
    });

    for (size_t ti = 0; ti < n_thr; ++ti) {
      const double thr = params.iou_thresholds[ti];
      std::map<long long, MatchResult> matches;
      for (const auto& [img, det_idx] : dets_by_image)
        matches[img] = match_detections(iou_by_image[img], gtid_by_image[img], thr);

      std::vector<char> tp_flags;
      for (const auto& [img, pos] : global)
        tp_flags.push_back(matches[img][pos].gt_id.has_value() ? 1 : 0);

      long long tp = 0;
      for (char f : tp_flags) tp += f;
      ce.tp[ti] = tp;
      ce.fp[ti] = (long long)tp_flags.size() - tp;
      ce.fn[ti] = ce.n_gt - tp;

      ce.curves[ti] = pr_curve(tp_flags, ce.n_gt);
      ce.ap[ti] = ap_at_iou(ce.curves[ti], rpoints);
    }
    result.per_category.push_back(std::move(ce));
  }

  // averages over categories that actually have ground truth
  double sum_map = 0, sum50 = 0, sum75 = 0;
  int n_cats = 0;
  auto threshold_index = [&](double t) -> int {
    for (size_t i = 0; i < n_thr; ++i)
      if (std::abs(params.iou_thresholds[i] - t) < 1e-9) return int(i);
    return -1;
  };
  const int i50 = threshold_index(0.50), i75 = threshold_index(0.75);
  for (const CategoryEval& ce : result.per_category) {
    if (ce.n_gt == 0) continue;
    ++n_cats;
    const size_t n_terms = params.map_terms();
    double s = 0;
    for (size_t i = 0; i < n_terms; ++i) s += ce.ap[i];
    sum_map += s / double(n_terms);
    if (i50 >= 0) sum50 += ce.ap[i50];
    if (i75 >= 0) sum75 += ce.ap[i75];
  }
  if (n_cats > 0) {
    result.map = sum_map / n_cats;
    result.map50 = sum50 / n_cats;
    result.map75 = sum75 / n_cats;
  }
  return result;
}

/// JSON report mirroring the CLI contract.
inline json eval_report_json(const EvalResult& r, const Dataset& gt) {
  json per_cat = json::object();
  for (const CategoryEval& ce : r.per_category) {
    const Category* cat = gt.find_category(ce.category_id);
    json ap = json::object();
    json counts = json::object();
    for (size_t i = 0; i < r.params.iou_thresholds.size(); ++i) {
      char key[16];
      std::snprintf(key, sizeof key, "%.2f", r.params.iou_thresholds[i]);
      ap[key] = ce.ap[i];
      counts[key] = {{"tp", ce.tp[i]}, {"fp", ce.fp[i]}, {"fn", ce.fn[i]}};
    }
    per_cat[cat ? cat->code : std::to_string(ce.category_id)] = {
        {"n_gt", ce.n_gt}, {"AP", ap}, {"counts", counts}};
  }
  return json{{"mode", r.params.mode == EvalMode::mask ? "mask" : "box"},
              {"params",
               {{"iou_thresholds", r.params.iou_thresholds},
                {"recall_points", r.params.recall_point_set == RecallPointSet::paper ? "paper" : "coco"},
                {"divisor", r.params.divisor == Divisor::paper_9 ? "paper" : "coco"},
                {"max_detections", r.params.max_detections}}},
              {"per_category", per_cat},
              {"mAP", r.map},
              {"mAP50", r.map50},
              {"mAP75", r.map75}};
}

}  // namespace lichen

#endif  // LICHEN_EVAL_HPP_
