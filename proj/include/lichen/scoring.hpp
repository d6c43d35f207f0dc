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
#ifndef LICHEN_SCORING_HPP_
#define LICHEN_SCORING_HPP_

#include <cmath>
#include <vector>

#include "lichen/error.hpp"
#include "lichen/mask.hpp"

namespace lichen {

/// Per-pixel mask probability grid paired with a ground-truth mask.
struct SoftMask {
  int height = 0;
  int width = 0;
  std::vector<double> probabilities;  // row-major, each in [0,1]

  SoftMask() = default;
  SoftMask(int h, int w, double fill = 0.0)
      : height(h), width(w), probabilities(size_t(h) * w, fill) {}

  double at(int row, int col) const { return probabilities[size_t(row) * width + col]; }
  double& at(int row, int col) { return probabilities[size_t(row) * width + col]; }

  void validate() const {
    for (double p : probabilities)
      if (!(p >= 0.0 && p <= 1.0))
        throw error(errc::validation, "soft mask probability outside [0,1]");
  }
};

struct LossComponents {
  double l_cls = 0.0;
  double l_bbox = 0.0;
  double l_mask = 0.0;
  double l_maskiou = 0.0;
  double lambda = 0.0;

  void validate() const {
    for (double v : {l_cls, l_bbox, l_mask, l_maskiou, lambda})
      if (!std::isfinite(v) || v < 0.0)
        throw error(errc::validation, "loss components must be finite and non-negative");
  }
};

inline BitMask binarize(const SoftMask& pred, double threshold) {
  BitMask out(pred.height, pred.width);
  for (int r = 0; r < pred.height; ++r)
    for (int c = 0; c < pred.width; ++c)
      if (pred.at(r, c) >= threshold) out.set(r, c);
  return out;
}

/// Regression target for the mask quality head: binarize the predicted mask
/// (>= threshold keeps the pixel) and take its IoU with the ground truth.
inline double maskiou_target(const SoftMask& pred, const BitMask& gt, double binarize_at = 0.5) {
  if (pred.height != gt.height() || pred.width != gt.width())
    throw error(errc::shape_mismatch, "soft mask and ground truth grids differ");
  pred.validate();
  return mask_iou(binarize(pred, binarize_at), gt);
}

/// Final detection confidence: classification score scaled by the predicted
/// mask IoU.
inline double recalibrate_score(double cls_score, double predicted_maskiou) {
  if (!(cls_score >= 0.0 && cls_score <= 1.0))
    throw error(errc::validation, "cls_score outside [0,1]");
  if (!(predicted_maskiou >= 0.0 && predicted_maskiou <= 1.0))
    throw error(errc::validation, "predicted_maskiou outside [0,1]");
  return cls_score * predicted_maskiou;
}

/// Halved squared error between predicted and target mask IoU.
inline double maskiou_regression_loss(double predicted_iou, double target_iou) {
  if (!(predicted_iou >= 0.0 && predicted_iou <= 1.0) ||
      !(target_iou >= 0.0 && target_iou <= 1.0))
    throw error(errc::validation, "iou values must lie in [0,1]");
  const double d = predicted_iou - target_iou;
  return d * d / 2.0;
}

/// Weighted sum of the four training loss components.
inline double total_loss(const LossComponents& c) {
  c.validate();
  return c.l_cls + c.l_bbox + c.l_mask + c.lambda * c.l_maskiou;
}

}  // namespace lichen

#endif  // LICHEN_SCORING_HPP_
