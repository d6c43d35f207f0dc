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
#ifndef LICHEN_MONITOR_HPP_
#define LICHEN_MONITOR_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lichen/dataset.hpp"
#include "lichen/mask.hpp"
#include "lichen/timeutil.hpp"

namespace lichen {

/// One segmented instance in one frame, with its mask already materialized.
struct ObservedInstance {
  long long ref_id = 0;  // annotation or detection id
  long long category_id = 0;
  BitMask mask;
};

struct Frame {
  long long image_id = 0;
  UnixTime captured_at = 0;
  std::vector<ObservedInstance> instances;
};

struct TrackMember {
  long long image_id = 0;
  UnixTime captured_at = 0;
  long long ref_id = 0;
  long long area_px = 0;
};

/// One physical thallus followed across frames of a fixed camera.
struct Track {
  long long track_id = 0;
  long long category_id = 0;
  std::vector<TrackMember> members;
  int gap_count = 0;  // frames bridged while the track stayed open
};

struct LinkParams {
  double link_iou = 0.5;
  int max_gap = 3;  // about 6 hours at a 2-hour capture cadence
};

/// Greedy IoU association between consecutive frames of one camera. Candidate
/// pairs must share a category and clear link_iou; pairs are taken in order of
/// higher IoU, then smaller instance id, then smaller track id, one-to-one.
/// Instances left unmatched open new tracks; tracks unseen for more than
/// max_gap consecutive frames are closed.
inline std::vector<Track> link_instances(const std::vector<Frame>& frames, const LinkParams& params) {
  for (size_t i = 1; i < frames.size(); ++i)
    if (frames[i].captured_at < frames[i - 1].captured_at)
      throw error(errc::unsorted_input, "frames must be sorted by captured_at");

  struct OpenTrack {
    Track track;
    BitMask last_mask;
    int missed = 0;
  };
  std::vector<OpenTrack> open;
  std::vector<Track> closed;
  long long next_track_id = 1;

  for (const Frame& frame : frames) {
    struct Candidate {
      double iou;
      long long ref_id;
      long long track_id;
      size_t track_pos;
      size_t inst_pos;
    };
    std::vector<Candidate> cands;
    for (size_t ti = 0; ti < open.size(); ++ti) {
      for (size_t ii = 0; ii < frame.instances.size(); ++ii) {
        const ObservedInstance& inst = frame.instances[ii];
        if (inst.category_id != open[ti].track.category_id) continue;
        const double iou = mask_iou(open[ti].last_mask, inst.mask);
        if (iou >= params.link_iou)
          cands.push_back({iou, inst.ref_id, open[ti].track.track_id, ti, ii});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.iou != b.iou) return a.iou > b.iou;
      if (a.ref_id != b.ref_id) return a.ref_id < b.ref_id;
      return a.track_id < b.track_id;
    });

    std::vector<char> track_used(open.size(), 0), inst_used(frame.instances.size(), 0);
    for (const Candidate& c : cands) {
      if (track_used[c.track_pos] || inst_used[c.inst_pos]) continue;
      track_used[c.track_pos] = 1;
      inst_used[c.inst_pos] = 1;
      OpenTrack& ot = open[c.track_pos];
      const ObservedInstance& inst = frame.instances[c.inst_pos];
      ot.track.gap_count += ot.missed;
      ot.missed = 0;
      ot.track.members.push_back({frame.image_id, frame.captured_at, inst.ref_id, inst.mask.area()});
      ot.last_mask = inst.mask;
    }

    // age out unmatched tracks
    std::vector<OpenTrack> still_open;
    for (size_t ti = 0; ti < open.size(); ++ti) {
      if (!track_used[ti]) {
        ++open[ti].missed;
        if (open[ti].missed > params.max_gap) {
          closed.push_back(std::move(open[ti].track));
          continue;
        }
      }
      still_open.push_back(std::move(open[ti]));
    }
    open = std::move(still_open);

    // new tracks for unmatched instances, in ascending instance id
    std::vector<size_t> fresh;
    for (size_t ii = 0; ii < frame.instances.size(); ++ii)
      if (!inst_used[ii]) fresh.push_back(ii);
    std::sort(fresh.begin(), fresh.end(), [&](size_t a, size_t b) {
      return frame.instances[a].ref_id < frame.instances[b].ref_id;
    });
    for (size_t ii : fresh) {
      const ObservedInstance& inst = frame.instances[ii];
      OpenTrack ot;
      ot.track.track_id = next_track_id++;
      ot.track.category_id = inst.category_id;
      ot.track.members.push_back({frame.image_id, frame.captured_at, inst.ref_id, inst.mask.area()});
      ot.last_mask = inst.mask;
      open.push_back(std::move(ot));
    }
  }

  for (OpenTrack& ot : open) closed.push_back(std::move(ot.track));
  std::sort(closed.begin(), closed.end(),
            [](const Track& a, const Track& b) { return a.track_id < b.track_id; });
  return closed;
}

/// Builds per-frame instance sets from a dataset's ground-truth annotations,
/// restricted to one camera and ordered by capture time.
inline std::vector<Frame> frames_from_dataset(const Dataset& d, const std::string& camera_id = "") {
  std::vector<const ImageRecord*> images;
  for (const auto& im : d.images) {
    if (!camera_id.empty() && im.camera_id != camera_id) continue;
    if (!im.captured_at) throw error(errc::validation, "image " + std::to_string(im.image_id) +
                                                            " has no timestamp");
    images.push_back(&im);
  }
  std::sort(images.begin(), images.end(), [](const ImageRecord* a, const ImageRecord* b) {
    if (*a->captured_at != *b->captured_at) return *a->captured_at < *b->captured_at;
    return a->image_id < b->image_id;
  });
  std::vector<Frame> frames;
  for (const ImageRecord* im : images) {
    Frame fr;
    fr.image_id = im->image_id;
    fr.captured_at = *im->captured_at;
    for (const auto& a : d.annotations)
      if (a.image_id == im->image_id)
        fr.instances.push_back({a.ann_id, a.category_id, to_bitmask(a.mask, im->height, im->width)});
    frames.push_back(std::move(fr));
  }
  return frames;
}

struct BiomassPoint {
  UnixTime captured_at = 0;
  long long area_px = 0;
  std::optional<double> area_physical;  // cm^2 via user-supplied scale
};

struct BiomassSeries {
  long long track_id = 0;
  std::vector<BiomassPoint> points;
  std::vector<double> smoothed;  // parallel to points when smoothing requested
};

/// Area-over-time record of one track. Smoothing is a centered rolling median
/// of odd width with window truncation at the ends.
inline BiomassSeries biomass_series(const Track& track, std::optional<double> px_to_cm2 = std::nullopt,
                                    std::optional<int> smooth_window = std::nullopt) {
  if (track.members.empty()) throw error(errc::validation, "empty track");
  if (smooth_window && (*smooth_window < 1 || *smooth_window % 2 == 0))
    throw error(errc::bad_parameter, "smooth_window must be a positive odd integer");

  BiomassSeries series;
  series.track_id = track.track_id;
  for (const TrackMember& m : track.members) {
    BiomassPoint p;
    p.captured_at = m.captured_at;
    p.area_px = m.area_px;
    if (px_to_cm2) p.area_physical = double(m.area_px) * *px_to_cm2;
    series.points.push_back(p);
  }
  if (smooth_window) {
    const int half = (*smooth_window - 1) / 2;
    const int n = int(series.points.size());
    for (int i = 0; i < n; ++i) {
      std::vector<double> window;
      for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j)
        window.push_back(double(series.points[j].area_px));
      std::sort(window.begin(), window.end());
      const size_t k = window.size();
      series.smoothed.push_back(k % 2 ? window[k / 2] : (window[k / 2 - 1] + window[k / 2]) / 2.0);
    }
  }
  return series;
}

enum class ReportPeriod { whole, monthly };

struct ChangeRow {
  long long track_id = 0;
  std::string period;  // "whole" or "YYYY-MM"
  double first_area = 0.0;
  double last_area = 0.0;
  double abs_change = 0.0;
  double rel_change = 0.0;  // fraction, e.g. 0.21 for +21%
  long long n_obs = 0;
};

inline std::string month_label(UnixTime t) {
  const std::string iso = format_iso8601(t);
  return iso.substr(0, 7);
}

/// Per-track, per-period area change summary. Periods with no observations
/// produce no row.
inline std::vector<ChangeRow> change_report(const std::vector<BiomassSeries>& series,
                                            ReportPeriod period) {
  if (series.empty()) throw error(errc::validation, "no series to report");
  std::vector<ChangeRow> rows;
  for (const BiomassSeries& s : series) {
    std::map<std::string, std::vector<const BiomassPoint*>> buckets;
    for (const BiomassPoint& p : s.points)
      buckets[period == ReportPeriod::whole ? "whole" : month_label(p.captured_at)].push_back(&p);
    for (const auto& [label, pts] : buckets) {
      ChangeRow row;
      row.track_id = s.track_id;
      row.period = label;
      row.first_area = double(pts.front()->area_px);
      row.last_area = double(pts.back()->area_px);
      row.abs_change = row.last_area - row.first_area;
      row.rel_change = row.first_area > 0 ? row.abs_change / row.first_area : 0.0;
      row.n_obs = (long long)pts.size();
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace lichen

#endif  // LICHEN_MONITOR_HPP_
