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
//
// lichenwatch: command-line front end for the lichen monitoring toolkit.
// Subcommands: convert, filter, split, eval, recalibrate, track, report, synth.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <opencv2/imgcodecs.hpp>

#include "lichen/lichen.hpp"

namespace fs = std::filesystem;
using namespace lichen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;  // validation / integrity failures
constexpr int kExitUsage = 2;   // bad flags, missing files, IO

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw error(errc::io, "cannot open: " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw error(errc::parse, path + ": " + e.what());
  }
}

void save_json(const json& doc, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw error(errc::io, "cannot open for writing: " + path);
  f << doc.dump(2) << "\n";
}

/// Loads an image as the 8-bit luminance grid the quality contract is defined
/// on. PGM is read natively; PNG/JPEG go through OpenCV and Rec.601.
Grid8 load_luminance(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".pgm") return read_pgm(path);
  cv::Mat img = cv::imread(path, cv::IMREAD_COLOR);
  if (img.empty()) throw error(errc::io, "cannot decode image: " + path);
  Grid8 out(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      const cv::Vec3b bgr = img.at<cv::Vec3b>(r, c);
      out.at(r, c) = luminance601(bgr[2], bgr[1], bgr[0]);
    }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_convert(const std::string& via_path, const std::string& manifest_path,
                const std::string& attr, const std::string& pattern, const std::string& out_path,
                const std::string& report_path) {
  const json doc = load_json(via_path);
  const auto manifest = parse_manifest(read_csv(manifest_path));
  std::optional<std::string> pat;
  if (!pattern.empty()) pat = pattern;
  const ViaParseResult result = parse_via(doc, attr, manifest, pat);
  save_json(export_coco(result.dataset), out_path);
  if (!report_path.empty()) {
    std::vector<std::vector<std::string>> rows{{"file_name", "region_index", "reason"}};
    for (const RegionIssue& issue : result.skipped)
      rows.push_back({issue.file_name, std::to_string(issue.region_index), issue.reason});
    write_csv(report_path, rows);
  }
  std::cout << "images: " << result.dataset.images.size()
            << "  annotations: " << result.dataset.annotations.size()
            << "  categories: " << result.dataset.categories.size()
            << "  skipped regions: " << result.skipped.size() << "\n";
  return kExitOk;
}

int cmd_filter(const std::string& manifest_path, const std::string& image_dir,
               const std::string& out_dir, const QualityThresholds& thr) {
  const auto manifest = parse_manifest(read_csv(manifest_path));
  fs::create_directories(out_dir);

  std::vector<std::pair<std::string, QualityScores>> scored;
  for (const ManifestRow& row : manifest) {
    const Grid8 img = load_luminance((fs::path(image_dir) / row.file_name).string());
    scored.emplace_back(row.file_name, quality_scores(img));
  }
  const FilterResult result = filter_manifest(scored, thr);

  std::vector<std::vector<std::string>> rows{
      {"file_name", "blur", "darkness", "snow", "verdict", "reason"}};
  for (const QualityReport& rep : result.reports)
    rows.push_back({rep.file_name, fmt(rep.scores.blur), fmt(rep.scores.darkness),
                    fmt(rep.scores.snow), rep.verdict == Verdict::keep ? "keep" : "drop",
                    verdict_reason(rep.verdict)});
  write_csv((fs::path(out_dir) / "quality_report.csv").string(), rows);

  auto subset = [&](const std::vector<std::string>& names, const std::string& file) {
    std::vector<std::vector<std::string>> out{{"file_name", "width", "height", "camera_id", "captured_at"}};
    for (const ManifestRow& row : manifest)
      if (std::find(names.begin(), names.end(), row.file_name) != names.end())
        out.push_back({row.file_name, std::to_string(row.width), std::to_string(row.height),
                       row.camera_id, row.captured_at});
    write_csv((fs::path(out_dir) / file).string(), out);
  };
  subset(result.kept, "kept.csv");
  subset(result.dropped, "dropped.csv");
  std::cout << "kept " << result.kept.size() << ", dropped " << result.dropped.size() << "\n";
  return kExitOk;
}

struct SplitOpts {
  std::string gt_path, out_dir, scenario = "cross", species, day_pick = "noon";
  uint64_t seed = 0;
  double train_fraction = 0.85, pool_fraction = 0.75;
  size_t n_train = 40, n_val = 10;
  long long n_train_override = -1;
  bool export_coco_files = false;
};

int cmd_split(const SplitOpts& o) {
  const Dataset d = parse_coco(load_json(o.gt_path));
  fs::create_directories(o.out_dir);

  std::vector<FoldSpec> folds;
  if (o.scenario == "cross") {
    std::vector<std::string> holdouts;
    if (!o.species.empty()) holdouts.push_back(o.species);
    else
      for (const Category& c : d.categories) holdouts.push_back(c.code);
    folds = cross_species_folds(d, holdouts, o.train_fraction, o.seed);
  } else if (o.scenario == "random") {
    if (o.species.empty()) throw error(errc::validation, "--species is required for scenario random");
    folds.push_back(random_finetune_split(d, o.species, o.n_train, o.n_val, o.seed));
  } else if (o.scenario == "selective") {
    if (o.species.empty()) throw error(errc::validation, "--species is required for scenario selective");
    std::optional<size_t> override;
    if (o.n_train_override >= 0) override = size_t(o.n_train_override);
    folds.push_back(selective_finetune_split(
        d, o.species, o.pool_fraction,
        o.day_pick == "first" ? DayPick::first_of_day : DayPick::nearest_local_noon, o.seed,
        override));
  } else {
    throw error(errc::validation, "unknown scenario: " + o.scenario);
  }

  for (const FoldSpec& fold : folds) {
    save_json(foldspec_to_json(fold), (fs::path(o.out_dir) / (fold.name + ".json")).string());
    if (o.export_coco_files) {
      save_json(export_coco(subset_dataset(d, fold.train)),
                (fs::path(o.out_dir) / (fold.name + "_train.json")).string());
      save_json(export_coco(subset_dataset(d, fold.val)),
                (fs::path(o.out_dir) / (fold.name + "_val.json")).string());
      save_json(export_coco(subset_dataset(d, fold.test)),
                (fs::path(o.out_dir) / (fold.name + "_test.json")).string());
    }
    std::cout << fold.name << ": train " << fold.train.size() << ", val " << fold.val.size()
              << ", test " << fold.test.size() << "\n";
  }
  return kExitOk;
}

struct EvalOpts {
  std::string gt_path, pred_path, out_path, pr_csv;
  std::string mode = "mask", divisor = "coco", rpoints = "coco";
  int max_dets = 100;
};

int cmd_eval(const EvalOpts& o) {
  const Dataset gt = parse_coco(load_json(o.gt_path));
  const std::vector<Detection> dets = parse_predictions(load_json(o.pred_path), gt);
  EvalParams params;
  params.mode = o.mode == "box" ? EvalMode::box : EvalMode::mask;
  params.divisor = o.divisor == "paper" ? Divisor::paper_9 : Divisor::n_thresholds;
  params.recall_point_set = o.rpoints == "paper" ? RecallPointSet::paper : RecallPointSet::coco;
  params.max_detections = o.max_dets;
  const EvalResult result = evaluate(gt, dets, params);
  save_json(eval_report_json(result, gt), o.out_path);
  if (!o.pr_csv.empty()) {
    std::vector<std::vector<std::string>> rows{{"category", "iou_threshold", "recall", "precision"}};
    for (const CategoryEval& ce : result.per_category) {
      const Category* cat = gt.find_category(ce.category_id);
      for (size_t ti = 0; ti < params.iou_thresholds.size(); ++ti)
        for (const PrPoint& p : ce.curves[ti])
          rows.push_back({cat ? cat->code : std::to_string(ce.category_id),
                          fmt(params.iou_thresholds[ti]), fmt(p.recall), fmt(p.precision)});
    }
    write_csv(o.pr_csv, rows);
  }
  std::cout << "mAP " << result.map << "  mAP50 " << result.map50 << "  mAP75 " << result.map75
            << "\n";
  return kExitOk;
}

int cmd_recalibrate(const std::string& pred_path, const std::string& out_path) {
  json doc = load_json(pred_path);
  if (!doc.is_array()) throw error(errc::parse, "predictions document must be a JSON array");
  size_t adjusted = 0, passed = 0;
  for (json& entry : doc) {
    if (entry.contains("maskiou")) {
      entry["score"] =
          recalibrate_score(entry.at("score").get<double>(), entry["maskiou"].get<double>());
      ++adjusted;
    } else {
      ++passed;
    }
  }
  save_json(doc, out_path);
  std::cout << "recalibrated " << adjusted << " entries, " << passed << " passed through\n";
  return kExitOk;
}

struct TrackOpts {
  std::string gt_path, out_dir, camera, period = "whole";
  double link_iou = 0.5;
  int max_gap = 3;
  double scale = 0.0;      // px^2 -> cm^2; 0 means not provided
  int smooth_window = 0;   // 0 means no smoothing
};

int cmd_track(const TrackOpts& o) {
  const Dataset d = parse_coco(load_json(o.gt_path));
  fs::create_directories(o.out_dir);
  const std::vector<Frame> frames = frames_from_dataset(d, o.camera);
  const std::vector<Track> tracks = link_instances(frames, {o.link_iou, o.max_gap});

  std::optional<double> scale;
  if (o.scale > 0.0) scale = o.scale;
  std::optional<int> window;
  if (o.smooth_window > 0) window = o.smooth_window;

  std::vector<BiomassSeries> series;
  for (const Track& t : tracks) series.push_back(biomass_series(t, scale, window));

  std::vector<std::vector<std::string>> rows{
      {"track_id", "timestamp", "area_px", "area_cm2", "smoothed"}};
  json jtracks = json::array();
  for (size_t si = 0; si < series.size(); ++si) {
    const BiomassSeries& s = series[si];
    json jpoints = json::array();
    for (size_t i = 0; i < s.points.size(); ++i) {
      const BiomassPoint& p = s.points[i];
      rows.push_back({std::to_string(s.track_id), format_iso8601(p.captured_at),
                      std::to_string(p.area_px),
                      p.area_physical ? fmt(*p.area_physical) : std::string{},
                      i < s.smoothed.size() ? fmt(s.smoothed[i]) : std::string{}});
      json jp{{"timestamp", format_iso8601(p.captured_at)}, {"area_px", p.area_px}};
      if (p.area_physical) jp["area_cm2"] = *p.area_physical;
      if (i < s.smoothed.size()) jp["smoothed"] = s.smoothed[i];
      jpoints.push_back(std::move(jp));
    }
    jtracks.push_back({{"track_id", s.track_id},
                       {"category_id", tracks[si].category_id},
                       {"gap_count", tracks[si].gap_count},
                       {"points", jpoints}});
  }
  write_csv((fs::path(o.out_dir) / "tracks.csv").string(), rows);
  save_json(jtracks, (fs::path(o.out_dir) / "tracks.json").string());

  const auto report =
      change_report(series, o.period == "monthly" ? ReportPeriod::monthly : ReportPeriod::whole);
  std::vector<std::vector<std::string>> crows{{"track_id", "period", "first_area", "last_area",
                                               "abs_change", "rel_change", "n_obs"}};
  for (const ChangeRow& r : report)
    crows.push_back({std::to_string(r.track_id), r.period, fmt(r.first_area), fmt(r.last_area),
                     fmt(r.abs_change), fmt(r.rel_change), std::to_string(r.n_obs)});
  write_csv((fs::path(o.out_dir) / "change_report.csv").string(), crows);
  std::cout << tracks.size() << " tracks\n";
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& label,
               const std::string& out_path) {
  if (inputs.empty()) throw error(errc::validation, "need at least one eval report");
  struct Acc {
    double map = 0, map50 = 0, map75 = 0;
    int n = 0;
  };
  std::map<std::string, std::map<std::string, Acc>> table;  // label -> mode -> acc
  json ref_params;
  for (const std::string& path : inputs) {
    const json doc = load_json(path);
    const json params = doc.at("params");
    if (ref_params.is_null()) ref_params = params;
    else if (ref_params != params) {
      std::string diff;
      for (auto& [k, v] : params.items())
        if (ref_params.value(k, json{}) != v) diff += " " + k;
      throw error(errc::validation, "eval params differ between inputs:" + diff);
    }
    const std::string row_label = doc.value("scenario", label);
    Acc& acc = table[row_label][doc.at("mode").get<std::string>()];
    acc.map += doc.at("mAP").get<double>();
    acc.map50 += doc.at("mAP50").get<double>();
    acc.map75 += doc.at("mAP75").get<double>();
    ++acc.n;
  }

  std::vector<std::vector<std::string>> rows{{"scenario", "bbox_mAP", "bbox_mAP50", "bbox_mAP75",
                                              "segm_mAP", "segm_mAP50", "segm_mAP75"}};
  for (const auto& [row_label, by_mode] : table) {
    auto cell = [&](const std::string& mode, auto pick) -> std::string {
      auto it = by_mode.find(mode);
      if (it == by_mode.end() || it->second.n == 0) return "";
      return fmt(pick(it->second) / it->second.n);
    };
    rows.push_back({row_label, cell("box", [](const Acc& a) { return a.map; }),
                    cell("box", [](const Acc& a) { return a.map50; }),
                    cell("box", [](const Acc& a) { return a.map75; }),
                    cell("mask", [](const Acc& a) { return a.map; }),
                    cell("mask", [](const Acc& a) { return a.map50; }),
                    cell("mask", [](const Acc& a) { return a.map75; })});
  }
  if (!out_path.empty()) write_csv(out_path, rows);

  // aligned text table
  std::vector<size_t> widths(rows[0].size(), 0);
  for (const auto& row : rows)
    for (size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      std::cout << std::left << std::setw(int(widths[i]) + 2) << row[i];
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir, long long seed_override) {
  SynthConfig cfg = config_path.empty() ? SynthConfig{} : synth_config_from_json(load_json(config_path));
  if (seed_override >= 0) cfg.seed = uint64_t(seed_override);
  const SynthResult result = generate_sequence(cfg);
  fs::create_directories(out_dir);

  for (size_t i = 0; i < result.images.size(); ++i)
    write_pgm(result.images[i], (fs::path(out_dir) / result.file_names[i]).string());
  save_json(export_coco(result.dataset), (fs::path(out_dir) / "dataset.json").string());

  std::vector<std::vector<std::string>> mrows{{"file_name", "width", "height", "camera_id", "captured_at"}};
  for (const ManifestRow& row : result.manifest)
    mrows.push_back({row.file_name, std::to_string(row.width), std::to_string(row.height),
                     row.camera_id, row.captured_at});
  write_csv((fs::path(out_dir) / "manifest.csv").string(), mrows);

  std::vector<std::vector<std::string>> lrows{{"frame", "instance", "true_area_px"}};
  for (const LedgerEntry& e : result.ledger)
    lrows.push_back({std::to_string(e.frame), std::to_string(e.instance),
                     std::to_string(e.true_area_px)});
  write_csv((fs::path(out_dir) / "ledger.csv").string(), lrows);
  std::cout << result.images.size() << " frames, " << result.dataset.annotations.size()
            << " annotations\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lichenwatch: lichen time-lapse dataset, evaluation and monitoring toolkit"};
  app.require_subcommand(1);

  // convert
  std::string via_path, manifest_path, attr, pattern, out_path, report_path;
  CLI::App* convert = app.add_subcommand("convert", "Convert a VIA project to COCO JSON");
  convert->add_option("--via", via_path, "VIA 2.x project JSON")->required();
  convert->add_option("--manifest", manifest_path, "image manifest CSV")->required();
  convert->add_option("--attr", attr, "region attribute holding the species code")->required();
  convert->add_option("--pattern", pattern, "filename timestamp regex (y/m/d/H/M groups)");
  convert->add_option("--out", out_path, "output COCO JSON")->required();
  convert->add_option("--report", report_path, "skipped-region report CSV");

  // filter
  std::string f_manifest, f_images, f_out;
  QualityThresholds thr;
  CLI::App* filter = app.add_subcommand("filter", "Score and filter frames by quality");
  filter->add_option("--manifest", f_manifest, "image manifest CSV")->required();
  filter->add_option("--images", f_images, "directory holding the images")->required();
  filter->add_option("--out", f_out, "output directory")->required();
  filter->add_option("--min-blur", thr.min_blur, "minimum Laplacian variance");
  filter->add_option("--min-darkness", thr.min_darkness, "minimum mean luminance");
  filter->add_option("--max-snow", thr.max_snow, "maximum bright-pixel fraction");

  // split
  SplitOpts so;
  CLI::App* split = app.add_subcommand("split", "Generate an experimental split");
  split->add_option("--gt", so.gt_path, "COCO dataset JSON")->required();
  split->add_option("--out", so.out_dir, "output directory")->required();
  split->add_option("--scenario", so.scenario, "cross | random | selective")
      ->check(CLI::IsMember({"cross", "random", "selective"}));
  split->add_option("--species", so.species, "target species code");
  split->add_option("--seed", so.seed, "random seed");
  split->add_option("--train-fraction", so.train_fraction, "train fraction (cross)");
  split->add_option("--n-train", so.n_train, "fine-tune count (random)");
  split->add_option("--n-val", so.n_val, "validation count (random)");
  split->add_option("--pool-fraction", so.pool_fraction, "pool fine-tune fraction (selective)");
  split->add_option("--day-pick", so.day_pick, "noon | first")
      ->check(CLI::IsMember({"noon", "first"}));
  split->add_option("--n-train-override", so.n_train_override,
                    "explicit fine-tune count (selective)");
  split->add_flag("--export-coco", so.export_coco_files, "also write per-side COCO files");

  // eval
  EvalOpts eo;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate predictions against ground truth");
  eval_cmd->add_option("--gt", eo.gt_path, "COCO dataset JSON")->required();
  eval_cmd->add_option("--pred", eo.pred_path, "COCO results JSON")->required();
  eval_cmd->add_option("--out", eo.out_path, "output report JSON")->required();
  eval_cmd->add_option("--mode", eo.mode, "box | mask")->check(CLI::IsMember({"box", "mask"}));
  eval_cmd->add_option("--divisor", eo.divisor, "paper | coco")
      ->check(CLI::IsMember({"paper", "coco"}));
  eval_cmd->add_option("--recall-points", eo.rpoints, "paper | coco")
      ->check(CLI::IsMember({"paper", "coco"}));
  eval_cmd->add_option("--max-dets", eo.max_dets, "max detections per image");
  eval_cmd->add_option("--pr-csv", eo.pr_csv, "optional PR-curve CSV");

  // recalibrate
  std::string r_pred, r_out;
  CLI::App* recal = app.add_subcommand("recalibrate", "Fold predicted mask IoU into scores");
  recal->add_option("--pred", r_pred, "COCO results JSON")->required();
  recal->add_option("--out", r_out, "output results JSON")->required();

  // track
  TrackOpts to;
  CLI::App* track = app.add_subcommand("track", "Link instances over time and extract biomass series");
  track->add_option("--gt", to.gt_path, "COCO dataset JSON with timestamps")->required();
  track->add_option("--out", to.out_dir, "output directory")->required();
  track->add_option("--camera", to.camera, "restrict to one camera id");
  track->add_option("--link-iou", to.link_iou, "association IoU threshold");
  track->add_option("--max-gap", to.max_gap, "frames a track may go unseen");
  track->add_option("--scale", to.scale, "px^2 to cm^2 scale factor");
  track->add_option("--smooth-window", to.smooth_window, "odd rolling-median width");
  track->add_option("--period", to.period, "whole | monthly")
      ->check(CLI::IsMember({"whole", "monthly"}));

  // report
  std::vector<std::string> rep_inputs;
  std::string rep_label = "results", rep_out;
  CLI::App* report = app.add_subcommand("report", "Average eval reports into a comparison table");
  report->add_option("inputs", rep_inputs, "eval report JSON files")->required();
  report->add_option("--label", rep_label, "row label when reports carry no scenario");
  report->add_option("--out", rep_out, "output CSV");

  // synth
  std::string s_config, s_out;
  long long s_seed = -1;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic time-lapse with ground truth");
  synth->add_option("--config", s_config, "SynthConfig JSON");
  synth->add_option("--out", s_out, "output directory")->required();
  synth->add_option("--seed", s_seed, "seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*convert) return cmd_convert(via_path, manifest_path, attr, pattern, out_path, report_path);
    if (*filter) return cmd_filter(f_manifest, f_images, f_out, thr);
    if (*split) return cmd_split(so);
    if (*eval_cmd) return cmd_eval(eo);
    if (*recal) return cmd_recalibrate(r_pred, r_out);
    if (*track) return cmd_track(to);
    if (*report) return cmd_report(rep_inputs, rep_label, rep_out);
    if (*synth) return cmd_synth(s_config, s_out, s_seed);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::io ? kExitUsage : kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
