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
#ifndef LICHEN_SPLITS_HPP_
#define LICHEN_SPLITS_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lichen/dataset.hpp"
#include "lichen/rng.hpp"
#include "lichen/timeutil.hpp"

namespace lichen {

enum class Scenario { cross_species, random_finetune, selective_finetune };

inline const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::cross_species: return "cross_species";
    case Scenario::random_finetune: return "random_finetune";
    case Scenario::selective_finetune: return "selective_finetune";
  }
  return "";
}

struct FoldSpec {
  std::string name;
  Scenario scenario = Scenario::cross_species;
  uint64_t seed = 0;
  std::vector<long long> train;
  std::vector<long long> val;
  std::vector<long long> test;
};

inline json foldspec_to_json(const FoldSpec& f) {
  return json{{"name", f.name},         {"scenario", scenario_name(f.scenario)},
              {"seed", f.seed},         {"train", f.train},
              {"val", f.val},           {"test", f.test}};
}

inline long long round_half_even(double x) {
  const double f = std::floor(x);
  const double frac = x - f;
  if (frac < 0.5) return (long long)f;
  if (frac > 0.5) return (long long)f + 1;
  return (long long)f % 2 == 0 ? (long long)f : (long long)f + 1;
}

namespace detail {

/// Species (category id) per image, derived from the image's annotations.
/// Images with no annotations carry no species and are left out of splits.
inline std::map<long long, long long> species_by_image(const Dataset& d) {
  std::map<long long, long long> out;
  for (const auto& a : d.annotations) {
    auto it = out.find(a.image_id);
    if (it == out.end()) out[a.image_id] = a.category_id;
    else if (it->second != a.category_id)
      throw error(errc::validation, "image " + std::to_string(a.image_id) +
                                        " carries more than one species");
  }
  return out;
}

/// Image ids of one species, ascending.
inline std::vector<long long> species_images(const Dataset& d, long long category_id) {
  std::vector<long long> ids;
  for (const auto& [img, cat] : species_by_image(d))
    if (cat == category_id) ids.push_back(img);
  return ids;  // map iteration is already ascending
}

inline long long category_id_for_code(const Dataset& d, const std::string& code) {
  const Category* c = d.find_category_by_code(code);
  if (!c) throw error(errc::validation, "unknown species code: " + code);
  return c->category_id;
}

inline void sort_fold(FoldSpec& f) {
  std::sort(f.train.begin(), f.train.end());
  std::sort(f.val.begin(), f.val.end());
  std::sort(f.test.begin(), f.test.end());
}

}  // namespace detail

/// Scenario i: hold out one species entirely for testing; the remaining
/// species are each shuffled and split into round(n * train_fraction) training
/// images and the remainder for validation (nearest rounding, ties to even).
inline std::vector<FoldSpec> cross_species_folds(const Dataset& d,
                                                 const std::vector<std::string>& holdout_each,
                                                 double train_fraction, uint64_t seed) {
  std::vector<FoldSpec> folds;
  for (const std::string& holdout : holdout_each) {
    const long long holdout_cat = detail::category_id_for_code(d, holdout);
    FoldSpec fold;
    fold.name = "holdout_" + holdout;
    fold.scenario = Scenario::cross_species;
    fold.seed = seed;
    fold.test = detail::species_images(d, holdout_cat);
    if (fold.test.empty()) throw error(errc::validation, "species " + holdout + " has no images");

    Rng rng(seed);
    int other_species = 0;
    for (const Category& cat : d.categories) {
      if (cat.category_id == holdout_cat) continue;
      std::vector<long long> ids = detail::species_images(d, cat.category_id);
      if (ids.empty()) throw error(errc::validation, "species " + cat.code + " has no images");
      ++other_species;
      rng.shuffle(ids);
      const size_t n_train = size_t(round_half_even(double(ids.size()) * train_fraction));
      fold.train.insert(fold.train.end(), ids.begin(), ids.begin() + n_train);
      fold.val.insert(fold.val.end(), ids.begin() + n_train, ids.end());
    }
    if (other_species < 2)
      throw error(errc::insufficient_data, "need at least 2 species besides " + holdout);
    detail::sort_fold(fold);
    folds.push_back(std::move(fold));
  }
  return folds;
}

/// Scenario ii: a seeded uniform sample without replacement of n_train then
/// n_val images of the target species; everything else of that species tests.
inline FoldSpec random_finetune_split(const Dataset& d, const std::string& species, size_t n_train,
                                      size_t n_val, uint64_t seed) {
  const long long cat = detail::category_id_for_code(d, species);
  std::vector<long long> ids = detail::species_images(d, cat);
  if (ids.size() < n_train + n_val + 1)
    throw error(errc::insufficient_data,
                "species " + species + " has " + std::to_string(ids.size()) + " images, needs at least " +
                    std::to_string(n_train + n_val + 1));
  Rng rng(seed);
  rng.shuffle(ids);
  FoldSpec fold;
  fold.name = "random_finetune_" + species;
  fold.scenario = Scenario::random_finetune;
  fold.seed = seed;
  fold.train.assign(ids.begin(), ids.begin() + n_train);
  fold.val.assign(ids.begin() + n_train, ids.begin() + n_train + n_val);
  fold.test.assign(ids.begin() + n_train + n_val, ids.end());
  detail::sort_fold(fold);
  return fold;
}

enum class DayPick { nearest_local_noon, first_of_day };

/// Scenario iii: build a pool of exactly one image per (camera, calendar day),
/// split the pool into round-half-even(|pool| * fraction) fine-tune images and
/// the rest for validation; every species image outside the pool tests.
/// n_train_override bypasses the ratio when a fixed fine-tune count is wanted.
inline FoldSpec selective_finetune_split(const Dataset& d, const std::string& species,
                                         double pool_train_fraction, DayPick day_pick, uint64_t seed,
                                         std::optional<size_t> n_train_override = std::nullopt) {
  const long long cat = detail::category_id_for_code(d, species);
  const std::vector<long long> ids = detail::species_images(d, cat);

  std::string missing;
  for (long long id : ids) {
    const ImageRecord* im = d.find_image(id);
    if (!im->captured_at) missing += " " + std::to_string(id);
  }
  if (!missing.empty())
    throw error(errc::validation, "images missing timestamps:" + missing);

  // (camera, day) -> chosen image
  std::map<std::pair<std::string, long long>, long long> pick;
  auto better = [&](long long cand, long long incumbent) {
    const ImageRecord* a = d.find_image(cand);
    const ImageRecord* b = d.find_image(incumbent);
    if (day_pick == DayPick::first_of_day) {
      if (*a->captured_at != *b->captured_at) return *a->captured_at < *b->captured_at;
    } else {
      const long long da = std::abs(seconds_of_day(*a->captured_at) - 43200);
      const long long db = std::abs(seconds_of_day(*b->captured_at) - 43200);
      if (da != db) return da < db;
    }
    return cand < incumbent;
  };
  for (long long id : ids) {
    const ImageRecord* im = d.find_image(id);
    const auto key = std::make_pair(im->camera_id, utc_day(*im->captured_at));
    auto it = pick.find(key);
    if (it == pick.end() || better(id, it->second)) pick[key] = id;
  }

  std::vector<long long> pool;
  for (const auto& [key, id] : pick) pool.push_back(id);
  std::sort(pool.begin(), pool.end());
  Rng rng(seed);
  rng.shuffle(pool);

  size_t n_train = n_train_override
                       ? *n_train_override
                       : size_t(round_half_even(double(pool.size()) * pool_train_fraction));
  if (n_train > pool.size())
    throw error(errc::insufficient_data, "fine-tune count exceeds pool size " +
                                             std::to_string(pool.size()));

  FoldSpec fold;
  fold.name = "selective_finetune_" + species;
  fold.scenario = Scenario::selective_finetune;
  fold.seed = seed;
  fold.train.assign(pool.begin(), pool.begin() + n_train);
  fold.val.assign(pool.begin() + n_train, pool.end());
  std::set<long long> in_pool(pool.begin(), pool.end());
  for (long long id : ids)
    if (!in_pool.count(id)) fold.test.push_back(id);
  detail::sort_fold(fold);
  return fold;
}

/// Restricts a dataset to a set of image ids, e.g. to export one fold side as
/// its own COCO file.
inline Dataset subset_dataset(const Dataset& d, const std::vector<long long>& image_ids) {
  std::set<long long> keep(image_ids.begin(), image_ids.end());
  Dataset out;
  out.categories = d.categories;
  for (const auto& im : d.images)
    if (keep.count(im.image_id)) out.images.push_back(im);
  for (const auto& a : d.annotations)
    if (keep.count(a.image_id)) out.annotations.push_back(a);
  return out;
}

}  // namespace lichen

#endif  // LICHEN_SPLITS_HPP_
