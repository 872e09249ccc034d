// Copyright 2026 The camtrap-eval Authors. All Rights Reserved.
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

#ifndef CAMTRAP_SPLITS_HPP_
#define CAMTRAP_SPLITS_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "camtrap/dataset.hpp"
#include "camtrap/errors.hpp"
#include "camtrap/rng.hpp"

namespace camtrap {

/// One train/test division. Ids keep their shuffled generation order.
struct Fold {
  int index = 0;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;

  friend bool operator==(const Fold&, const Fold&) = default;
};

enum class SplitMode { kKFold, kSubsample };

inline const char* to_string(SplitMode mode) {
  return mode == SplitMode::kKFold ? "kfold" : "subsample";
}

struct SplitPlan {
  SplitMode mode = SplitMode::kKFold;
  std::uint64_t seed = 0;
  std::string dataset_id;
  std::vector<Fold> folds;

  friend bool operator==(const SplitPlan&, const SplitPlan&) = default;
};

namespace detail {

inline std::vector<std::string> image_ids(const Dataset& ds) {
  std::vector<std::string> ids;
  ids.reserve(ds.images.size());
  for (const auto& img : ds.images) ids.push_back(img.image_id);
  return ids;
}

}  // namespace detail

/// Shuffle the image ids once with the root stream for `seed`, then cut the
/// shuffled order into k contiguous blocks; fold i tests on block i and
/// trains on the rest. Block sizes differ by at most one, with the earlier
/// blocks taking the remainder.
inline SplitPlan make_kfold(const Dataset& ds, int k = 5,
                            std::uint64_t seed = 42) {
  const auto n = static_cast<long>(ds.images.size());
  if (k < 2) {
    throw Error(ErrorKind::kInfeasibleSplit,
                "make_kfold: need k >= 2, got " + std::to_string(k));
  }
  if (n < k) {
    throw Error(ErrorKind::kInfeasibleSplit,
                "make_kfold: k = " + std::to_string(k) + " exceeds the " +
                    std::to_string(n) + " images available");
  }

  std::vector<std::string> ids = detail::image_ids(ds);
  SplitMix64 rng(seed);
  rng.shuffle(ids);

  SplitPlan plan;
  plan.mode = SplitMode::kKFold;
  plan.seed = seed;
  plan.dataset_id = ds.dataset_id;

  const long base = n / k;
  const long remainder = n % k;
  long start = 0;
  for (int i = 0; i < k; ++i) {
    const long size = base + (i < remainder ? 1 : 0);
    Fold fold;
    fold.index = i;
    fold.test_ids.assign(ids.begin() + start, ids.begin() + start + size);
    fold.train_ids.assign(ids.begin(), ids.begin() + start);
    fold.train_ids.insert(fold.train_ids.end(), ids.begin() + start + size,
                          ids.end());
    plan.folds.push_back(std::move(fold));
    start += size;
  }
  return plan;
}

/// Independent repeated holdout: each fold shuffles the ids with the
/// substream labelled by the decimal fold index and tests on the first
/// round(test_frac * N) of them. Test sets may overlap across folds.
inline SplitPlan make_subsample(const Dataset& ds, int repeats = 5,
                                double test_frac = 0.2,
                                std::uint64_t seed = 42) {
  const auto n = static_cast<long>(ds.images.size());
  if (repeats < 1) {
    throw Error(ErrorKind::kInfeasibleSplit,
                "make_subsample: need repeats >= 1, got " +
                    std::to_string(repeats));
  }
  if (!(test_frac > 0.0) || !(test_frac < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "make_subsample: test_frac must lie in (0, 1)");
  }
  const long test_size =
      static_cast<long>(std::floor(test_frac * static_cast<double>(n) + 0.5));
  if (test_size <= 0 || test_size >= n) {
    throw Error(ErrorKind::kInfeasibleSplit,
                "make_subsample: test fraction " + std::to_string(test_frac) +
                    " of " + std::to_string(n) +
                    " images leaves an empty train or test side");
  }

  SplitPlan plan;
  plan.mode = SplitMode::kSubsample;
  plan.seed = seed;
  plan.dataset_id = ds.dataset_id;
  for (int i = 0; i < repeats; ++i) {
    std::vector<std::string> ids = detail::image_ids(ds);
    auto rng = SplitMix64::substream(seed, std::to_string(i));
    rng.shuffle(ids);
    Fold fold;
    fold.index = i;
    fold.test_ids.assign(ids.begin(), ids.begin() + test_size);
    fold.train_ids.assign(ids.begin() + test_size, ids.end());
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

inline nlohmann::ordered_json to_json(const SplitPlan& plan) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(plan.mode);
  j["seed"] = plan.seed;
  j["dataset_id"] = plan.dataset_id;
  auto folds = nlohmann::ordered_json::array();
  for (const auto& fold : plan.folds) {
    folds.push_back({{"index", fold.index},
                     {"train_ids", fold.train_ids},
                     {"test_ids", fold.test_ids}});
  }
  j["folds"] = std::move(folds);
  return j;
}

inline std::string serialize_split_plan(const SplitPlan& plan) {
  return to_json(plan).dump(2) + "\n";
}

inline SplitPlan parse_split_plan(const std::string& text) {
  const auto fail = [](const std::string& what) -> Error {
    return Error(ErrorKind::kParse, "split plan: " + what);
  };
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
  if (!j.is_object()) throw fail("expected an object");
  for (const char* key : {"mode", "seed", "dataset_id", "folds"}) {
    if (!j.contains(key)) throw fail(std::string("missing \"") + key + "\"");
  }
  SplitPlan plan;
  const auto mode = j["mode"].get<std::string>();
  if (mode == "kfold") {
    plan.mode = SplitMode::kKFold;
  } else if (mode == "subsample") {
    plan.mode = SplitMode::kSubsample;
  } else {
    throw fail("unknown mode \"" + mode + "\"");
  }
  if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
    throw fail("bad seed");
  }
  plan.seed = j["seed"].get<std::uint64_t>();
  plan.dataset_id = j["dataset_id"].get<std::string>();
  if (!j["folds"].is_array()) throw fail("bad folds");
  for (const auto& jf : j["folds"]) {
    if (!jf.is_object() || !jf.contains("index") || !jf.contains("train_ids") ||
        !jf.contains("test_ids")) {
      throw fail("bad fold entry");
    }
    Fold fold;
    fold.index = jf["index"].get<int>();
    fold.train_ids = jf["train_ids"].get<std::vector<std::string>>();
    fold.test_ids = jf["test_ids"].get<std::vector<std::string>>();
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

}  // namespace camtrap

#endif  // CAMTRAP_SPLITS_HPP_
