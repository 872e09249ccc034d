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

#ifndef CAMTRAP_EVALUATION_HPP_
#define CAMTRAP_EVALUATION_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "camtrap/dataset.hpp"
#include "camtrap/detections.hpp"
#include "camtrap/errors.hpp"
#include "camtrap/matching.hpp"
#include "camtrap/parallel.hpp"

namespace camtrap {

struct SpeciesAccuracyRow {
  std::string species;
  long gt_boxes = 0;
  long correct = 0;
  double accuracy_pct = 0.0;

  friend bool operator==(const SpeciesAccuracyRow&,
                         const SpeciesAccuracyRow&) = default;
};

struct EvalCounts {
  long total_gt = 0;
  long total_pred = 0;
  long matched = 0;
  long spurious = 0;

  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

// Accuracy is species-classification accuracy over ground-truth boxes:
// unmatched ground truth counts against it, spurious predictions do not.
// mean_iou covers matched pairs only and is absent when nothing matched.
struct EvalReport {
  int fold_index = -1;  // -1 when not tied to a split fold
  double accuracy_pct = 0.0;
  std::optional<double> mean_iou;
  std::vector<SpeciesAccuracyRow> per_species;
  EvalCounts counts;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;

  friend bool operator==(const MeanStd&, const MeanStd&) = default;
};

struct SpeciesAggregateRow {
  std::string species;
  long gt_boxes = 0;  // summed over contributing folds
  int folds = 0;
  MeanStd accuracy_pct;

  friend bool operator==(const SpeciesAggregateRow&,
                         const SpeciesAggregateRow&) = default;
};

struct AggregateReport {
  int fold_count = 0;
  MeanStd accuracy_pct;
  std::optional<MeanStd> mean_iou;
  std::vector<SpeciesAggregateRow> per_species;

  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

/// Mean and sample standard deviation (n-1 denominator, 0 for n <= 1).
inline MeanStd mean_and_sample_std(const std::vector<double>& values) {
  MeanStd ms;
  if (values.empty()) return ms;
  double sum = 0.0;
  for (double v : values) sum += v;
  ms.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - ms.mean) * (v - ms.mean);
    ms.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return ms;
}

/// Score a detection set against the ground truth of `image_subset`.
/// Per-image matching may run on several threads; accumulation happens in
/// image_id lexicographic order, so the result never depends on `threads`.
/// Detections for images outside the subset are ignored.
inline EvalReport evaluate(const Dataset& ds, const DetectionSet& dets,
                           const std::vector<std::string>& image_subset,
                           double min_iou = 0.0, int fold_index = -1,
                           unsigned threads = 1) {
  std::unordered_map<std::string, const AnnotatedImage*> by_id;
  by_id.reserve(ds.images.size());
  for (const auto& img : ds.images) by_id.emplace(img.image_id, &img);

  std::vector<std::string> ids = image_subset;
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!by_id.count(ids[i])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "evaluate: image \"" + ids[i] + "\" is not in the dataset");
    }
    if (i > 0 && ids[i] == ids[i - 1]) {
      throw Error(ErrorKind::kInvalidArgument,
                  "evaluate: duplicate image \"" + ids[i] + "\" in subset");
    }
  }

  static const std::vector<Detection> kNoDetections;
  std::vector<ImageMatchResult> results(ids.size());
  detail::parallel_for(ids.size(), threads, [&](std::size_t i) {
    const AnnotatedImage& img = *by_id.at(ids[i]);
    const auto it = dets.by_image.find(ids[i]);
    const auto& preds = it == dets.by_image.end() ? kNoDetections : it->second;
    results[i] = match_boxes(img.boxes, preds, min_iou);
    results[i].image_id = ids[i];
  });

  EvalReport report;
  report.fold_index = fold_index;
  double iou_sum = 0.0;
  long correct_total = 0;
  std::map<std::string, SpeciesAccuracyRow> species;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const AnnotatedImage& img = *by_id.at(ids[i]);
    const ImageMatchResult& res = results[i];
    report.counts.total_gt += static_cast<long>(img.boxes.size());
    const auto it = dets.by_image.find(ids[i]);
    if (it != dets.by_image.end()) {
      report.counts.total_pred += static_cast<long>(it->second.size());
    }
    report.counts.matched += static_cast<long>(res.matches.size());
    report.counts.spurious += static_cast<long>(res.unmatched_pred.size());
    for (const auto& lb : img.boxes) {
      auto& row = species[lb.species];
      row.species = lb.species;
      ++row.gt_boxes;
    }
    for (const auto& m : res.matches) {
      iou_sum += m.iou;
      if (m.class_correct) {
        ++correct_total;
        ++species[img.boxes[m.gt_index].species].correct;
      }
    }
  }

  if (report.counts.total_gt == 0) {
    throw Error(ErrorKind::kEmptyEvaluation,
                "evaluate: subset contains no ground-truth boxes");
  }
  report.accuracy_pct = 100.0 * static_cast<double>(correct_total) /
                        static_cast<double>(report.counts.total_gt);
  if (report.counts.matched > 0) {
    report.mean_iou = iou_sum / static_cast<double>(report.counts.matched);
  }
  for (auto& [sp, row] : species) {
    row.accuracy_pct = 100.0 * static_cast<double>(row.correct) /
                       static_cast<double>(row.gt_boxes);
    report.per_species.push_back(std::move(row));
  }
  std::sort(report.per_species.begin(), report.per_species.end(),
            [](const SpeciesAccuracyRow& a, const SpeciesAccuracyRow& b) {
              if (a.gt_boxes != b.gt_boxes) return a.gt_boxes > b.gt_boxes;
              return a.species < b.species;
            });
  return report;
}

/// Evaluate over every image of the dataset.
inline EvalReport evaluate(const Dataset& ds, const DetectionSet& dets,
                           double min_iou = 0.0, int fold_index = -1,
                           unsigned threads = 1) {
  std::vector<std::string> ids;
  ids.reserve(ds.images.size());
  for (const auto& img : ds.images) ids.push_back(img.image_id);
  return evaluate(ds, dets, ids, min_iou, fold_index, threads);
}

/// Mean and sample standard deviation across fold reports, overall and per
/// species. A species missing from a fold contributes no sample there; the
/// same goes for an absent per-fold mean IOU.
inline AggregateReport aggregate(const std::vector<EvalReport>& reports) {
  if (reports.empty()) {
    throw Error(ErrorKind::kEmptyInput, "aggregate: no reports given");
  }
  AggregateReport agg;
  agg.fold_count = static_cast<int>(reports.size());

  std::vector<double> accuracies, ious;
  for (const auto& r : reports) {
    accuracies.push_back(r.accuracy_pct);
    if (r.mean_iou) ious.push_back(*r.mean_iou);
  }
  agg.accuracy_pct = mean_and_sample_std(accuracies);
  if (!ious.empty()) agg.mean_iou = mean_and_sample_std(ious);

  std::map<std::string, std::pair<SpeciesAggregateRow, std::vector<double>>>
      species;
  for (const auto& r : reports) {
    for (const auto& row : r.per_species) {
      auto& [agg_row, samples] = species[row.species];
      agg_row.species = row.species;
      agg_row.gt_boxes += row.gt_boxes;
      ++agg_row.folds;
      samples.push_back(row.accuracy_pct);
    }
  }
  for (auto& [sp, entry] : species) {
    entry.first.accuracy_pct = mean_and_sample_std(entry.second);
    agg.per_species.push_back(std::move(entry.first));
  }
  std::sort(agg.per_species.begin(), agg.per_species.end(),
            [](const SpeciesAggregateRow& a, const SpeciesAggregateRow& b) {
              if (a.gt_boxes != b.gt_boxes) return a.gt_boxes > b.gt_boxes;
              return a.species < b.species;
            });
  return agg;
}

inline nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["fold_index"] = report.fold_index;
  j["accuracy_pct"] = report.accuracy_pct;
  if (report.mean_iou) {
    j["mean_iou"] = *report.mean_iou;
  } else {
    j["mean_iou"] = nullptr;
  }
  j["counts"] = {{"total_gt", report.counts.total_gt},
                 {"total_pred", report.counts.total_pred},
                 {"matched", report.counts.matched},
                 {"spurious", report.counts.spurious}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.per_species) {
    rows.push_back({{"species", row.species},
                    {"gt_boxes", row.gt_boxes},
                    {"correct", row.correct},
                    {"accuracy_pct", row.accuracy_pct}});
  }
  j["per_species"] = std::move(rows);
  return j;
}

inline nlohmann::ordered_json to_json(const AggregateReport& agg) {
  const auto mean_std = [](const MeanStd& ms) {
    return nlohmann::ordered_json{{"mean", ms.mean}, {"std", ms.std}};
  };
  nlohmann::ordered_json j;
  j["folds"] = agg.fold_count;
  j["accuracy_pct"] = mean_std(agg.accuracy_pct);
  if (agg.mean_iou) {
    j["mean_iou"] = mean_std(*agg.mean_iou);
  } else {
    j["mean_iou"] = nullptr;
  }
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : agg.per_species) {
    rows.push_back({{"species", row.species},
                    {"gt_boxes", row.gt_boxes},
                    {"folds", row.folds},
                    {"accuracy_pct", mean_std(row.accuracy_pct)}});
  }
  j["per_species"] = std::move(rows);
  return j;
}

/// Rehydrate an evaluation report written by the CLI, for aggregation.
inline EvalReport eval_report_from_json(const nlohmann::ordered_json& j) {
  const auto fail = [](const std::string& what) -> Error {
    return Error(ErrorKind::kParse, "evaluation report: " + what);
  };
  if (!j.is_object()) throw fail("expected an object");
  for (const char* key : {"fold_index", "accuracy_pct", "mean_iou", "counts",
                          "per_species"}) {
    if (!j.contains(key)) throw fail(std::string("missing \"") + key + "\"");
  }
  EvalReport report;
  if (!j["fold_index"].is_number_integer()) throw fail("bad fold_index");
  report.fold_index = j["fold_index"].get<int>();
  if (!j["accuracy_pct"].is_number()) throw fail("bad accuracy_pct");
  report.accuracy_pct = j["accuracy_pct"].get<double>();
  if (!j["mean_iou"].is_null()) {
    if (!j["mean_iou"].is_number()) throw fail("bad mean_iou");
    report.mean_iou = j["mean_iou"].get<double>();
  }
  const auto& counts = j["counts"];
  for (const char* key : {"total_gt", "total_pred", "matched", "spurious"}) {
    if (!counts.contains(key) || !counts[key].is_number_integer()) {
      throw fail(std::string("bad counts.") + key);
    }
  }
  report.counts = {counts["total_gt"].get<long>(),
                   counts["total_pred"].get<long>(),
                   counts["matched"].get<long>(),
                   counts["spurious"].get<long>()};
  if (!j["per_species"].is_array()) throw fail("bad per_species");
  for (const auto& row : j["per_species"]) {
    if (!row.is_object() || !row.contains("species") ||
        !row.contains("gt_boxes") || !row.contains("correct") ||
        !row.contains("accuracy_pct")) {
      throw fail("bad per_species row");
    }
    report.per_species.push_back({row["species"].get<std::string>(),
                                  row["gt_boxes"].get<long>(),
                                  row["correct"].get<long>(),
                                  row["accuracy_pct"].get<double>()});
  }
  return report;
}

}  // namespace camtrap

#endif  // CAMTRAP_EVALUATION_HPP_
