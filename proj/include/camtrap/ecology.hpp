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

#ifndef CAMTRAP_ECOLOGY_HPP_
#define CAMTRAP_ECOLOGY_HPP_

#include <cmath>
#include <map>
#include <string>

#include <json.hpp>

#include "camtrap/dataset.hpp"
#include "camtrap/detections.hpp"
#include "camtrap/errors.hpp"

namespace camtrap {

// Individuals are counted as boxes; no re-identification across images.
struct CountTable {
  std::map<std::string, std::map<std::string, long>> per_image;
  std::map<std::string, long> totals;

  friend bool operator==(const CountTable&, const CountTable&) = default;
};

struct AbundanceReport {
  std::map<std::string, double> proportions;
  double shannon_index = 0.0;  // nats

  friend bool operator==(const AbundanceReport&, const AbundanceReport&) = default;
};

/// Two-survey mark-recapture sample: `marked` individuals tagged in the
/// first survey, `captured` seen in the second, `recaptured` of those
/// already tagged.
struct SurveySample {
  long marked = 0;
  long captured = 0;
  long recaptured = 0;
};

enum class LincolnPetersenVariant { kClassic, kChapman };

inline CountTable species_counts(const Dataset& ds) {
  CountTable table;
  for (const auto& img : ds.images) {
    auto& row = table.per_image[img.image_id];
    for (const auto& lb : img.boxes) {
      ++row[lb.species];
      ++table.totals[lb.species];
    }
  }
  return table;
}

inline CountTable species_counts(const DetectionSet& dets) {
  CountTable table;
  for (const auto& [image_id, list] : dets.by_image) {
    auto& row = table.per_image[image_id];
    for (const auto& d : list) {
      ++row[d.species];
      ++table.totals[d.species];
    }
  }
  return table;
}

/// Per-species share of all counted individuals plus the Shannon diversity
/// index H = -sum p ln p over species with nonzero counts.
inline AbundanceReport relative_abundance(const CountTable& table) {
  long total = 0;
  for (const auto& [sp, count] : table.totals) total += count;
  if (total <= 0) {
    throw Error(ErrorKind::kEmptyInput,
                "relative_abundance: table holds no individuals");
  }
  AbundanceReport report;
  for (const auto& [sp, count] : table.totals) {
    if (count <= 0) continue;
    const double p = static_cast<double>(count) / static_cast<double>(total);
    report.proportions[sp] = p;
    report.shannon_index -= p * std::log(p);
  }
  return report;
}

/// Closed-population size estimate from a two-survey design.
/// classic: M*C/R (undefined at R = 0); chapman: (M+1)(C+1)/(R+1) - 1.
inline double lincoln_petersen(
    const SurveySample& sample,
    LincolnPetersenVariant variant = LincolnPetersenVariant::kClassic) {
  if (sample.marked < 0 || sample.captured < 0 || sample.recaptured < 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "lincoln_petersen: counts must be non-negative");
  }
  if (sample.recaptured > sample.marked ||
      sample.recaptured > sample.captured) {
    throw Error(ErrorKind::kInvalidArgument,
                "lincoln_petersen: recaptured cannot exceed marked or captured");
  }
  const double m = static_cast<double>(sample.marked);
  const double c = static_cast<double>(sample.captured);
  const double r = static_cast<double>(sample.recaptured);
  if (variant == LincolnPetersenVariant::kClassic) {
    if (sample.recaptured == 0) {
      throw Error(ErrorKind::kDivisionUndefined,
                  "lincoln_petersen: classic estimate is undefined with zero "
                  "recaptures; use the chapman variant");
    }
    return m * c / r;
  }
  return (m + 1.0) * (c + 1.0) / (r + 1.0) - 1.0;
}

inline nlohmann::ordered_json to_json(const CountTable& table) {
  nlohmann::ordered_json j;
  auto per_image = nlohmann::ordered_json::object();
  for (const auto& [image_id, row] : table.per_image) {
    auto counts = nlohmann::ordered_json::object();
    for (const auto& [sp, count] : row) counts[sp] = count;
    per_image[image_id] = std::move(counts);
  }
  j["per_image"] = std::move(per_image);
  auto totals = nlohmann::ordered_json::object();
  for (const auto& [sp, count] : table.totals) totals[sp] = count;
  j["totals"] = std::move(totals);
  return j;
}

inline nlohmann::ordered_json to_json(const AbundanceReport& report) {
  nlohmann::ordered_json j;
  auto props = nlohmann::ordered_json::object();
  for (const auto& [sp, p] : report.proportions) props[sp] = p;
  j["proportions"] = std::move(props);
  j["shannon_index"] = report.shannon_index;
  return j;
}

}  // namespace camtrap

#endif  // CAMTRAP_ECOLOGY_HPP_
