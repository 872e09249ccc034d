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

#ifndef CAMTRAP_DATASET_HPP_
#define CAMTRAP_DATASET_HPP_

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "camtrap/errors.hpp"
#include "camtrap/geometry.hpp"

namespace camtrap {

/// A ground-truth box together with its species label. Species strings are
/// free-form and case-sensitive; no normalization is applied.
struct LabeledBox {
  BoundingBox box;
  std::string species;

  friend bool operator==(const LabeledBox&, const LabeledBox&) = default;
};

/// One camera-trap image record: identifier, optional pixel dimensions and
/// capture tag, and the annotated boxes in stored order.
struct AnnotatedImage {
  std::string image_id;
  std::optional<int> width;
  std::optional<int> height;
  std::optional<std::string> capture_tag;
  std::vector<LabeledBox> boxes;

  friend bool operator==(const AnnotatedImage&, const AnnotatedImage&) = default;
};

/// Ground-truth manifest. The registry lists every species of the dataset in
/// first-encounter order; it may include declared-but-unused entries (for
/// example after filtering removed a species' last box).
struct Dataset {
  std::string dataset_id;
  std::vector<AnnotatedImage> images;
  std::vector<std::string> species_registry;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct ClassSummaryRow {
  std::string species;
  long total_quantity = 0;  // boxes of this species
  long total_images = 0;    // images containing at least one such box
  double distribution_pct = 0.0;  // total_images / dataset images * 100
};

// Rows are per-species image shares, not a partition: species co-occurring
// in one image each count it, so percentages may sum past 100.
struct ClassSummary {
  std::vector<ClassSummaryRow> rows;
  long image_count = 0;
  long box_count = 0;
};

struct FilterStats {
  long boxes_removed = 0;
  long images_emptied = 0;
  double threshold = 0.0;
};

namespace detail {

inline Error parse_error(long line_no, const std::string& what) {
  return Error(ErrorKind::kParse,
               "line " + std::to_string(line_no) + ": " + what);
}

inline void check_known_keys(const nlohmann::ordered_json& obj,
                             std::initializer_list<const char*> known,
                             long line_no) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (item.key() == k) { ok = true; break; }
    }
    if (!ok) throw parse_error(line_no, "unexpected key \"" + item.key() + "\"");
  }
}

inline BoundingBox parse_xyxy(const nlohmann::ordered_json& arr, long line_no) {
  if (!arr.is_array() || arr.size() != 4) {
    throw parse_error(line_no, "\"xyxy\" must be an array of four numbers");
  }
  for (const auto& v : arr) {
    if (!v.is_number()) {
      throw parse_error(line_no, "\"xyxy\" must be an array of four numbers");
    }
  }
  const BoundingBox box{arr[0].get<double>(), arr[1].get<double>(),
                        arr[2].get<double>(), arr[3].get<double>()};
  if (!is_valid(box)) {
    throw parse_error(line_no,
                      "invalid box geometry: coordinates must be finite, "
                      ">= 0, with x_max > x_min and y_max > y_min");
  }
  return box;
}

inline std::string parse_species(const nlohmann::ordered_json& v, long line_no) {
  if (!v.is_string() || v.get<std::string>().empty()) {
    throw parse_error(line_no, "\"species\" must be a nonempty string");
  }
  return v.get<std::string>();
}

inline nlohmann::ordered_json parse_line(const std::string& line, long line_no) {
  try {
    return nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(line_no, e.what());
  }
}

inline nlohmann::ordered_json xyxy_json(const BoundingBox& b) {
  return nlohmann::ordered_json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

}  // namespace detail

/// Verify a box lies inside the declared image dimensions (checked per axis,
/// only where the dimension is known).
inline void check_box_in_bounds(const AnnotatedImage& img,
                                const BoundingBox& box) {
  const bool x_ok = !img.width || (box.x_min >= 0.0 && box.x_max <= *img.width);
  const bool y_ok =
      !img.height || (box.y_min >= 0.0 && box.y_max <= *img.height);
  if (!x_ok || !y_ok) {
    throw Error(ErrorKind::kOutOfBounds,
                "image \"" + img.image_id + "\": box exceeds declared bounds");
  }
}

/// Read a JSON-Lines manifest, one image per line. Blank lines are skipped.
/// The species registry is built from the boxes in encounter order and the
/// input image order is preserved.
inline Dataset parse_dataset(std::istream& in, const std::string& dataset_id) {
  Dataset ds;
  ds.dataset_id = dataset_id;
  std::unordered_set<std::string> seen_ids;
  std::unordered_set<std::string> seen_species;

  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const auto j = detail::parse_line(line, line_no);
    if (!j.is_object()) throw detail::parse_error(line_no, "expected an object");
    detail::check_known_keys(
        j, {"image_id", "width", "height", "capture_tag", "boxes"}, line_no);

    AnnotatedImage img;
    if (!j.contains("image_id") || !j["image_id"].is_string() ||
        j["image_id"].get<std::string>().empty()) {
      throw detail::parse_error(line_no, "\"image_id\" must be a nonempty string");
    }
    img.image_id = j["image_id"].get<std::string>();
    if (!seen_ids.insert(img.image_id).second) {
      throw Error(ErrorKind::kDuplicateRecord,
                  "line " + std::to_string(line_no) + ": duplicate image_id \"" +
                      img.image_id + "\"");
    }

    for (const char* dim : {"width", "height"}) {
      if (!j.contains(dim)) continue;
      const auto& v = j[dim];
      if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw detail::parse_error(line_no, std::string("\"") + dim +
                                               "\" must be a positive integer");
      }
      (dim[0] == 'w' ? img.width : img.height) = v.get<int>();
    }
    if (j.contains("capture_tag")) {
      if (!j["capture_tag"].is_string()) {
        throw detail::parse_error(line_no, "\"capture_tag\" must be a string");
      }
      img.capture_tag = j["capture_tag"].get<std::string>();
    }

    if (!j.contains("boxes") || !j["boxes"].is_array()) {
      throw detail::parse_error(line_no, "\"boxes\" must be an array");
    }
    for (const auto& jb : j["boxes"]) {
      if (!jb.is_object()) {
        throw detail::parse_error(line_no, "box entries must be objects");
      }
      detail::check_known_keys(jb, {"species", "xyxy"}, line_no);
      if (!jb.contains("species") || !jb.contains("xyxy")) {
        throw detail::parse_error(line_no, "box needs \"species\" and \"xyxy\"");
      }
      LabeledBox lb;
      lb.species = detail::parse_species(jb["species"], line_no);
      lb.box = detail::parse_xyxy(jb["xyxy"], line_no);
      check_box_in_bounds(img, lb.box);
      if (seen_species.insert(lb.species).second) {
        ds.species_registry.push_back(lb.species);
      }
      img.boxes.push_back(std::move(lb));
    }
    ds.images.push_back(std::move(img));
  }
  return ds;
}

inline nlohmann::ordered_json to_json(const AnnotatedImage& img) {
  nlohmann::ordered_json j;
  j["image_id"] = img.image_id;
  if (img.width) j["width"] = *img.width;
  if (img.height) j["height"] = *img.height;
  if (img.capture_tag) j["capture_tag"] = *img.capture_tag;
  auto boxes = nlohmann::ordered_json::array();
  for (const auto& lb : img.boxes) {
    nlohmann::ordered_json jb;
    jb["species"] = lb.species;
    jb["xyxy"] = detail::xyxy_json(lb.box);
    boxes.push_back(std::move(jb));
  }
  j["boxes"] = std::move(boxes);
  return j;
}

/// Emit the manifest as JSON Lines in stored order. Numbers use shortest
/// round-trip formatting, so parse(serialize(ds)) reproduces ds exactly.
inline void serialize_dataset(const Dataset& ds, std::ostream& out) {
  for (const auto& img : ds.images) {
    out << to_json(img).dump() << '\n';
  }
}

inline std::string serialize_dataset(const Dataset& ds) {
  std::ostringstream out;
  serialize_dataset(ds, out);
  return out.str();
}

/// Drop every box with area strictly below `min_area` (square pixels).
/// Images left without boxes are dropped and counted. The registry and
/// dataset id are carried over unchanged, so the operation is idempotent.
inline std::pair<Dataset, FilterStats> filter_small_boxes(
    const Dataset& ds, double min_area = 750.0) {
  if (!(min_area > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "min_area must be > 0, got " + std::to_string(min_area));
  }
  Dataset out;
  out.dataset_id = ds.dataset_id;
  out.species_registry = ds.species_registry;
  FilterStats stats;
  stats.threshold = min_area;

  for (const auto& img : ds.images) {
    AnnotatedImage kept = img;
    kept.boxes.clear();
    for (const auto& lb : img.boxes) {
      if (box_area(lb.box) >= min_area) {
        kept.boxes.push_back(lb);
      } else {
        ++stats.boxes_removed;
      }
    }
    if (kept.boxes.empty()) {
      ++stats.images_emptied;
    } else {
      out.images.push_back(std::move(kept));
    }
  }
  return {std::move(out), stats};
}

/// Per-species box and image counts with exact image-share percentages,
/// sorted by box count descending, then species name.
inline ClassSummary class_summary(const Dataset& ds) {
  if (ds.images.empty()) {
    throw Error(ErrorKind::kEmptyInput, "class_summary: dataset has no images");
  }
  std::unordered_map<std::string, ClassSummaryRow> acc;
  for (const auto& sp : ds.species_registry) acc[sp].species = sp;

  ClassSummary summary;
  summary.image_count = static_cast<long>(ds.images.size());
  for (const auto& img : ds.images) {
    std::unordered_set<std::string> present;
    for (const auto& lb : img.boxes) {
      auto& row = acc[lb.species];
      row.species = lb.species;  // tolerate species missing from the registry
      ++row.total_quantity;
      ++summary.box_count;
      present.insert(lb.species);
    }
    for (const auto& sp : present) ++acc[sp].total_images;
  }

  for (auto& [sp, row] : acc) {
    row.distribution_pct =
        static_cast<double>(row.total_images) /
        static_cast<double>(summary.image_count) * 100.0;
    summary.rows.push_back(std::move(row));
  }
  std::sort(summary.rows.begin(), summary.rows.end(),
            [](const ClassSummaryRow& a, const ClassSummaryRow& b) {
              if (a.total_quantity != b.total_quantity) {
                return a.total_quantity > b.total_quantity;
              }
              return a.species < b.species;
            });
  return summary;
}

}  // namespace camtrap

#endif  // CAMTRAP_DATASET_HPP_
