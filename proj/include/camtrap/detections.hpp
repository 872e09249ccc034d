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

#ifndef CAMTRAP_DETECTIONS_HPP_
#define CAMTRAP_DETECTIONS_HPP_

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "camtrap/dataset.hpp"
#include "camtrap/errors.hpp"
#include "camtrap/geometry.hpp"

namespace camtrap {

/// A detector output: box, predicted species, confidence in [0, 1].
struct Detection {
  BoundingBox box;
  std::string species;
  double score = 1.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Keyed and serialized in image_id order so output bytes never depend on
// how the set was assembled.
struct DetectionSet {
  std::map<std::string, std::vector<Detection>> by_image;

  friend bool operator==(const DetectionSet&, const DetectionSet&) = default;
};

/// Read detections as JSON Lines (`{"image_id":..., "detections":[...]}`).
/// Lists may be empty; a repeated image_id is an error.
inline DetectionSet parse_detections(std::istream& in) {
  DetectionSet set;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const auto j = detail::parse_line(line, line_no);
    if (!j.is_object()) throw detail::parse_error(line_no, "expected an object");
    detail::check_known_keys(j, {"image_id", "detections"}, line_no);
    if (!j.contains("image_id") || !j["image_id"].is_string() ||
        j["image_id"].get<std::string>().empty()) {
      throw detail::parse_error(line_no, "\"image_id\" must be a nonempty string");
    }
    const auto image_id = j["image_id"].get<std::string>();
    if (set.by_image.count(image_id)) {
      throw Error(ErrorKind::kDuplicateRecord,
                  "line " + std::to_string(line_no) + ": duplicate image_id \"" +
                      image_id + "\"");
    }
    if (!j.contains("detections") || !j["detections"].is_array()) {
      throw detail::parse_error(line_no, "\"detections\" must be an array");
    }

    std::vector<Detection> dets;
    for (const auto& jd : j["detections"]) {
      if (!jd.is_object()) {
        throw detail::parse_error(line_no, "detection entries must be objects");
      }
      detail::check_known_keys(jd, {"species", "xyxy", "score"}, line_no);
      if (!jd.contains("species") || !jd.contains("xyxy") ||
          !jd.contains("score")) {
        throw detail::parse_error(line_no,
                                  "detection needs \"species\", \"xyxy\", \"score\"");
      }
      Detection d;
      d.species = detail::parse_species(jd["species"], line_no);
      d.box = detail::parse_xyxy(jd["xyxy"], line_no);
      if (!jd["score"].is_number()) {
        throw detail::parse_error(line_no, "\"score\" must be a number");
      }
      d.score = jd["score"].get<double>();
      if (!std::isfinite(d.score) || d.score < 0.0 || d.score > 1.0) {
        throw detail::parse_error(line_no, "\"score\" must lie in [0, 1]");
      }
      dets.push_back(std::move(d));
    }
    set.by_image.emplace(image_id, std::move(dets));
  }
  return set;
}

inline void serialize_detections(const DetectionSet& set, std::ostream& out) {
  for (const auto& [image_id, dets] : set.by_image) {
    nlohmann::ordered_json j;
    j["image_id"] = image_id;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& d : dets) {
      nlohmann::ordered_json jd;
      jd["species"] = d.species;
      jd["xyxy"] = detail::xyxy_json(d.box);
      jd["score"] = d.score;
      arr.push_back(std::move(jd));
    }
    j["detections"] = std::move(arr);
    out << j.dump() << '\n';
  }
}

inline std::string serialize_detections(const DetectionSet& set) {
  std::ostringstream out;
  serialize_detections(set, out);
  return out.str();
}

}  // namespace camtrap

#endif  // CAMTRAP_DETECTIONS_HPP_
