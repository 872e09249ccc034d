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

#ifndef CAMTRAP_MATCHING_HPP_
#define CAMTRAP_MATCHING_HPP_

#include <algorithm>
#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

#include "camtrap/dataset.hpp"
#include "camtrap/detections.hpp"
#include "camtrap/geometry.hpp"

namespace camtrap {

/// One greedy pairing of a ground-truth box with a prediction.
struct MatchPair {
  std::size_t gt_index = 0;
  std::size_t pred_index = 0;
  double iou = 0.0;
  bool class_correct = false;

  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

/// Matching outcome for a single image. `matches` is in greedy extraction
/// order (IOU non-increasing); every index appears at most once across
/// matches and the unmatched lists, which are sorted ascending.
struct ImageMatchResult {
  std::string image_id;
  std::vector<MatchPair> matches;
  std::vector<std::size_t> unmatched_gt;
  std::vector<std::size_t> unmatched_pred;

  friend bool operator==(const ImageMatchResult&, const ImageMatchResult&) = default;
};

namespace detail {

struct CandidatePair {
  double iou;
  std::size_t gt;
  std::size_t pred;
};

// Value-based tie-break key. Candidates with equal IOU are ordered by
// (gt box, gt species, pred box, pred species, -score), which makes the
// greedy result independent of input list order. Input indices enter only
// as the very last resort, for pairs that are identical in every field.
inline auto candidate_key(const CandidatePair& c,
                          const std::vector<LabeledBox>& gt,
                          const std::vector<Detection>& preds) {
  const LabeledBox& g = gt[c.gt];
  const Detection& p = preds[c.pred];
  return std::tuple<const BoundingBox&, const std::string&,
                    const BoundingBox&, const std::string&, double>(
      g.box, g.species, p.box, p.species, -p.score);
}

inline bool candidate_before(const CandidatePair& a, const CandidatePair& b,
                             const std::vector<LabeledBox>& gt,
                             const std::vector<Detection>& preds) {
  if (a.iou != b.iou) return a.iou > b.iou;
  const auto ka = candidate_key(a, gt, preds);
  const auto kb = candidate_key(b, gt, preds);
  if (ka != kb) return ka < kb;
  return std::tie(a.gt, a.pred) < std::tie(b.gt, b.pred);
}

}  // namespace detail

/// Greedy highest-overlap matching: repeatedly take the remaining
/// (ground truth, prediction) pair with the largest IOU above `min_iou`
/// (strictly) and retire both members. Classification is correct on exact
/// species-string equality. Either list may be empty.
inline ImageMatchResult match_boxes(const std::vector<LabeledBox>& gt,
                                    const std::vector<Detection>& preds,
                                    double min_iou = 0.0) {
  std::vector<detail::CandidatePair> candidates;
  candidates.reserve(gt.size() * preds.size());
  for (std::size_t g = 0; g < gt.size(); ++g) {
    for (std::size_t p = 0; p < preds.size(); ++p) {
      const double overlap = iou(gt[g].box, preds[p].box);
      if (overlap > min_iou) candidates.push_back({overlap, g, p});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const detail::CandidatePair& a, const detail::CandidatePair& b) {
              return detail::candidate_before(a, b, gt, preds);
            });

  ImageMatchResult result;
  std::vector<bool> gt_used(gt.size(), false);
  std::vector<bool> pred_used(preds.size(), false);
  for (const auto& c : candidates) {
    if (gt_used[c.gt] || pred_used[c.pred]) continue;
    gt_used[c.gt] = true;
    pred_used[c.pred] = true;
    result.matches.push_back(
        {c.gt, c.pred, c.iou, gt[c.gt].species == preds[c.pred].species});
  }
  for (std::size_t g = 0; g < gt.size(); ++g) {
    if (!gt_used[g]) result.unmatched_gt.push_back(g);
  }
  for (std::size_t p = 0; p < preds.size(); ++p) {
    if (!pred_used[p]) result.unmatched_pred.push_back(p);
  }
  return result;
}

}  // namespace camtrap

#endif  // CAMTRAP_MATCHING_HPP_
