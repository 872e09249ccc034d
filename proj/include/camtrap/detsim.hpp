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

#ifndef CAMTRAP_DETSIM_HPP_
#define CAMTRAP_DETSIM_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "camtrap/dataset.hpp"
#include "camtrap/detections.hpp"
#include "camtrap/errors.hpp"
#include "camtrap/parallel.hpp"
#include "camtrap/rng.hpp"

namespace camtrap {

// Controlled corruption of ground truth into a synthetic detection set.
// Jitter is proportional to the box side, so severity is scale-free.
struct NoiseModel {
  double jitter_frac = 0.0;     // sigma of corner displacement / side length
  double class_flip_prob = 0.0; // chance of relabeling to another species
  double drop_prob = 0.0;       // chance of losing a ground-truth box
  double spurious_rate = 0.0;   // expected extra boxes per image (Poisson)
  double score_floor = 0.0;     // confidences drawn uniformly in [floor, 1]
};

inline void validate(const NoiseModel& noise) {
  const auto bad = [](const std::string& what) -> Error {
    return Error(ErrorKind::kInvalidArgument, "noise model: " + what);
  };
  if (!(noise.jitter_frac >= 0.0) || !std::isfinite(noise.jitter_frac)) {
    throw bad("jitter_frac must be finite and >= 0");
  }
  if (!(noise.class_flip_prob >= 0.0) || !(noise.class_flip_prob <= 1.0)) {
    throw bad("class_flip_prob must lie in [0, 1]");
  }
  if (!(noise.drop_prob >= 0.0) || !(noise.drop_prob <= 1.0)) {
    throw bad("drop_prob must lie in [0, 1]");
  }
  if (!(noise.spurious_rate >= 0.0) || !std::isfinite(noise.spurious_rate)) {
    throw bad("spurious_rate must be finite and >= 0");
  }
  if (!(noise.score_floor >= 0.0) || !(noise.score_floor <= 1.0)) {
    throw bad("score_floor must lie in [0, 1]");
  }
}

namespace detail {

// Region spurious boxes are drawn from: the declared image bounds when
// known, otherwise the hull of the image's boxes inflated to twice its
// size (clamped at zero), otherwise the unit square.
struct SpuriousRegion {
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;
};

inline SpuriousRegion spurious_region(const AnnotatedImage& img) {
  SpuriousRegion r;
  if (img.width && img.height) {
    r.x_hi = static_cast<double>(*img.width);
    r.y_hi = static_cast<double>(*img.height);
    return r;
  }
  if (!img.boxes.empty()) {
    double x0 = img.boxes[0].box.x_min, x1 = img.boxes[0].box.x_max;
    double y0 = img.boxes[0].box.y_min, y1 = img.boxes[0].box.y_max;
    for (const auto& lb : img.boxes) {
      x0 = std::min(x0, lb.box.x_min);
      y0 = std::min(y0, lb.box.y_min);
      x1 = std::max(x1, lb.box.x_max);
      y1 = std::max(y1, lb.box.y_max);
    }
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    const double w = x1 - x0, h = y1 - y0;
    r.x_lo = std::max(0.0, cx - w);
    r.x_hi = cx + w;
    r.y_lo = std::max(0.0, cy - h);
    r.y_hi = cy + h;
    return r;
  }
  return r;
}

// Two distinct uniform draws, sorted. Redraws on an exact tie so the box
// always has positive extent.
inline std::pair<double, double> ordered_pair(SplitMix64& rng, double lo,
                                              double hi) {
  double a, b;
  do {
    a = rng.uniform(lo, hi);
    b = rng.uniform(lo, hi);
  } while (a == b);
  if (a > b) std::swap(a, b);
  return {a, b};
}

inline std::vector<Detection> simulate_image(const AnnotatedImage& img,
                                             const NoiseModel& noise,
                                             const std::vector<std::string>& registry,
                                             std::uint64_t seed) {
  auto rng = SplitMix64::substream(seed, img.image_id);
  std::vector<Detection> dets;
  dets.reserve(img.boxes.size());

  // Fixed draw order per surviving box: drop check, four corner offsets
  // (x_min, y_min, x_max, y_max), flip check (plus one index draw when it
  // fires), then the confidence. A dropped box consumes only its drop draw.
  for (const auto& lb : img.boxes) {
    if (rng.uniform() < noise.drop_prob) continue;

    const double sx = noise.jitter_frac * (lb.box.x_max - lb.box.x_min);
    const double sy = noise.jitter_frac * (lb.box.y_max - lb.box.y_min);
    double x0 = lb.box.x_min + sx * rng.gaussian();
    double y0 = lb.box.y_min + sy * rng.gaussian();
    double x1 = lb.box.x_max + sx * rng.gaussian();
    double y1 = lb.box.y_max + sy * rng.gaussian();
    if (x1 < x0) std::swap(x0, x1);
    if (y1 < y0) std::swap(y0, y1);
    x0 = std::max(0.0, x0);
    y0 = std::max(0.0, y0);
    if (img.width) {
      x0 = std::min(x0, static_cast<double>(*img.width));
      x1 = std::min(x1, static_cast<double>(*img.width));
    }
    if (img.height) {
      y0 = std::min(y0, static_cast<double>(*img.height));
      y1 = std::min(y1, static_cast<double>(*img.height));
    }

    Detection d;
    d.box = {x0, y0, x1, y1};
    d.species = lb.species;
    if (rng.uniform() < noise.class_flip_prob) {
      auto pick = rng.below(registry.size() - 1);
      for (std::size_t s = 0, seen = 0; s < registry.size(); ++s) {
        if (registry[s] == lb.species) continue;
        if (seen++ == pick) {
          d.species = registry[s];
          break;
        }
      }
    }
    d.score = noise.score_floor + rng.uniform() * (1.0 - noise.score_floor);
    // A box clamped down to zero extent has left the frame entirely; the
    // detector simply never saw it.
    if (is_valid(d.box)) dets.push_back(std::move(d));
  }

  const auto region = spurious_region(img);
  const std::uint64_t extra = rng.poisson(noise.spurious_rate);
  for (std::uint64_t s = 0; s < extra; ++s) {
    const auto [x0, x1] = ordered_pair(rng, region.x_lo, region.x_hi);
    const auto [y0, y1] = ordered_pair(rng, region.y_lo, region.y_hi);
    Detection d;
    d.box = {x0, y0, x1, y1};
    d.species = registry[rng.below(registry.size())];
    d.score = noise.score_floor + rng.uniform() * (1.0 - noise.score_floor);
    dets.push_back(std::move(d));
  }
  return dets;
}

}  // namespace detail

/// Corrupt the ground truth into a detection set. Every image uses its own
/// PRNG substream keyed by image_id, so the output is identical for a given
/// (dataset, noise, seed) no matter the iteration order or thread count.
inline DetectionSet simulate(const Dataset& ds, const NoiseModel& noise,
                             std::uint64_t seed, unsigned threads = 1) {
  validate(noise);
  if (noise.class_flip_prob > 0.0 && ds.species_registry.size() < 2) {
    throw Error(ErrorKind::kInfeasibleFlip,
                "simulate: class flipping needs at least two species in the "
                "registry");
  }
  if (noise.spurious_rate > 0.0 && ds.species_registry.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "simulate: spurious boxes need a nonempty species registry");
  }

  std::vector<std::vector<Detection>> per_image(ds.images.size());
  detail::parallel_for(ds.images.size(), threads, [&](std::size_t i) {
    per_image[i] =
        detail::simulate_image(ds.images[i], noise, ds.species_registry, seed);
  });

  DetectionSet set;
  for (std::size_t i = 0; i < ds.images.size(); ++i) {
    set.by_image.emplace(ds.images[i].image_id, std::move(per_image[i]));
  }
  return set;
}

}  // namespace camtrap

#endif  // CAMTRAP_DETSIM_HPP_
