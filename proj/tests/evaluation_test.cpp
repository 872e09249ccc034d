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

#include "camtrap/evaluation.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

namespace {

using camtrap::Dataset;
using camtrap::DetectionSet;
using camtrap::ErrorKind;
using camtrap::EvalReport;
using camtrap_tests::thrown_kind;

DetectionSet identity_detections(const Dataset& ds) {
  DetectionSet dets;
  for (const auto& img : ds.images) {
    auto& v = dets.by_image[img.image_id];
    for (const auto& lb : img.boxes) v.push_back({lb.box, lb.species, 1.0});
  }
  return dets;
}

Dataset two_animal_image() {
  Dataset ds;
  ds.dataset_id = "pair";
  camtrap::AnnotatedImage img;
  img.image_id = "frame";
  img.boxes = {{{0, 0, 10, 10}, "zebra"}, {{20, 20, 30, 30}, "wildebeest"}};
  ds.images.push_back(img);
  ds.species_registry = {"zebra", "wildebeest"};
  return ds;
}

TEST_CASE("identity detections score a perfect run") {
  const Dataset ds = camtrap_tests::grid_dataset(20, 4, {"fox", "hare"});
  const auto report = camtrap::evaluate(ds, identity_detections(ds));
  CHECK(report.accuracy_pct == 100.0);
  REQUIRE(report.mean_iou.has_value());
  CHECK(*report.mean_iou == 1.0);
  CHECK(report.counts.total_gt == 80);
  CHECK(report.counts.total_pred == 80);
  CHECK(report.counts.matched == 80);
  CHECK(report.counts.spurious == 0);
  CHECK(report.fold_index == -1);
}

TEST_CASE("misclassified and spurious detections split the score") {
  const Dataset ds = two_animal_image();
  DetectionSet dets;
  dets.by_image["frame"] = {{{1, 1, 11, 11}, "zebra", 1.0},
                            {{19, 19, 29, 29}, "zebra", 1.0},
                            {{50, 50, 60, 60}, "wildebeest", 1.0}};
  const auto report = camtrap::evaluate(ds, dets);

  CHECK(report.accuracy_pct == 50.0);
  REQUIRE(report.mean_iou.has_value());
  CHECK_THAT(*report.mean_iou,
             Catch::Matchers::WithinAbs(81.0 / 119.0, 1e-15));
  CHECK(report.counts.total_gt == 2);
  CHECK(report.counts.total_pred == 3);
  CHECK(report.counts.matched == 2);
  CHECK(report.counts.spurious == 1);

  REQUIRE(report.per_species.size() == 2);
  CHECK(report.per_species[0].species == "wildebeest");  // tie, name order
  CHECK(report.per_species[0].gt_boxes == 1);
  CHECK(report.per_species[0].correct == 0);
  CHECK(report.per_species[0].accuracy_pct == 0.0);
  CHECK(report.per_species[1].species == "zebra");
  CHECK(report.per_species[1].correct == 1);
  CHECK(report.per_species[1].accuracy_pct == 100.0);
}

TEST_CASE("unmatched ground truth counts against accuracy") {
  const Dataset ds = two_animal_image();
  DetectionSet dets;
  dets.by_image["frame"] = {{{1, 1, 11, 11}, "zebra", 1.0}};
  const auto report = camtrap::evaluate(ds, dets);
  CHECK(report.accuracy_pct == 50.0);
  CHECK(report.counts.matched == 1);
  CHECK(report.counts.spurious == 0);
}

TEST_CASE("detections outside the subset are ignored") {
  Dataset ds = two_animal_image();
  camtrap::AnnotatedImage other;
  other.image_id = "elsewhere";
  other.boxes = {{{0, 0, 5, 5}, "zebra"}};
  ds.images.push_back(other);

  DetectionSet dets = identity_detections(ds);
  const auto report =
      camtrap::evaluate(ds, dets, std::vector<std::string>{"frame"});
  CHECK(report.counts.total_gt == 2);
  CHECK(report.counts.total_pred == 2);
  CHECK(report.accuracy_pct == 100.0);
}

TEST_CASE("missing detection entries mean zero predictions") {
  const Dataset ds = two_animal_image();
  const auto report = camtrap::evaluate(ds, DetectionSet{});
  CHECK(report.accuracy_pct == 0.0);
  CHECK_FALSE(report.mean_iou.has_value());
  CHECK(report.counts.total_pred == 0);
}

TEST_CASE("evaluate validates its subset") {
  const Dataset ds = two_animal_image();
  const DetectionSet dets = identity_detections(ds);
  CHECK(thrown_kind([&] {
          camtrap::evaluate(ds, dets, std::vector<std::string>{"nope"});
        }) == ErrorKind::kInvalidArgument);
  CHECK(thrown_kind([&] {
          camtrap::evaluate(ds, dets,
                            std::vector<std::string>{"frame", "frame"});
        }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("a subset without ground truth is an error") {
  Dataset ds = two_animal_image();
  camtrap::AnnotatedImage empty;
  empty.image_id = "empty";
  ds.images.push_back(empty);
  CHECK(thrown_kind([&] {
          camtrap::evaluate(ds, identity_detections(ds),
                            std::vector<std::string>{"empty"});
        }) == ErrorKind::kEmptyEvaluation);
}

TEST_CASE("thread count never changes the result") {
  const Dataset ds = camtrap_tests::grid_dataset(40, 3, {"a", "b", "c"});
  DetectionSet dets = identity_detections(ds);
  // Perturb one image so the outcome is not all-perfect.
  dets.by_image["img_0005"][0].species = "b";
  dets.by_image["img_0007"].push_back({{1000, 900, 1100, 1000}, "a", 0.4});

  const auto sequential = camtrap::evaluate(ds, dets, 0.0, -1, 1);
  const auto threaded = camtrap::evaluate(ds, dets, 0.0, -1, 4);
  CHECK(sequential == threaded);
  CHECK(to_json(sequential).dump() == to_json(threaded).dump());
}

TEST_CASE("accuracy denominator is the subset box count") {
  const Dataset ds = two_animal_image();
  DetectionSet flood;
  auto& v = flood.by_image["frame"];
  v.push_back({{0, 0, 10, 10}, "zebra", 1.0});
  for (int i = 0; i < 50; ++i) {
    const double x0 = 100.0 + 20.0 * i;
    v.push_back({{x0, 0, x0 + 10, 10}, "zebra", 0.5});
  }
  const auto report = camtrap::evaluate(ds, flood);
  CHECK(report.counts.total_gt == 2);
  CHECK(report.accuracy_pct == 50.0);
  CHECK(report.counts.spurious == 50);
}

TEST_CASE("mean_and_sample_std uses the n-1 denominator") {
  const auto ms = camtrap::mean_and_sample_std({90.0, 95.0});
  CHECK(ms.mean == 92.5);
  CHECK_THAT(ms.std, Catch::Matchers::WithinAbs(std::sqrt(12.5), 1e-12));

  CHECK(camtrap::mean_and_sample_std({42.0}).std == 0.0);
  CHECK(camtrap::mean_and_sample_std({7.0, 7.0, 7.0}).std == 0.0);
}

EvalReport report_with(int fold, double acc, std::optional<double> iou) {
  EvalReport r;
  r.fold_index = fold;
  r.accuracy_pct = acc;
  r.mean_iou = iou;
  r.counts = {10, 10, 10, 0};
  r.per_species = {{"fox", 6, 5, acc}, {"hare", 4, 4, 100.0}};
  return r;
}

TEST_CASE("aggregate averages across folds") {
  const auto agg = camtrap::aggregate(
      {report_with(0, 90.0, 0.8), report_with(1, 95.0, 0.9)});
  CHECK(agg.fold_count == 2);
  CHECK(agg.accuracy_pct.mean == 92.5);
  CHECK_THAT(agg.accuracy_pct.std,
             Catch::Matchers::WithinAbs(std::sqrt(12.5), 1e-12));
  REQUIRE(agg.mean_iou.has_value());
  CHECK_THAT(agg.mean_iou->mean, Catch::Matchers::WithinAbs(0.85, 1e-12));
  REQUIRE(agg.per_species.size() == 2);
  CHECK(agg.per_species[0].species == "fox");
  CHECK(agg.per_species[0].gt_boxes == 12);
  CHECK(agg.per_species[0].folds == 2);
}

TEST_CASE("aggregate of identical reports has zero deviation") {
  const std::vector<EvalReport> reports(5, report_with(0, 93.0, 0.8));
  const auto agg = camtrap::aggregate(reports);
  CHECK(agg.accuracy_pct.mean == 93.0);
  CHECK(agg.accuracy_pct.std == 0.0);
  CHECK(agg.mean_iou->std == 0.0);
}

TEST_CASE("aggregate handles single reports and partial species") {
  const auto single = camtrap::aggregate({report_with(3, 88.0, std::nullopt)});
  CHECK(single.fold_count == 1);
  CHECK(single.accuracy_pct.mean == 88.0);
  CHECK(single.accuracy_pct.std == 0.0);
  CHECK_FALSE(single.mean_iou.has_value());

  EvalReport extra = report_with(1, 95.0, 0.9);
  extra.per_species.push_back({"lynx", 2, 1, 50.0});
  const auto agg =
      camtrap::aggregate({report_with(0, 90.0, std::nullopt), extra});
  REQUIRE(agg.per_species.size() == 3);
  // The lynx row saw only one fold.
  bool found = false;
  for (const auto& row : agg.per_species) {
    if (row.species == "lynx") {
      found = true;
      CHECK(row.folds == 1);
      CHECK(row.accuracy_pct.mean == 50.0);
      CHECK(row.accuracy_pct.std == 0.0);
    }
  }
  CHECK(found);
  // Only one fold carried a mean IOU.
  REQUIRE(agg.mean_iou.has_value());
  CHECK(agg.mean_iou->mean == 0.9);
  CHECK(agg.mean_iou->std == 0.0);
}

TEST_CASE("aggregate refuses an empty list") {
  CHECK(thrown_kind([] { camtrap::aggregate({}); }) == ErrorKind::kEmptyInput);
}

TEST_CASE("report json round trips") {
  const Dataset ds = two_animal_image();
  DetectionSet dets;
  dets.by_image["frame"] = {{{1, 1, 11, 11}, "zebra", 1.0}};
  const auto report = camtrap::evaluate(ds, dets, 0.0, 2);
  const auto back = camtrap::eval_report_from_json(to_json(report));
  CHECK(back == report);

  const auto no_match = camtrap::evaluate(ds, DetectionSet{});
  CHECK(to_json(no_match)["mean_iou"].is_null());
  CHECK(camtrap::eval_report_from_json(to_json(no_match)) == no_match);
}

TEST_CASE("report json parsing rejects malformed documents") {
  const auto kind = [](const char* text) {
    return thrown_kind([&] {
      camtrap::eval_report_from_json(nlohmann::ordered_json::parse(text));
    });
  };
  CHECK(kind("[]") == ErrorKind::kParse);
  CHECK(kind("{}") == ErrorKind::kParse);
  CHECK(kind("{\"fold_index\":0,\"accuracy_pct\":50.0,\"mean_iou\":null,"
             "\"counts\":{\"total_gt\":1,\"total_pred\":0,\"matched\":0},"
             "\"per_species\":[]}") == ErrorKind::kParse);
}

}  // namespace
