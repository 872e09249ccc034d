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
//
// camtrap-eval: command-line front end for the camtrap library.
//
// Exit codes: 0 success, 1 domain error (bad data, infeasible request),
// 2 usage error.  Output files are written atomically (temp file + rename)
// after the whole payload has been computed, so a failing run never leaves
// a partial artifact behind.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "camtrap/camtrap.hpp"

namespace {

namespace fs = std::filesystem;
using camtrap::Error;
using camtrap::ErrorKind;

unsigned thread_count() {
  const char* raw = std::getenv("CAMTRAP_EVAL_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1) {
    throw Error(ErrorKind::kUsage,
                "CAMTRAP_EVAL_THREADS must be a positive integer, got \"" +
                    std::string(raw) + "\"");
  }
  return static_cast<unsigned>(value);
}

std::string default_dataset_id(const std::string& path) {
  const std::string stem = fs::path(path).stem().string();
  return stem.empty() ? std::string("dataset") : stem;
}

camtrap::Dataset load_dataset(const std::string& path,
                              const std::string& dataset_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kParse, "cannot open dataset file " + path);
  }
  return camtrap::parse_dataset(
      in, dataset_id.empty() ? default_dataset_id(path) : dataset_id);
}

camtrap::DetectionSet load_detections(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kParse, "cannot open detections file " + path);
  }
  return camtrap::parse_detections(in);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kParse, "cannot open file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Empty `out_path` sends the payload to stdout; otherwise the payload lands
// at `out_path` via a same-directory temp file and an atomic rename.
void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    std::cout.flush();
    return;
  }
  fs::path target(out_path);
  fs::path tmp(target);
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::kInvalidArgument,
                  "cannot write to " + tmp.string());
    }
    out << payload;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::kInvalidArgument,
                  "short write to " + tmp.string());
    }
  }
  fs::rename(tmp, target);
}

struct IngestArgs {
  std::string input;
  std::string out;
  std::string dataset_id;
  double min_box_area = 750.0;
};

struct SplitArgs {
  std::string dataset;
  std::string out;
  std::string dataset_id;
  std::string mode = "kfold";
  int folds = 5;
  double test_frac = 0.2;
  std::uint64_t seed = 42;
};

struct SimulateArgs {
  std::string dataset;
  std::string out;
  std::string dataset_id;
  camtrap::NoiseModel noise;
  std::uint64_t seed = 42;
};

struct EvalArgs {
  std::string dataset;
  std::string detections;
  std::string split;
  std::string out;
  std::string dataset_id;
  std::string format = "json";
  int fold = -1;
  double min_iou = 0.0;
};

struct AggregateArgs {
  std::vector<std::string> reports;
  std::string out;
  std::string format = "md";
};

struct SummaryArgs {
  std::string dataset;
  std::string out;
  std::string dataset_id;
  std::string format = "md";
};

struct EcologyArgs {
  std::string metric;
  std::string dataset;
  std::string detections;
  std::string out;
  std::string dataset_id;
  std::string format = "json";
  std::string variant = "classic";
  long marked = -1;
  long captured = -1;
  long recaptured = -1;
};

void run_ingest(const IngestArgs& args) {
  const auto ds = load_dataset(args.input, args.dataset_id);
  const auto [filtered, stats] =
      camtrap::filter_small_boxes(ds, args.min_box_area);
  const std::string payload = camtrap::serialize_dataset(filtered);
  emit(args.out, payload);
  std::cerr << "ingest: " << ds.images.size() << " images in, "
            << filtered.images.size() << " kept; removed "
            << stats.boxes_removed << " boxes below " << stats.threshold
            << " px^2, dropped " << stats.images_emptied
            << " emptied images\n";
}

void run_split(const SplitArgs& args) {
  const auto ds = load_dataset(args.dataset, args.dataset_id);
  camtrap::SplitPlan plan;
  if (args.mode == "kfold") {
    plan = camtrap::make_kfold(ds, args.folds, args.seed);
  } else {
    plan = camtrap::make_subsample(ds, args.folds, args.test_frac, args.seed);
  }
  emit(args.out, camtrap::serialize_split_plan(plan));
  std::cerr << "split: " << plan.folds.size() << " folds over "
            << ds.images.size() << " images (" << camtrap::to_string(plan.mode)
            << ", seed " << plan.seed << ")\n";
}

void run_simulate(const SimulateArgs& args) {
  const auto ds = load_dataset(args.dataset, args.dataset_id);
  const auto dets =
      camtrap::simulate(ds, args.noise, args.seed, thread_count());
  std::size_t boxes = 0;
  for (const auto& [id, v] : dets.by_image) boxes += v.size();
  emit(args.out, camtrap::serialize_detections(dets));
  std::cerr << "simulate: " << boxes << " detections over "
            << dets.by_image.size() << " images (seed " << args.seed << ")\n";
}

void run_eval(const EvalArgs& args) {
  const auto format = camtrap::parse_report_format(args.format);
  const auto ds = load_dataset(args.dataset, args.dataset_id);
  const auto dets = load_detections(args.detections);

  camtrap::EvalReport report;
  if (!args.split.empty()) {
    const auto plan = camtrap::parse_split_plan(read_file(args.split));
    if (plan.dataset_id != ds.dataset_id) {
      std::cerr << "warning: split plan was made for dataset \""
                << plan.dataset_id << "\" but evaluating \"" << ds.dataset_id
                << "\"\n";
    }
    if (args.fold < 0 || args.fold >= static_cast<int>(plan.folds.size())) {
      throw Error(ErrorKind::kUsage,
                  "--fold must select one of the " +
                      std::to_string(plan.folds.size()) + " folds in " +
                      args.split);
    }
    report = camtrap::evaluate(ds, dets, plan.folds[args.fold].test_ids,
                               args.min_iou, args.fold, thread_count());
  } else {
    report =
        camtrap::evaluate(ds, dets, args.min_iou, -1, thread_count());
  }
  emit(args.out, camtrap::render_report(report, format));
  std::cerr << "eval: accuracy " << camtrap::format_fixed(report.accuracy_pct, 1)
            << "% over " << report.counts.total_gt << " ground-truth boxes\n";
}

void run_aggregate(const AggregateArgs& args) {
  const auto format = camtrap::parse_report_format(args.format);
  std::vector<camtrap::EvalReport> reports;
  reports.reserve(args.reports.size());
  for (const auto& path : args.reports) {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse, path + ": " + e.what());
    }
    try {
      reports.push_back(camtrap::eval_report_from_json(j));
    } catch (const Error& e) {
      throw Error(e.kind(), path + ": " + e.what());
    }
  }
  const auto agg = camtrap::aggregate(reports);
  emit(args.out, camtrap::render_report(agg, format));
  std::cerr << "aggregate: " << agg.fold_count << " reports, accuracy "
            << camtrap::format_mean_std(agg.accuracy_pct) << "%\n";
}

void run_summary(const SummaryArgs& args) {
  const auto format = camtrap::parse_report_format(args.format);
  const auto ds = load_dataset(args.dataset, args.dataset_id);
  const auto summary = camtrap::class_summary(ds);
  emit(args.out, camtrap::render_summary(summary, format));
  std::cerr << "summary: " << summary.rows.size() << " species, "
            << summary.image_count << " images, " << summary.box_count
            << " boxes\n";
}

void run_ecology(const EcologyArgs& args) {
  const auto format = camtrap::parse_report_format(args.format);
  if (args.metric == "lincoln-petersen") {
    if (args.marked < 0 || args.captured < 0 || args.recaptured < 0) {
      throw Error(ErrorKind::kUsage,
                  "--metric lincoln-petersen needs --marked, --captured and "
                  "--recaptured");
    }
    camtrap::LincolnPetersenVariant variant;
    if (args.variant == "classic") {
      variant = camtrap::LincolnPetersenVariant::kClassic;
    } else if (args.variant == "chapman") {
      variant = camtrap::LincolnPetersenVariant::kChapman;
    } else {
      throw Error(ErrorKind::kUsage,
                  "unknown variant \"" + args.variant +
                      "\": expected classic or chapman");
    }
    const camtrap::SurveySample sample{args.marked, args.captured,
                                       args.recaptured};
    const double estimate = camtrap::lincoln_petersen(sample, variant);
    nlohmann::ordered_json j;
    j["variant"] = args.variant;
    j["marked"] = args.marked;
    j["captured"] = args.captured;
    j["recaptured"] = args.recaptured;
    j["estimate"] = estimate;
    std::string payload;
    switch (format) {
      case camtrap::ReportFormat::kJson:
        payload = j.dump(2) + "\n";
        break;
      case camtrap::ReportFormat::kCsv:
        payload = "variant,marked,captured,recaptured,estimate\n" +
                  args.variant + "," + std::to_string(args.marked) + "," +
                  std::to_string(args.captured) + "," +
                  std::to_string(args.recaptured) + "," +
                  nlohmann::ordered_json(estimate).dump() + "\n";
        break;
      case camtrap::ReportFormat::kMarkdown:
        payload = "Population estimate (" + args.variant + "): " +
                  nlohmann::ordered_json(estimate).dump() + "\n";
        break;
    }
    emit(args.out, payload);
    return;
  }

  if (args.dataset.empty() == args.detections.empty()) {
    throw Error(ErrorKind::kUsage,
                "--metric " + args.metric +
                    " needs exactly one of --dataset or --detections");
  }
  camtrap::CountTable table;
  if (!args.dataset.empty()) {
    table = camtrap::species_counts(load_dataset(args.dataset, args.dataset_id));
  } else {
    table = camtrap::species_counts(load_detections(args.detections));
  }
  if (args.metric == "counts") {
    emit(args.out, camtrap::render_counts(table, format));
  } else if (args.metric == "abundance") {
    emit(args.out,
         camtrap::render_abundance(camtrap::relative_abundance(table), format));
  } else {
    throw Error(ErrorKind::kUsage,
                "unknown metric \"" + args.metric +
                    "\": expected counts, abundance or lincoln-petersen");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Camera-trap object-detection evaluation toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand(
      "ingest", "Parse a manifest and remove boxes below a minimum area");
  ingest->add_option("--input", ingest_args.input, "Input manifest (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--out", ingest_args.out,
                     "Output manifest path (default stdout)");
  ingest->add_option("--dataset-id", ingest_args.dataset_id,
                     "Dataset identifier (default: input file stem)");
  ingest->add_option("--min-box-area", ingest_args.min_box_area,
                     "Minimum box area in px^2; smaller boxes are removed");
  ingest->callback([&] { run_ingest(ingest_args); });

  SplitArgs split_args;
  auto* split = app.add_subcommand(
      "split", "Produce a cross-validation split plan for a manifest");
  split->add_option("--dataset", split_args.dataset, "Dataset manifest (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  split->add_option("--out", split_args.out,
                    "Split plan path (default stdout)");
  split->add_option("--dataset-id", split_args.dataset_id,
                    "Dataset identifier (default: file stem)");
  split->add_option("--mode", split_args.mode, "kfold or subsample")
      ->check(CLI::IsMember({"kfold", "subsample"}));
  split->add_option("--folds", split_args.folds,
                    "Fold count (kfold) or repeat count (subsample)");
  auto* frac_opt = split->add_option("--test-frac", split_args.test_frac,
                                     "Held-out fraction (subsample only)");
  split->add_option("--seed", split_args.seed, "Shuffle seed");
  split->callback([&] {
    if (frac_opt->count() > 0 && split_args.mode != "subsample") {
      throw Error(ErrorKind::kUsage, "--test-frac requires --mode subsample");
    }
    run_split(split_args);
  });

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand(
      "simulate", "Synthesize detections from ground truth under a noise model");
  simulate
      ->add_option("--dataset", sim_args.dataset, "Dataset manifest (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--out", sim_args.out,
                       "Detections path (default stdout)");
  simulate->add_option("--dataset-id", sim_args.dataset_id,
                       "Dataset identifier (default: file stem)");
  simulate->add_option("--jitter", sim_args.noise.jitter_frac,
                       "Corner jitter sigma as a fraction of box side");
  simulate->add_option("--class-flip", sim_args.noise.class_flip_prob,
                       "Probability of relabeling a box to another species");
  simulate->add_option("--drop", sim_args.noise.drop_prob,
                       "Probability of dropping a ground-truth box");
  simulate->add_option("--spurious", sim_args.noise.spurious_rate,
                       "Expected count of extra boxes per image");
  simulate->add_option("--score-floor", sim_args.noise.score_floor,
                       "Lower bound of the uniform confidence draw");
  simulate->add_option("--seed", sim_args.seed, "Noise seed");
  simulate->callback([&] { run_simulate(sim_args); });

  EvalArgs eval_args;
  auto* eval = app.add_subcommand(
      "eval", "Score detections against ground truth");
  eval->add_option("--dataset", eval_args.dataset, "Dataset manifest (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--detections", eval_args.detections,
                   "Detections file (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* split_opt =
      eval->add_option("--split", eval_args.split, "Split plan file")
          ->check(CLI::ExistingFile);
  auto* fold_opt = eval->add_option(
      "--fold", eval_args.fold, "Fold index whose test images are scored");
  fold_opt->needs(split_opt);
  eval->add_option("--min-iou", eval_args.min_iou,
                   "Minimum IOU for a candidate match (strict)");
  eval->add_option("--format", eval_args.format, "json, md or csv")
      ->check(CLI::IsMember({"json", "md", "csv"}));
  eval->add_option("--out", eval_args.out, "Report path (default stdout)");
  eval->add_option("--dataset-id", eval_args.dataset_id,
                   "Dataset identifier (default: file stem)");
  eval->callback([&] {
    if (split_opt->count() > 0 && fold_opt->count() == 0) {
      throw Error(ErrorKind::kUsage,
                  "--split needs --fold to select the test images");
    }
    run_eval(eval_args);
  });

  AggregateArgs agg_args;
  auto* aggregate = app.add_subcommand(
      "aggregate", "Combine per-fold reports into mean and deviation");
  aggregate
      ->add_option("--reports", agg_args.reports, "Per-fold report files")
      ->required()
      ->expected(1, -1)
      ->check(CLI::ExistingFile);
  aggregate->add_option("--format", agg_args.format, "md, csv or json")
      ->check(CLI::IsMember({"md", "csv", "json"}));
  aggregate->add_option("--out", agg_args.out, "Output path (default stdout)");
  aggregate->callback([&] { run_aggregate(agg_args); });

  SummaryArgs summary_args;
  auto* summary = app.add_subcommand(
      "summary", "Per-species quantity and image-distribution table");
  summary
      ->add_option("--dataset", summary_args.dataset,
                   "Dataset manifest (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  summary->add_option("--format", summary_args.format, "md, csv or json")
      ->check(CLI::IsMember({"md", "csv", "json"}));
  summary->add_option("--out", summary_args.out, "Output path (default stdout)");
  summary->add_option("--dataset-id", summary_args.dataset_id,
                      "Dataset identifier (default: file stem)");
  summary->callback([&] { run_summary(summary_args); });

  EcologyArgs eco_args;
  auto* ecology = app.add_subcommand(
      "ecology", "Species counts, relative abundance, or population estimate");
  ecology
      ->add_option("--metric", eco_args.metric,
                   "counts, abundance or lincoln-petersen")
      ->required()
      ->check(CLI::IsMember({"counts", "abundance", "lincoln-petersen"}));
  ecology->add_option("--dataset", eco_args.dataset, "Dataset manifest (JSONL)")
      ->check(CLI::ExistingFile);
  ecology
      ->add_option("--detections", eco_args.detections,
                   "Detections file (JSONL)")
      ->check(CLI::ExistingFile);
  ecology->add_option("--variant", eco_args.variant, "classic or chapman");
  ecology->add_option("--marked", eco_args.marked,
                      "Individuals marked in the first survey");
  ecology->add_option("--captured", eco_args.captured,
                      "Individuals captured in the second survey");
  ecology->add_option("--recaptured", eco_args.recaptured,
                      "Marked individuals seen again in the second survey");
  ecology->add_option("--format", eco_args.format, "json, md or csv")
      ->check(CLI::IsMember({"json", "md", "csv"}));
  ecology->add_option("--out", eco_args.out, "Output path (default stdout)");
  ecology->add_option("--dataset-id", eco_args.dataset_id,
                      "Dataset identifier (default: file stem)");
  ecology->callback([&] { run_ecology(eco_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kUsage ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
