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

#ifndef CAMTRAP_RENDER_HPP_
#define CAMTRAP_RENDER_HPP_

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "camtrap/dataset.hpp"
#include "camtrap/ecology.hpp"
#include "camtrap/errors.hpp"
#include "camtrap/evaluation.hpp"

namespace camtrap {

// Display rules, applied only at render time (stored values keep full
// precision): percentage means with one decimal, IOU means with two,
// standard deviations and distribution percentages with three significant
// figures. A zero deviation prints as "0.00".

/// Fixed-point with the given number of decimals.
inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

/// Three significant figures, plain decimal notation.
inline std::string format_sig3(double value) {
  if (value == 0.0) return "0.00";
  const double magnitude = std::abs(value);
  int exponent = static_cast<int>(std::floor(std::log10(magnitude)));
  for (;;) {
    const int decimals = std::max(0, 2 - exponent);
    const double scale = std::pow(10.0, decimals);
    const double rounded = std::round(magnitude * scale) / scale;
    // Rounding may carry into the next power of ten (9.996 -> 10.0).
    const int new_exponent =
        static_cast<int>(std::floor(std::log10(rounded)));
    if (new_exponent > exponent) {
      exponent = new_exponent;
      continue;
    }
    return (value < 0.0 ? "-" : "") + format_fixed(rounded, decimals);
  }
}

/// "mean ± std" cell, e.g. "93.0 ± 3.20".
inline std::string format_mean_std(const MeanStd& ms, int mean_decimals = 1) {
  return format_fixed(ms.mean, mean_decimals) + " ± " +
         format_sig3(ms.std);
}

enum class ReportFormat { kMarkdown, kCsv, kJson };

inline ReportFormat parse_report_format(const std::string& name) {
  if (name == "md") return ReportFormat::kMarkdown;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw Error(ErrorKind::kUsage,
              "unknown format \"" + name + "\": expected md, csv or json");
}

namespace detail {

inline std::string json_number(double value) {
  return nlohmann::ordered_json(value).dump();
}

inline std::string md_row(const std::vector<std::string>& cells) {
  std::string row = "|";
  for (const auto& c : cells) row += " " + c + " |";
  return row + "\n";
}

inline std::string md_separator(std::size_t columns) {
  std::string row = "|";
  for (std::size_t i = 0; i < columns; ++i) row += " --- |";
  return row + "\n";
}

}  // namespace detail

inline std::string render_report(const EvalReport& report, ReportFormat format) {
  const std::string fold_cell = report.fold_index < 0
                                    ? std::string("-")
                                    : std::to_string(report.fold_index);
  const std::string iou_cell =
      report.mean_iou ? format_fixed(*report.mean_iou, 2) : std::string("n/a");
  switch (format) {
    case ReportFormat::kJson:
      return to_json(report).dump(2) + "\n";
    case ReportFormat::kMarkdown: {
      std::string out;
      out += detail::md_row({"Fold", "Acc. (%)", "IOU", "GT", "Pred",
                             "Matched", "Spurious"});
      out += detail::md_separator(7);
      out += detail::md_row({fold_cell, format_fixed(report.accuracy_pct, 1),
                             iou_cell, std::to_string(report.counts.total_gt),
                             std::to_string(report.counts.total_pred),
                             std::to_string(report.counts.matched),
                             std::to_string(report.counts.spurious)});
      out += "\n";
      out += detail::md_row({"Species", "GT Boxes", "Correct", "Acc. (%)"});
      out += detail::md_separator(4);
      for (const auto& row : report.per_species) {
        out += detail::md_row({row.species, std::to_string(row.gt_boxes),
                               std::to_string(row.correct),
                               format_fixed(row.accuracy_pct, 1)});
      }
      return out;
    }
    case ReportFormat::kCsv: {
      std::string out =
          "fold_index,accuracy_pct,mean_iou,total_gt,total_pred,matched,"
          "spurious\n";
      out += fold_cell + "," + format_fixed(report.accuracy_pct, 1) + "," +
             iou_cell + "," + std::to_string(report.counts.total_gt) + "," +
             std::to_string(report.counts.total_pred) + "," +
             std::to_string(report.counts.matched) + "," +
             std::to_string(report.counts.spurious) + "\n\n";
      out += "species,gt_boxes,correct,accuracy_pct\n";
      for (const auto& row : report.per_species) {
        out += row.species + "," + std::to_string(row.gt_boxes) + "," +
               std::to_string(row.correct) + "," +
               format_fixed(row.accuracy_pct, 1) + "\n";
      }
      return out;
    }
  }
  throw Error(ErrorKind::kUsage, "unknown report format");
}

inline std::string render_report(const AggregateReport& agg,
                                 ReportFormat format) {
  const std::string iou_cell =
      agg.mean_iou ? format_mean_std(*agg.mean_iou, 2) : std::string("n/a");
  switch (format) {
    case ReportFormat::kJson:
      return to_json(agg).dump(2) + "\n";
    case ReportFormat::kMarkdown: {
      std::string out;
      out += detail::md_row({"Folds", "Acc. (%)", "IOU"});
      out += detail::md_separator(3);
      out += detail::md_row({std::to_string(agg.fold_count),
                             format_mean_std(agg.accuracy_pct), iou_cell});
      out += "\n";
      out += detail::md_row({"Species", "GT Boxes", "Folds", "Acc. (%)"});
      out += detail::md_separator(4);
      for (const auto& row : agg.per_species) {
        out += detail::md_row({row.species, std::to_string(row.gt_boxes),
                               std::to_string(row.folds),
                               format_mean_std(row.accuracy_pct)});
      }
      return out;
    }
    case ReportFormat::kCsv: {
      std::string out = "folds,accuracy_mean,accuracy_std,iou_mean,iou_std\n";
      out += std::to_string(agg.fold_count) + "," +
             format_fixed(agg.accuracy_pct.mean, 1) + "," +
             format_sig3(agg.accuracy_pct.std) + ",";
      if (agg.mean_iou) {
        out += format_fixed(agg.mean_iou->mean, 2) + "," +
               format_sig3(agg.mean_iou->std);
      } else {
        out += "n/a,n/a";
      }
      out += "\n\nspecies,gt_boxes,folds,accuracy_mean,accuracy_std\n";
      for (const auto& row : agg.per_species) {
        out += row.species + "," + std::to_string(row.gt_boxes) + "," +
               std::to_string(row.folds) + "," +
               format_fixed(row.accuracy_pct.mean, 1) + "," +
               format_sig3(row.accuracy_pct.std) + "\n";
      }
      return out;
    }
  }
  throw Error(ErrorKind::kUsage, "unknown report format");
}

inline nlohmann::ordered_json to_json(const ClassSummary& summary) {
  nlohmann::ordered_json j;
  j["image_count"] = summary.image_count;
  j["box_count"] = summary.box_count;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : summary.rows) {
    rows.push_back({{"species", row.species},
                    {"total_quantity", row.total_quantity},
                    {"total_images", row.total_images},
                    {"distribution_pct", row.distribution_pct}});
  }
  j["rows"] = std::move(rows);
  return j;
}

inline std::string render_summary(const ClassSummary& summary,
                                  ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return to_json(summary).dump(2) + "\n";
    case ReportFormat::kMarkdown: {
      std::string out;
      out += detail::md_row({"Species", "Total Quantity", "Total Images",
                             "Image Class Distribution (%)"});
      out += detail::md_separator(4);
      for (const auto& row : summary.rows) {
        out += detail::md_row({row.species, std::to_string(row.total_quantity),
                               std::to_string(row.total_images),
                               format_sig3(row.distribution_pct)});
      }
      return out;
    }
    case ReportFormat::kCsv: {
      std::string out = "species,total_quantity,total_images,distribution_pct\n";
      for (const auto& row : summary.rows) {
        out += row.species + "," + std::to_string(row.total_quantity) + "," +
               std::to_string(row.total_images) + "," +
               format_sig3(row.distribution_pct) + "\n";
      }
      return out;
    }
  }
  throw Error(ErrorKind::kUsage, "unknown report format");
}

inline std::string render_counts(const CountTable& table, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return to_json(table).dump(2) + "\n";
    case ReportFormat::kMarkdown: {
      std::string out = detail::md_row({"Species", "Count"});
      out += detail::md_separator(2);
      for (const auto& [sp, count] : table.totals) {
        out += detail::md_row({sp, std::to_string(count)});
      }
      return out;
    }
    case ReportFormat::kCsv: {
      std::string out = "image_id,species,count\n";
      for (const auto& [image_id, row] : table.per_image) {
        for (const auto& [sp, count] : row) {
          out += image_id + "," + sp + "," + std::to_string(count) + "\n";
        }
      }
      out += "\nspecies,total\n";
      for (const auto& [sp, count] : table.totals) {
        out += sp + "," + std::to_string(count) + "\n";
      }
      return out;
    }
  }
  throw Error(ErrorKind::kUsage, "unknown report format");
}

inline std::string render_abundance(const AbundanceReport& report,
                                    ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return to_json(report).dump(2) + "\n";
    case ReportFormat::kMarkdown: {
      std::string out = detail::md_row({"Species", "Proportion"});
      out += detail::md_separator(2);
      for (const auto& [sp, p] : report.proportions) {
        out += detail::md_row({sp, detail::json_number(p)});
      }
      out += "\nShannon index: " + detail::json_number(report.shannon_index) +
             "\n";
      return out;
    }
    case ReportFormat::kCsv: {
      std::string out = "species,proportion\n";
      for (const auto& [sp, p] : report.proportions) {
        out += sp + "," + detail::json_number(p) + "\n";
      }
      out += "\nshannon_index\n" + detail::json_number(report.shannon_index) +
             "\n";
      return out;
    }
  }
  throw Error(ErrorKind::kUsage, "unknown report format");
}

}  // namespace camtrap

#endif  // CAMTRAP_RENDER_HPP_
