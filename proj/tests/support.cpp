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

#include "support.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace camtrap_tests {

namespace fs = std::filesystem;

camtrap::Dataset grid_dataset(int images, int boxes_per_image,
                              const std::vector<std::string>& species) {
  if (boxes_per_image > 16 * 9) {
    throw std::invalid_argument("grid_dataset: at most 144 boxes per image");
  }
  camtrap::Dataset ds;
  ds.dataset_id = "grid";
  ds.species_registry = species;
  ds.images.reserve(static_cast<std::size_t>(images));
  int species_cursor = 0;
  for (int i = 0; i < images; ++i) {
    camtrap::AnnotatedImage img;
    char id[32];
    std::snprintf(id, sizeof(id), "img_%04d", i);
    img.image_id = id;
    img.width = 1920;
    img.height = 1080;
    for (int b = 0; b < boxes_per_image; ++b) {
      const int col = b % 16;
      const int row = b / 16;
      const double x0 = 20.0 + 120.0 * col;
      const double y0 = 20.0 + 120.0 * row;
      img.boxes.push_back(
          {{x0, y0, x0 + 60.0, y0 + 60.0},
           species[static_cast<std::size_t>(species_cursor) % species.size()]});
      ++species_cursor;
    }
    ds.images.push_back(std::move(img));
  }
  return ds;
}

namespace {

struct SpeciesRow {
  const char* name;
  int quantity;
  int images;
};

// Published per-species totals: 1109 boxes over 947 species-image slots.
constexpr SpeciesRow kRctRows[] = {
    {"Mouflon", 126, 45},          {"Collared Peccary", 96, 82},
    {"Agouti", 87, 87},            {"Wild Boar", 81, 56},
    {"Red Deer", 68, 68},          {"Red Brocket Deer", 63, 63},
    {"Ocelot", 63, 63},            {"White Nosed Couti", 60, 38},
    {"Paca", 57, 57},              {"Great Tinamou", 52, 44},
    {"White Tailed Deer", 47, 47}, {"Roe Deer", 46, 46},
    {"Common Opossum", 44, 44},    {"Red Squirrel", 39, 39},
    {"Bird Species", 38, 29},      {"Spiny Rat", 34, 34},
    {"European Hare", 31, 28},     {"Wood Mouse", 29, 29},
    {"Red Fox", 25, 25},           {"Coiban Agouti", 23, 23},
};

camtrap::LabeledBox replica_box(int slot, const char* species) {
  const double x0 = 100.0 + 350.0 * slot;
  const double y0 = 300.0;
  return {{x0, y0, x0 + 100.0, y0 + 100.0}, species};
}

}  // namespace

camtrap::Dataset rct_replica() {
  camtrap::Dataset ds;
  ds.dataset_id = "rct_replica";
  for (const auto& row : kRctRows) ds.species_registry.push_back(row.name);

  // The image column sums to 947 while the dataset holds 946 frames, so one
  // frame must carry two species. The first Agouti image also receives the
  // boxes of the final (two-box) Mouflon slot.
  for (const auto& row : kRctRows) {
    const bool is_mouflon = std::string(row.name) == "Mouflon";
    const int slots = row.images;
    const int dedicated = is_mouflon ? slots - 1 : slots;
    const int base = row.quantity / slots;
    const int remainder = row.quantity % slots;
    for (int s = 0; s < dedicated; ++s) {
      camtrap::AnnotatedImage img;
      img.width = 1920;
      img.height = 1080;
      const int boxes = base + (s < remainder ? 1 : 0);
      for (int b = 0; b < boxes; ++b) img.boxes.push_back(replica_box(b, row.name));
      ds.images.push_back(std::move(img));
    }
    if (is_mouflon) continue;
    if (std::string(row.name) == "Agouti") {
      // Fold the leftover Mouflon boxes into the frame created first above.
      auto& shared = ds.images[ds.images.size() - static_cast<std::size_t>(dedicated)];
      const int mouflon_slots = kRctRows[0].images;
      const int mouflon_base = kRctRows[0].quantity / mouflon_slots;
      const int mouflon_rem = kRctRows[0].quantity % mouflon_slots;
      const int leftover =
          mouflon_base + (mouflon_slots - 1 < mouflon_rem ? 1 : 0);
      for (int b = 0; b < leftover; ++b) {
        shared.boxes.push_back(
            replica_box(static_cast<int>(shared.boxes.size()), "Mouflon"));
      }
    }
  }

  for (std::size_t i = 0; i < ds.images.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "rct_%04zu", i + 1);
    ds.images[i].image_id = id;
    if (i % 3 == 0) {
      ds.images[i].capture_tag = "station_" + std::to_string(i / 3 % 9 + 1);
    }
    if (i % 10 == 9) {
      ds.images[i].width.reset();
      ds.images[i].height.reset();
    }
  }
  return ds;
}

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "camtrap_XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) {
    throw std::runtime_error("mkdtemp failed for " + tmpl);
  }
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

CliResult run_cli(const std::string& args) { return run_cli("", args); }

CliResult run_cli(const std::string& env, const std::string& args) {
#ifndef CAMTRAP_CLI_PATH
  (void)env;
  (void)args;
  throw std::logic_error("run_cli needs the CAMTRAP_CLI_PATH definition");
#else
  TempDir scratch;
  const std::string out_path = scratch.file("stdout");
  const std::string err_path = scratch.file("stderr");
  std::string cmd;
  if (!env.empty()) cmd += "env " + env + " ";
  cmd += std::string(CAMTRAP_CLI_PATH) + " " + args + " >" + out_path +
         " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = read_file_or_throw(out_path);
  result.err = read_file_or_throw(err_path);
  return result;
#endif
}

std::string read_file_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_or_throw(const std::string& path, const std::string& payload) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << payload;
  out.flush();
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace camtrap_tests
