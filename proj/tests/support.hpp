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

#ifndef CAMTRAP_TESTS_SUPPORT_HPP_
#define CAMTRAP_TESTS_SUPPORT_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "camtrap/dataset.hpp"
#include "camtrap/errors.hpp"

namespace camtrap_tests {

/// Runs `fn` and reports the ErrorKind it threw, or nullopt if it returned.
template <typename Fn>
std::optional<camtrap::ErrorKind> thrown_kind(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const camtrap::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

/// Dataset of `images` frames, each holding `boxes_per_image` well-separated
/// 60x60 boxes on a coarse grid inside a 1920x1080 frame. Species are taken
/// round-robin from `species`. Image ids are "img_0000", "img_0001", ...
camtrap::Dataset grid_dataset(int images, int boxes_per_image,
                              const std::vector<std::string>& species);

/// The 946-image manifest reproducing the published RCT per-species quantity
/// and image counts. One image carries boxes of two species so that the
/// per-species image counts hold while the dataset stays at 946 frames.
camtrap::Dataset rct_replica();

/// Self-deleting scratch directory under the system temp root.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Run the camtrap-eval binary with the given argument string. Requires the
/// CAMTRAP_CLI_PATH compile definition.
CliResult run_cli(const std::string& args);

/// Run with extra environment assignments prepended, e.g. "CAMTRAP_EVAL_THREADS=4".
CliResult run_cli(const std::string& env, const std::string& args);

std::string read_file_or_throw(const std::string& path);
void write_file_or_throw(const std::string& path, const std::string& payload);

}  // namespace camtrap_tests

#endif  // CAMTRAP_TESTS_SUPPORT_HPP_
