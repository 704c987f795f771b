// Copyright 2026 The VoteCut Authors. All Rights Reserved.
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "votecut/core.hpp"

namespace vctest {

/// Kind of the votecut::Error thrown by f, or nullopt-like sentinel when
/// nothing (or something else) was thrown.
template <typename F>
std::string thrown_kind(F&& f) {
  try {
    f();
  } catch (const votecut::Error& e) {
    return votecut::to_string(e.kind());
  } catch (...) {
    return "foreign exception";
  }
  return "no exception";
}

inline std::string kind_name(votecut::ErrorKind k) { return votecut::to_string(k); }

inline votecut::BinaryMask random_mask(std::mt19937_64& rng, int h, int w, double density) {
  std::bernoulli_distribution bit(density);
  votecut::BinaryMask m(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) m.set(r, c, bit(rng));
  }
  return m;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("votecut_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace vctest
