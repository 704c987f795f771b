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

#include <array>
#include <cstdint>
#include <span>

#include "votecut/core.hpp"
#include "votecut/featureio.hpp"

namespace votecut {

struct RenderOptions {
  double alpha = 0.4;  // weight of the instance colour
  bool draw_boxes = true;
  bool draw_scores = true;
};

/// Colour for the instance at `index`; hues step by the golden ratio.
std::array<std::uint8_t, 3> palette_color(int index);

/// Alpha-blends each instance mask in its palette colour, then draws box
/// outlines and two-decimal score labels. Masks must match the image size.
RgbImage render_overlay(const RgbImage& image, std::span<const ScoredInstance> instances,
                        const RenderOptions& options = {});

}  // namespace votecut
