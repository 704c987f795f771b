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

#include "votecut/render.hpp"

#include <cmath>
#include <cstdio>

namespace votecut {

namespace {

// 3x5 glyphs, one row per entry, bit 2 is the leftmost column.
constexpr std::array<std::array<std::uint8_t, 5>, 11> kGlyphs = {{
    {7, 5, 5, 5, 7},  // 0
    {2, 6, 2, 2, 7},  // 1
    {7, 1, 7, 4, 7},  // 2
    {7, 1, 7, 1, 7},  // 3
    {5, 5, 7, 1, 1},  // 4
    {7, 4, 7, 1, 7},  // 5
    {7, 4, 7, 5, 7},  // 6
    {7, 1, 1, 1, 1},  // 7
    {7, 5, 7, 5, 7},  // 8
    {7, 5, 7, 1, 7},  // 9
    {0, 0, 0, 0, 2},  // .
}};

constexpr int kGlyphW = 3;
constexpr int kGlyphH = 5;

void put(RgbImage& img, int row, int col, const std::array<std::uint8_t, 3>& c) {
  if (row < 0 || col < 0 || row >= img.height || col >= img.width) return;
  std::uint8_t* p = img.at(row, col);
  p[0] = c[0];
  p[1] = c[1];
  p[2] = c[2];
}

void draw_label(RgbImage& img, int row, int col, const char* text,
                const std::array<std::uint8_t, 3>& bg) {
  int len = 0;
  while (text[len] != '\0') ++len;
  const int w = len * (kGlyphW + 1) + 1;
  for (int r = 0; r < kGlyphH + 2; ++r) {
    for (int c = 0; c < w; ++c) put(img, row + r, col + c, bg);
  }
  const std::array<std::uint8_t, 3> ink{255, 255, 255};
  for (int i = 0; i < len; ++i) {
    const char ch = text[i];
    const int g = ch == '.' ? 10 : (ch >= '0' && ch <= '9' ? ch - '0' : -1);
    if (g < 0) continue;
    for (int r = 0; r < kGlyphH; ++r) {
      for (int c = 0; c < kGlyphW; ++c) {
        if ((kGlyphs[g][r] >> (kGlyphW - 1 - c)) & 1) {
          put(img, row + 1 + r, col + 1 + i * (kGlyphW + 1) + c, ink);
        }
      }
    }
  }
}

}  // namespace

std::array<std::uint8_t, 3> palette_color(int index) {
  const double golden = 0.6180339887498949;
  double hue = std::fmod(0.1 + golden * index, 1.0) * 6.0;
  const double s = 0.85, v = 0.95;
  const int sector = static_cast<int>(hue) % 6;
  const double f = hue - std::floor(hue);
  const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  double r = v, g = t, b = p;
  switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  auto to8 = [](double x) { return static_cast<std::uint8_t>(std::lround(x * 255.0)); };
  return {to8(r), to8(g), to8(b)};
}

RgbImage render_overlay(const RgbImage& image, std::span<const ScoredInstance> instances,
                        const RenderOptions& options) {
  if (!(options.alpha >= 0.0 && options.alpha <= 1.0)) {
    throw Error(ErrorKind::argument, "overlay alpha must lie in [0,1]");
  }
  for (const auto& inst : instances) {
    if (inst.mask.height() != image.height || inst.mask.width() != image.width) {
      throw Error(ErrorKind::shape, "instance mask size differs from the image");
    }
  }
  RgbImage out = image;
  const double a = options.alpha;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const auto color = palette_color(static_cast<int>(k));
    const BinaryMask& m = instances[k].mask;
    for (int r = 0; r < out.height; ++r) {
      for (int c = 0; c < out.width; ++c) {
        if (!m.at(r, c)) continue;
        std::uint8_t* px = out.at(r, c);
        for (int ch = 0; ch < 3; ++ch) {
          px[ch] = static_cast<std::uint8_t>(std::lround((1.0 - a) * px[ch] + a * color[ch]));
        }
      }
    }
  }
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const auto color = palette_color(static_cast<int>(k));
    const BoundingBox& b = instances[k].box;
    if (options.draw_boxes) {
      for (int c = b.x; c < b.x + b.w; ++c) {
        put(out, b.y, c, color);
        put(out, b.y + b.h - 1, c, color);
      }
      for (int r = b.y; r < b.y + b.h; ++r) {
        put(out, r, b.x, color);
        put(out, r, b.x + b.w - 1, color);
      }
    }
    if (options.draw_scores) {
      char text[16];
      std::snprintf(text, sizeof text, "%.2f", instances[k].score);
      draw_label(out, b.y, b.x, text, color);
    }
  }
  return out;
}

}  // namespace votecut
