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

#include "votecut/core.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace votecut {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::argument: return "argument error";
    case ErrorKind::shape: return "shape error";
    case ErrorKind::empty_mask: return "empty mask";
    case ErrorKind::format: return "format error";
    case ErrorKind::data: return "data error";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::solver: return "solver error";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::usage: return "usage error";
  }
  return "error";
}

BinaryMask::BinaryMask(int height, int width) : height_(height), width_(width) {
  if (height < 1 || width < 1) {
    throw Error(ErrorKind::shape, "mask dimensions must be positive, got " +
                                      std::to_string(height) + "x" + std::to_string(width));
  }
  words_.assign((size() + 63) / 64, 0);
}

BinaryMask BinaryMask::full(int height, int width) {
  BinaryMask m(height, width);
  std::fill(m.words_.begin(), m.words_.end(), ~std::uint64_t{0});
  const std::size_t tail = m.size() & 63;
  if (tail != 0) {
    m.words_.back() = (std::uint64_t{1} << tail) - 1;
  }
  return m;
}

BinaryMask BinaryMask::from_bits(int height, int width, std::span<const std::uint8_t> bits) {
  BinaryMask m(height, width);
  if (bits.size() != m.size()) {
    throw Error(ErrorKind::shape, "bit count " + std::to_string(bits.size()) +
                                      " does not match " + std::to_string(height) + "x" +
                                      std::to_string(width));
  }
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) m.assign(i, true);
  }
  return m;
}

std::size_t BinaryMask::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool BinaryMask::none() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

static void require_same_shape(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) {
    throw Error(ErrorKind::shape, "mask shapes differ: " + std::to_string(a.height()) + "x" +
                                      std::to_string(a.width()) + " vs " +
                                      std::to_string(b.height()) + "x" +
                                      std::to_string(b.width()));
  }
}

std::size_t intersection_count(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t n = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
  }
  return n;
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    inter += static_cast<std::size_t>(std::popcount(wa[i] & wb[i]));
    uni += static_cast<std::size_t>(std::popcount(wa[i] | wb[i]));
  }
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double box_iou(const BoundingBox& a, const BoundingBox& b) {
  const long long ix = std::max(0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const long long iy = std::max(0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const long long inter = ix * iy;
  const long long uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

BoundingBox tight_bbox(const BinaryMask& mask) {
  int r0 = std::numeric_limits<int>::max(), c0 = std::numeric_limits<int>::max();
  int r1 = -1, c1 = -1;
  const auto words = mask.words();
  const std::size_t width = static_cast<std::size_t>(mask.width());
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    std::uint64_t w = words[wi];
    while (w != 0) {
      const std::size_t i = wi * 64 + static_cast<std::size_t>(std::countr_zero(w));
      w &= w - 1;
      const int r = static_cast<int>(i / width);
      const int c = static_cast<int>(i % width);
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }
  if (r1 < 0) throw Error(ErrorKind::empty_mask, "cannot take the bounding box of an empty mask");
  return {c0, r0, c1 - c0 + 1, r1 - r0 + 1};
}

RunLengthCounts rle_encode(const BinaryMask& mask) {
  RunLengthCounts rle{mask.height(), mask.width(), {}};
  bool current = false;
  std::uint32_t run = 0;
  for (int c = 0; c < mask.width(); ++c) {
    for (int r = 0; r < mask.height(); ++r) {
      const bool v = mask.at(r, c);
      if (v != current) {
        rle.counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  rle.counts.push_back(run);
  return rle;
}

BinaryMask rle_decode(const RunLengthCounts& rle) {
  if (rle.height < 1 || rle.width < 1) {
    throw Error(ErrorKind::format, "RLE size must be positive");
  }
  std::uint64_t total = 0;
  for (std::uint32_t c : rle.counts) total += c;
  const std::uint64_t expected = static_cast<std::uint64_t>(rle.height) * rle.width;
  if (total != expected) {
    throw Error(ErrorKind::format, "RLE counts sum to " + std::to_string(total) +
                                       ", expected " + std::to_string(expected));
  }
  BinaryMask m(rle.height, rle.width);
  std::uint64_t pos = 0;
  bool value = false;
  for (std::uint32_t run : rle.counts) {
    if (value) {
      for (std::uint64_t k = pos; k < pos + run; ++k) {
        const int c = static_cast<int>(k / rle.height);
        const int r = static_cast<int>(k % rle.height);
        m.set(r, c);
      }
    }
    pos += run;
    value = !value;
  }
  return m;
}

BinaryMask resize_nearest(const BinaryMask& mask, int height, int width) {
  BinaryMask out(height, width);
  const long long sh = mask.height();
  const long long sw = mask.width();
  std::vector<int> col_map(static_cast<std::size_t>(width));
  for (int c = 0; c < width; ++c) col_map[c] = static_cast<int>(c * sw / width);
  for (int r = 0; r < height; ++r) {
    const int sr = static_cast<int>(r * sh / height);
    for (int c = 0; c < width; ++c) {
      if (mask.at(sr, col_map[c])) out.set(r, c);
    }
  }
  return out;
}

}  // namespace votecut
