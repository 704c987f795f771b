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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace votecut {

enum class ErrorKind {
  argument,
  shape,
  empty_mask,
  format,
  data,
  io,
  solver,
  validation,
  usage,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the C API can map it
// onto a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Binary raster stored as packed 64-bit words, row-major bit order.
// Padding bits past height*width are always zero.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width);

  static BinaryMask full(int height, int width);
  static BinaryMask from_bits(int height, int width, std::span<const std::uint8_t> bits);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return static_cast<std::size_t>(height_) * width_; }

  bool at(int row, int col) const { return test(index(row, col)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(int row, int col, bool value = true) { assign(index(row, col), value); }
  void assign(std::size_t i, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }

  std::size_t count() const;
  bool none() const;
  bool same_shape(const BinaryMask& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint64_t> words_;
};

// Top-left origin, half-open extent in pixels.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long long area() const { return static_cast<long long>(w) * h; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ScoredInstance {
  BinaryMask mask;
  BoundingBox box;
  double score = 0.0;
  std::string image_id;
};

// Uncompressed column-major run lengths; counts[0] is the leading run of zeros.
struct RunLengthCounts {
  int height = 0;
  int width = 0;
  std::vector<std::uint32_t> counts;

  friend bool operator==(const RunLengthCounts&, const RunLengthCounts&) = default;
};

std::size_t intersection_count(const BinaryMask& a, const BinaryMask& b);

/// IoU of two masks of equal shape. Two empty masks have IoU 0.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

double box_iou(const BoundingBox& a, const BoundingBox& b);

/// Minimal box containing every set bit. Throws on an empty mask.
BoundingBox tight_bbox(const BinaryMask& mask);

RunLengthCounts rle_encode(const BinaryMask& mask);
BinaryMask rle_decode(const RunLengthCounts& rle);

/// Nearest-neighbour resampling; destination pixel i reads source floor(i*src/dst).
BinaryMask resize_nearest(const BinaryMask& mask, int height, int width);

}  // namespace votecut
