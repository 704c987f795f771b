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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "votecut/core.hpp"

namespace votecut {

/// Patch features of one image under one backbone, row-major [grid_h][grid_w][dim].
struct FeatureMap {
  std::string model_id;
  int grid_h = 0;
  int grid_w = 0;
  int dim = 0;
  std::vector<float> data;

  int patches() const { return grid_h * grid_w; }
  std::span<const float> patch(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }
};

/// Throws if sizes disagree or any value is non-finite.
void validate(const FeatureMap& fm);

// VCFT layout: "VCFT", u32 version (=1), u32 grid_h, u32 grid_w, u32 dim,
// then grid_h*grid_w*dim float32, all little-endian.
inline constexpr std::uint32_t kFeatureFormatVersion = 1;

FeatureMap read_feature_file(const std::filesystem::path& path);
void write_feature_file(const FeatureMap& fm, const std::filesystem::path& path);

/// File name convention "<image_id>.<model_id>.vcft".
std::string feature_file_name(const std::string& image_id, const std::string& model_id);

struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // interleaved RGB, row-major

  std::uint8_t* at(int row, int col) {
    return pixels.data() + (static_cast<std::size_t>(row) * width + col) * 3;
  }
  const std::uint8_t* at(int row, int col) const {
    return pixels.data() + (static_cast<std::size_t>(row) * width + col) * 3;
  }
  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

RgbImage make_image(int height, int width);
/// Binary PPM (P6, maxval 255).
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage& image, const std::filesystem::path& path);

struct ImageRecord {
  std::string id;
  std::string file_name;
  int width = 0;
  int height = 0;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct Annotation {
  std::string image_id;
  BoundingBox box;
  double score = 1.0;
  RunLengthCounts segmentation;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Class-agnostic instance annotations (predictions or ground truth).
struct AnnotationSet {
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;

  const ImageRecord* find_image(const std::string& id) const;
  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

/// Unknown image ids, out-of-range scores, and segmentations whose size
/// disagrees with the image all raise validation errors.
void validate(const AnnotationSet& set);

AnnotationSet read_annotations(const std::filesystem::path& path);
void write_annotations(const AnnotationSet& set, const std::filesystem::path& path);
AnnotationSet parse_annotations(const std::string& json_text);
std::string serialize_annotations(const AnnotationSet& set);

Annotation to_annotation(const ScoredInstance& inst);
ScoredInstance to_instance(const Annotation& ann);

}  // namespace votecut
