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

#include <span>
#include <vector>

#include "votecut/config.hpp"
#include "votecut/core.hpp"
#include "votecut/featureio.hpp"

namespace votecut {

/// Per-pixel foreground/background marginals of the mean-field approximation.
struct MarginalField {
  int height = 0;
  int width = 0;
  std::vector<double> fg;
  std::vector<double> bg;

  std::size_t size() const { return fg.size(); }
};

/// Unary energies (negative log-probabilities) per pixel and label.
struct UnaryField {
  std::vector<double> fg;
  std::vector<double> bg;
};

UnaryField make_unary(const BinaryMask& mask, double unary_fg);

/// Potts-compatible pairwise term of a fully connected CRF: an appearance
/// kernel over position and colour plus a position-only smoothness kernel.
/// Messages are summed exactly over all pixel pairs.
class PairwiseKernel {
 public:
  PairwiseKernel(const RgbImage& image, const CrfParams& params);

  std::size_t size() const { return colors_.size() / 3; }
  double operator()(std::size_t i, std::size_t j) const;

  /// out_a[i] = sum_{j != i} k(i,j) a[j], and likewise for b.
  void apply(std::span<const double> a, std::span<const double> b, std::span<double> out_a,
             std::span<double> out_b) const;

 private:
  int height_;
  int width_;
  double w_app_;
  double w_sm_;
  std::vector<int> colors_;
  std::vector<double> app_dx_, app_dy_, sm_dx_, sm_dy_, color_;
};

MarginalField softmax_unary(const UnaryField& unary, int height, int width);

/// One synchronous mean-field update.
MarginalField meanfield_step(const MarginalField& q, const PairwiseKernel& kernel,
                             const UnaryField& unary);

/// Refines a mask against the image it was cut from. Inference runs at most
/// at params.max_side; pixels whose low-resolution label the CRF does not
/// change keep their full-resolution value.
BinaryMask crf_refine(const BinaryMask& mask, const RgbImage& image, const CrfParams& params);

/// Box-filter downscale (or nearest upscale) of an RGB image.
RgbImage resize_area(const RgbImage& image, int height, int width);

}  // namespace votecut
