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

#include "votecut/crf.hpp"

#include <algorithm>
#include <cmath>

namespace votecut {

namespace {

std::vector<double> gaussian_table(int extent, double theta) {
  std::vector<double> t(static_cast<std::size_t>(std::max(extent, 1)));
  for (int d = 0; d < extent; ++d) t[d] = std::exp(-0.5 * d * d / (theta * theta));
  return t;
}

// Low-resolution cell of a full-resolution coordinate.
int cell_of(int p, int full, int low) {
  return static_cast<int>(static_cast<long long>(p) * low / full);
}

}  // namespace

UnaryField make_unary(const BinaryMask& mask, double unary_fg) {
  const double on = -std::log(unary_fg);
  const double off = -std::log(1.0 - unary_fg);
  UnaryField u;
  u.fg.resize(mask.size());
  u.bg.resize(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const bool set = mask.test(i);
    u.fg[i] = set ? on : off;
    u.bg[i] = set ? off : on;
  }
  return u;
}

PairwiseKernel::PairwiseKernel(const RgbImage& image, const CrfParams& params)
    : height_(image.height),
      width_(image.width),
      w_app_(params.w_app),
      w_sm_(params.w_sm),
      colors_(image.pixels.begin(), image.pixels.end()),
      app_dx_(gaussian_table(image.width, params.theta_alpha)),
      app_dy_(gaussian_table(image.height, params.theta_alpha)),
      sm_dx_(gaussian_table(image.width, params.theta_gamma)),
      sm_dy_(gaussian_table(image.height, params.theta_gamma)),
      color_(gaussian_table(256, params.theta_beta)) {}

double PairwiseKernel::operator()(std::size_t i, std::size_t j) const {
  const int yi = static_cast<int>(i) / width_, xi = static_cast<int>(i) % width_;
  const int yj = static_cast<int>(j) / width_, xj = static_cast<int>(j) % width_;
  const int dx = std::abs(xi - xj), dy = std::abs(yi - yj);
  const int* ci = &colors_[i * 3];
  const int* cj = &colors_[j * 3];
  const double app = app_dx_[dx] * app_dy_[dy] * color_[std::abs(ci[0] - cj[0])] *
                     color_[std::abs(ci[1] - cj[1])] * color_[std::abs(ci[2] - cj[2])];
  return w_app_ * app + w_sm_ * sm_dx_[dx] * sm_dy_[dy];
}

void PairwiseKernel::apply(std::span<const double> a, std::span<const double> b,
                           std::span<double> out_a, std::span<double> out_b) const {
  std::fill(out_a.begin(), out_a.end(), 0.0);
  std::fill(out_b.begin(), out_b.end(), 0.0);
  if (w_app_ == 0.0 && w_sm_ == 0.0) return;
  // Each unordered pair is visited once, walking row pairs (yi <= yj).
  for (int yi = 0; yi < height_; ++yi) {
    for (int yj = yi; yj < height_; ++yj) {
      const int dy = yj - yi;
      const double wa = w_app_ * app_dy_[dy];
      const double ws = w_sm_ * sm_dy_[dy];
      for (int xi = 0; xi < width_; ++xi) {
        const std::size_t i = static_cast<std::size_t>(yi) * width_ + xi;
        const int* ci = &colors_[i * 3];
        const std::size_t row_j = static_cast<std::size_t>(yj) * width_;
        double acc_a = 0.0, acc_b = 0.0;
        for (int xj = dy == 0 ? xi + 1 : 0; xj < width_; ++xj) {
          const std::size_t j = row_j + xj;
          const int* cj = &colors_[j * 3];
          const int dx = std::abs(xi - xj);
          const double k = wa * app_dx_[dx] * color_[std::abs(ci[0] - cj[0])] *
                               color_[std::abs(ci[1] - cj[1])] * color_[std::abs(ci[2] - cj[2])] +
                           ws * sm_dx_[dx];
          acc_a += k * a[j];
          acc_b += k * b[j];
          out_a[j] += k * a[i];
          out_b[j] += k * b[i];
        }
        out_a[i] += acc_a;
        out_b[i] += acc_b;
      }
    }
  }
}

MarginalField softmax_unary(const UnaryField& unary, int height, int width) {
  MarginalField q{height, width, std::vector<double>(unary.fg.size()),
                  std::vector<double>(unary.fg.size())};
  for (std::size_t i = 0; i < unary.fg.size(); ++i) {
    const double diff = unary.fg[i] - unary.bg[i];
    q.fg[i] = 1.0 / (1.0 + std::exp(diff));
    q.bg[i] = 1.0 / (1.0 + std::exp(-diff));
  }
  return q;
}

MarginalField meanfield_step(const MarginalField& q, const PairwiseKernel& kernel,
                             const UnaryField& unary) {
  const std::size_t n = q.size();
  std::vector<double> msg_fg(n), msg_bg(n);
  kernel.apply(q.fg, q.bg, msg_fg, msg_bg);
  UnaryField energy{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    // Potts: a label pays for the mass its neighbours put on the other label.
    energy.fg[i] = unary.fg[i] + msg_bg[i];
    energy.bg[i] = unary.bg[i] + msg_fg[i];
  }
  return softmax_unary(energy, q.height, q.width);
}

RgbImage resize_area(const RgbImage& image, int height, int width) {
  RgbImage out = make_image(height, width);
  std::vector<double> sum(static_cast<std::size_t>(height) * width * 3, 0.0);
  std::vector<double> cnt(static_cast<std::size_t>(height) * width, 0.0);
  if (height <= image.height && width <= image.width) {
    for (int r = 0; r < image.height; ++r) {
      const int lr = cell_of(r, image.height, height);
      for (int c = 0; c < image.width; ++c) {
        const int lc = cell_of(c, image.width, width);
        const std::size_t cell = static_cast<std::size_t>(lr) * width + lc;
        const std::uint8_t* px = image.at(r, c);
        for (int ch = 0; ch < 3; ++ch) sum[cell * 3 + ch] += px[ch];
        cnt[cell] += 1.0;
      }
    }
    for (std::size_t cell = 0; cell < cnt.size(); ++cell) {
      for (int ch = 0; ch < 3; ++ch) {
        out.pixels[cell * 3 + ch] = static_cast<std::uint8_t>(std::lround(sum[cell * 3 + ch] / cnt[cell]));
      }
    }
    return out;
  }
  for (int r = 0; r < height; ++r) {
    const int sr = cell_of(r, height, image.height);
    for (int c = 0; c < width; ++c) {
      const int sc = cell_of(c, width, image.width);
      std::copy_n(image.at(sr, sc), 3, out.at(r, c));
    }
  }
  return out;
}

BinaryMask crf_refine(const BinaryMask& mask, const RgbImage& image, const CrfParams& params) {
  validate(params);
  if (mask.height() != image.height || mask.width() != image.width) {
    throw Error(ErrorKind::shape, "CRF mask is " + std::to_string(mask.height()) + "x" +
                                      std::to_string(mask.width()) + " but image is " +
                                      std::to_string(image.height) + "x" +
                                      std::to_string(image.width));
  }
  const int H = mask.height(), W = mask.width();
  const double scale = std::min(1.0, static_cast<double>(params.max_side) / std::max(H, W));
  const int h = std::max(1, static_cast<int>(std::lround(H * scale)));
  const int w = std::max(1, static_cast<int>(std::lround(W * scale)));

  // Majority-vote downscale of the mask over the same cells as the image.
  BinaryMask low(h, w);
  {
    std::vector<int> on(static_cast<std::size_t>(h) * w, 0), all(on.size(), 0);
    for (int r = 0; r < H; ++r) {
      const int lr = cell_of(r, H, h);
      for (int c = 0; c < W; ++c) {
        const std::size_t cell = static_cast<std::size_t>(lr) * w + cell_of(c, W, w);
        on[cell] += mask.at(r, c);
        all[cell] += 1;
      }
    }
    for (std::size_t cell = 0; cell < on.size(); ++cell) low.assign(cell, 2 * on[cell] >= all[cell]);
  }
  const RgbImage small = (h == H && w == W) ? image : resize_area(image, h, w);

  const UnaryField unary = make_unary(low, params.unary_fg);
  MarginalField q = softmax_unary(unary, h, w);
  if (params.iterations > 0 && (params.w_app > 0.0 || params.w_sm > 0.0)) {
    const PairwiseKernel kernel(small, params);
    for (int it = 0; it < params.iterations; ++it) q = meanfield_step(q, kernel, unary);
  }
  BinaryMask refined(h, w);
  for (std::size_t i = 0; i < q.size(); ++i) refined.assign(i, q.fg[i] > q.bg[i]);

  BinaryMask out = mask;
  if (refined == low) return out;
  for (int r = 0; r < H; ++r) {
    const int lr = cell_of(r, H, h);
    for (int c = 0; c < W; ++c) {
      const int lc = cell_of(c, W, w);
      const bool after = refined.at(lr, lc);
      if (after != low.at(lr, lc)) out.set(r, c, after);
    }
  }
  return out;
}

}  // namespace votecut
