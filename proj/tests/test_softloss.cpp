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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "votecut/softloss.hpp"

using namespace votecut;
using vctest::kind_name;
using vctest::thrown_kind;

namespace {

BinaryMask rect(int h, int w, int r0, int c0, int rows, int cols) {
  BinaryMask m(h, w);
  for (int r = r0; r < r0 + rows; ++r) {
    for (int c = c0; c < c0 + cols; ++c) m.set(r, c);
  }
  return m;
}

ScoredInstance scored(double s) {
  ScoredInstance out;
  out.mask = BinaryMask(2, 2);
  out.score = s;
  return out;
}

// Loss as a function of the two logits, for finite differences.
double loss_at(double zf, double zb, double y) { return soft_cls_loss({zf, zb}, y).loss; }

// Central difference with step h.
double central(double f_plus, double f_minus, double h) { return (f_plus - f_minus) / (2.0 * h); }

// Relative agreement with a floor so gradients near zero are compared absolutely.
bool agrees(double analytic, double numeric) {
  return std::abs(analytic - numeric) <= 1e-6 * std::max(std::abs(analytic), 1e-3);
}

}  // namespace

TEST_CASE("weighted_instance_loss examples") {
  const double s1[] = {1.0, 0.5}, l1[] = {2.0, 4.0};
  CHECK(weighted_instance_loss(l1, s1) == 4.0);
  const double ones[] = {1.0, 1.0, 1.0}, l2[] = {0.3, 1.7, 2.5};
  CHECK(weighted_instance_loss(l2, ones) == doctest::Approx(4.5).epsilon(1e-15));
  const double zeros[] = {0.0, 0.0, 0.0};
  CHECK(weighted_instance_loss(l2, zeros) == 0.0);
  CHECK(weighted_instance_loss(std::span<const double>{}, std::span<const double>{}) == 0.0);
}

TEST_CASE("weighted_instance_loss errors") {
  const double s[] = {1.0}, l[] = {1.0, 2.0};
  CHECK(thrown_kind([&] { weighted_instance_loss(l, s); }) == kind_name(ErrorKind::argument));
  const double bad[] = {1.5, 0.5};
  CHECK(thrown_kind([&] { weighted_instance_loss(l, bad); }) == kind_name(ErrorKind::argument));
  const double neg[] = {-0.1, 0.5};
  CHECK(thrown_kind([&] { weighted_instance_loss(l, neg); }) == kind_name(ErrorKind::argument));
}

TEST_CASE("soft_cls_loss examples") {
  const SoftClsLoss a = soft_cls_loss({0.0, 0.0}, 1.0);
  CHECK(a.loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(a.d_zf == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(a.d_zb == doctest::Approx(0.5).epsilon(1e-15));
  const SoftClsLoss b = soft_cls_loss({1.3, 1.3}, 0.5);
  CHECK(b.d_zf == 0.0);
  CHECK(b.d_zb == 0.0);
  // sigma_f = 1 / (1 + e^-1) at z_f - z_b = 1; the gradient vanishes at y = sigma_f.
  const double sf = 1.0 / (1.0 + std::exp(-1.0));
  CHECK(std::abs(soft_cls_loss({2.0, 1.0}, sf).d_zf) <= 1e-15);
}

TEST_CASE("soft_cls_loss is stable for large logits") {
  const SoftClsLoss big = soft_cls_loss({800.0, -800.0}, 1.0);
  CHECK(std::isfinite(big.loss));
  CHECK(big.loss == doctest::Approx(0.0));
  const SoftClsLoss wrong = soft_cls_loss({-800.0, 800.0}, 1.0);
  CHECK(wrong.loss == doctest::Approx(1600.0).epsilon(1e-12));
  CHECK(wrong.d_zf == doctest::Approx(-1.0));
}

TEST_CASE("soft_cls_loss rejects targets outside the unit interval") {
  CHECK(thrown_kind([] { soft_cls_loss({0, 0}, -0.01); }) == kind_name(ErrorKind::argument));
  CHECK(thrown_kind([] { soft_cls_loss({0, 0}, 1.01); }) == kind_name(ErrorKind::argument));
  CHECK(thrown_kind([] { soft_cls_loss({0, 0}, std::nan("")); }) == kind_name(ErrorKind::argument));
}

TEST_CASE("property: analytic gradient matches central differences") {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> logit(-8.0, 8.0), target(0.0, 1.0);
  const double h = 1e-5;
  int worst_count = 0;
  for (int t = 0; t < 1000; ++t) {
    const double zf = logit(rng), zb = logit(rng), y = target(rng);
    const SoftClsLoss g = soft_cls_loss({zf, zb}, y);
    const double nf = central(loss_at(zf + h, zb, y), loss_at(zf - h, zb, y), h);
    const double nb = central(loss_at(zf, zb + h, y), loss_at(zf, zb - h, y), h);
    if (!agrees(g.d_zf, nf) || !agrees(g.d_zb, nb)) {
      ++worst_count;
      CAPTURE(zf);
      CAPTURE(zb);
      CAPTURE(y);
      CHECK(agrees(g.d_zf, nf));
      CHECK(agrees(g.d_zb, nb));
    }
  }
  CHECK(worst_count == 0);
}

TEST_CASE("property: loss is convex in the logit difference") {
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> logit(-10.0, 10.0), target(0.0, 1.0), mix(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const double y = target(rng), a = logit(rng), b = logit(rng), lam = mix(rng);
    const double m = lam * a + (1.0 - lam) * b;
    const double lhs = loss_at(m, 0.0, y);
    const double rhs = lam * loss_at(a, 0.0, y) + (1.0 - lam) * loss_at(b, 0.0, y);
    CHECK(lhs <= rhs + 1e-12);
    // Only the difference matters.
    const double shift = logit(rng);
    CHECK(loss_at(a + shift, shift, y) == doctest::Approx(loss_at(a, 0.0, y)).epsilon(1e-10));
  }
}

TEST_CASE("droploss_gate examples") {
  const BinaryMask target = rect(10, 10, 0, 0, 10, 10);
  const BinaryMask same = target;
  const BinaryMask one_pixel = rect(10, 10, 4, 4, 1, 1);   // IoU exactly 1/100
  const BinaryMask two_pixels = rect(10, 10, 4, 4, 1, 2);  // IoU 2/100
  const std::vector<BinaryMask> preds{same, one_pixel, two_pixels};
  const std::vector<BinaryMask> targets{target};
  CHECK(mask_iou(one_pixel, target) == 0.01);
  CHECK(droploss_gate(preds, targets, 0.01) == std::vector<int>{1, 0, 1});

  const std::vector<BinaryMask> left{rect(10, 10, 0, 0, 10, 5)};
  const std::vector<BinaryMask> right{rect(10, 10, 0, 5, 10, 5)};
  CHECK(droploss_gate(right, left, 0.01) == std::vector<int>{0});
  CHECK(droploss_gate(preds, std::vector<BinaryMask>{}, 0.01) == std::vector<int>{0, 0, 0});
  CHECK(droploss_gate(std::vector<BinaryMask>{}, targets, 0.01).empty());
}

TEST_CASE("property: droploss_gate is monotone in the threshold") {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<BinaryMask> preds, targets;
    for (int i = 0; i < 5; ++i) preds.push_back(vctest::random_mask(rng, 12, 12, u01(rng)));
    for (int i = 0; i < 3; ++i) targets.push_back(vctest::random_mask(rng, 12, 12, u01(rng) * 0.5));
    double lo = u01(rng), hi = u01(rng);
    if (lo > hi) std::swap(lo, hi);
    const auto g_lo = droploss_gate(preds, targets, lo);
    const auto g_hi = droploss_gate(preds, targets, hi);
    for (std::size_t r = 0; r < preds.size(); ++r) CHECK(g_hi[r] <= g_lo[r]);
  }
}

TEST_CASE("total_loss examples") {
  const std::vector<InstanceLosses> l{{1, 1, 1}, {5, 5, 5}};
  CHECK(total_loss(l, std::vector<int>{1, 0}) == 3.0);
  CHECK(total_loss(l, std::vector<int>{1, 1}) == 18.0);
  CHECK(total_loss(l, std::vector<int>{0, 0}) == 0.0);
  CHECK(thrown_kind([&] { total_loss(l, std::vector<int>{1}); }) == kind_name(ErrorKind::argument));
}

TEST_CASE("property: unit scores and open gates reduce to the plain loss") {
  std::mt19937_64 rng(84);
  std::uniform_real_distribution<double> loss(0.0, 5.0);
  std::uniform_int_distribution<int> count(0, 12);
  for (int t = 0; t < 300; ++t) {
    const int n = count(rng);
    std::vector<double> cls(n), box(n), mask(n), ones(n, 1.0);
    double plain = 0.0;
    for (int j = 0; j < n; ++j) {
      cls[j] = loss(rng);
      box[j] = loss(rng);
      mask[j] = loss(rng);
      plain += cls[j] + box[j] + mask[j];
    }
    std::vector<InstanceLosses> per(n);
    for (int j = 0; j < n; ++j) {
      per[j] = {cls[j], weighted_instance_loss(std::span(&box[j], 1), std::span(&ones[j], 1)),
                weighted_instance_loss(std::span(&mask[j], 1), std::span(&ones[j], 1))};
    }
    CHECK(total_loss(per, std::vector<int>(n, 1)) == doctest::Approx(plain).epsilon(1e-12));
  }
}

TEST_CASE("property: weighted loss is monotone in each score") {
  std::mt19937_64 rng(85);
  std::uniform_real_distribution<double> u01(0.0, 1.0), loss(0.0, 10.0);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(u01(rng) * 8);
    std::vector<double> l(n), s(n);
    for (int j = 0; j < n; ++j) {
      l[j] = loss(rng);
      s[j] = u01(rng);
    }
    const double before = weighted_instance_loss(l, s);
    const int j = static_cast<int>(u01(rng) * n) % n;
    s[j] = s[j] + (1.0 - s[j]) * u01(rng);
    CHECK(weighted_instance_loss(l, s) >= before);
  }
}

TEST_CASE("filter_pseudo_labels examples") {
  const std::vector<ScoredInstance> in{scored(0.19), scored(0.2), scored(0.9)};
  const auto kept = filter_pseudo_labels(in, 0.2);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].score == 0.2);
  CHECK(kept[1].score == 0.9);
  CHECK(filter_pseudo_labels(in, 0.0).size() == 3);
  CHECK(filter_pseudo_labels(std::vector<ScoredInstance>{}, 0.2).empty());
}

TEST_CASE("filter_annotations keeps every image and preserves order") {
  AnnotationSet set;
  set.images = {{"a", "a.ppm", 4, 4}, {"b", "b.ppm", 4, 4}};
  for (double s : {0.5, 0.1, 0.2, 0.19, 1.0}) {
    Annotation a;
    a.image_id = s < 0.3 ? "b" : "a";
    a.score = s;
    set.annotations.push_back(a);
  }
  const AnnotationSet out = filter_annotations(set, 0.2);
  CHECK(out.images == set.images);
  REQUIRE(out.annotations.size() == 3);
  CHECK(out.annotations[0].score == 0.5);
  CHECK(out.annotations[1].score == 0.2);
  CHECK(out.annotations[2].score == 1.0);
}
