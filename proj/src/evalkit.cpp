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

#include "votecut/evalkit.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>

#include <json.hpp>

namespace votecut {

const char* to_string(IouKind kind) { return kind == IouKind::box ? "box" : "mask"; }

IouKind parse_iou_kind(const std::string& text) {
  if (text == "box" || text == "bbox") return IouKind::box;
  if (text == "mask" || text == "segm") return IouKind::mask;
  throw Error(ErrorKind::argument, "unknown IoU kind '" + text + "' (expected box or mask)");
}

std::array<double, kNumIouThresholds> iou_thresholds() {
  std::array<double, kNumIouThresholds> t{};
  for (int i = 0; i < kNumIouThresholds; ++i) t[i] = (50 + 5 * i) / 100.0;
  return t;
}

int ImageMatches::true_positives() const {
  return static_cast<int>(std::count_if(matched_gt.begin(), matched_gt.end(),
                                        [](int g) { return g >= 0; }));
}

std::vector<double> iou_matrix(std::span<const EvalInstance> preds,
                               std::span<const EvalInstance> gts, IouKind kind) {
  std::vector<double> ious(preds.size() * gts.size());
  for (std::size_t p = 0; p < preds.size(); ++p) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      ious[p * gts.size() + g] = kind == IouKind::box ? box_iou(preds[p].box, gts[g].box)
                                                      : mask_iou(preds[p].mask, gts[g].mask);
    }
  }
  return ious;
}

ImageMatches match_from_ious(std::span<const double> scores, std::span<const double> ious,
                             int num_gt, double thresh) {
  const std::size_t np = scores.size();
  std::vector<int> order(np);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
  ImageMatches out;
  out.num_gt = num_gt;
  std::vector<char> taken(static_cast<std::size_t>(num_gt), 0);
  for (int p : order) {
    int best = -1;
    double best_iou = thresh;
    for (int g = 0; g < num_gt; ++g) {
      if (taken[g]) continue;
      const double iou = ious[static_cast<std::size_t>(p) * num_gt + g];
      if (iou < best_iou || (best >= 0 && iou == best_iou)) continue;
      best = g;
      best_iou = iou;
    }
    if (best >= 0) taken[best] = 1;
    out.scores.push_back(scores[p]);
    out.matched_gt.push_back(best);
  }
  return out;
}

ImageMatches match_instances(std::span<const EvalInstance> preds, std::span<const EvalInstance> gts,
                             double thresh, IouKind kind) {
  std::vector<double> scores;
  for (const auto& p : preds) scores.push_back(p.score);
  return match_from_ious(scores, iou_matrix(preds, gts, kind), static_cast<int>(gts.size()),
                         thresh);
}

double average_precision(std::span<const ImageMatches> images) {
  int num_gt = 0;
  struct Det {
    double score;
    bool tp;
  };
  std::vector<Det> dets;
  for (const auto& im : images) {
    num_gt += im.num_gt;
    for (std::size_t i = 0; i < im.scores.size(); ++i) {
      dets.push_back({im.scores[i], im.matched_gt[i] >= 0});
    }
  }
  if (num_gt == 0) return 0.0;
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Det& a, const Det& b) { return a.score > b.score; });
  std::vector<double> precision(dets.size()), rec(dets.size());
  long tp = 0, fp = 0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    dets[i].tp ? ++tp : ++fp;
    rec[i] = static_cast<double>(tp) / num_gt;
    precision[i] = static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0.0;
  for (int r = 0; r < kNumRecallThresholds; ++r) {
    const double threshold = r / 100.0;
    const auto it = std::lower_bound(rec.begin(), rec.end(), threshold);
    if (it != rec.end()) sum += precision[static_cast<std::size_t>(it - rec.begin())];
  }
  return sum / kNumRecallThresholds;
}

double recall(std::span<const ImageMatches> images) {
  int num_gt = 0, tp = 0;
  for (const auto& im : images) {
    num_gt += im.num_gt;
    tp += im.true_positives();
  }
  return num_gt == 0 ? 0.0 : static_cast<double>(tp) / num_gt;
}

double average_recall(std::span<const std::vector<ImageMatches>> per_threshold) {
  if (per_threshold.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& images : per_threshold) sum += recall(images);
  return sum / static_cast<double>(per_threshold.size());
}

EvalReport evaluate(const AnnotationSet& preds, const AnnotationSet& gts, IouKind kind,
                    int max_dets) {
  validate(gts);
  for (const auto& a : preds.annotations) {
    if (gts.find_image(a.image_id) == nullptr) {
      throw Error(ErrorKind::validation,
                  "prediction references image '" + a.image_id + "' absent from ground truth");
    }
  }
  std::vector<std::string> ids;
  for (const auto& img : gts.images) ids.push_back(img.id);
  std::sort(ids.begin(), ids.end());
  std::map<std::string, std::size_t> slot;
  for (std::size_t i = 0; i < ids.size(); ++i) slot[ids[i]] = i;

  std::vector<std::vector<EvalInstance>> pred_by_image(ids.size()), gt_by_image(ids.size());
  auto to_eval = [&](const Annotation& a) {
    EvalInstance e;
    e.box = a.box;
    e.score = a.score;
    if (kind == IouKind::mask) e.mask = rle_decode(a.segmentation);
    return e;
  };
  for (const auto& a : gts.annotations) gt_by_image[slot.at(a.image_id)].push_back(to_eval(a));
  for (const auto& a : preds.annotations) pred_by_image[slot.at(a.image_id)].push_back(to_eval(a));

  EvalReport report;
  report.iou_kind = kind;
  report.num_images = static_cast<int>(ids.size());
  report.num_pred = static_cast<int>(preds.annotations.size());
  report.num_gt = static_cast<int>(gts.annotations.size());
  report.no_ground_truth = report.num_gt == 0;

  const auto thresholds = iou_thresholds();
  std::vector<std::vector<ImageMatches>> matches(kNumIouThresholds);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto& pr = pred_by_image[i];
    std::stable_sort(pr.begin(), pr.end(),
                     [](const EvalInstance& a, const EvalInstance& b) { return a.score > b.score; });
    if (static_cast<int>(pr.size()) > max_dets) pr.resize(static_cast<std::size_t>(max_dets));
    const auto ious = iou_matrix(pr, gt_by_image[i], kind);
    std::vector<double> scores;
    for (const auto& p : pr) scores.push_back(p.score);
    for (int t = 0; t < kNumIouThresholds; ++t) {
      matches[t].push_back(match_from_ious(scores, ious, static_cast<int>(gt_by_image[i].size()),
                                           thresholds[t]));
    }
  }
  double sum = 0.0;
  for (int t = 0; t < kNumIouThresholds; ++t) {
    report.per_threshold[t] = average_precision(matches[t]);
    sum += report.per_threshold[t];
  }
  report.ap = sum / kNumIouThresholds;
  report.ap50 = report.per_threshold[0];
  report.ap75 = report.per_threshold[5];
  report.ar100 = average_recall(matches);
  return report;
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["iou_type"] = to_string(r.iou_kind);
  j["ap"] = r.ap;
  j["ap50"] = r.ap50;
  j["ap75"] = r.ap75;
  j["ar100"] = r.ar100;
  const auto thresholds = iou_thresholds();
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (int t = 0; t < kNumIouThresholds; ++t) {
    char key[8];
    std::snprintf(key, sizeof key, "%.2f", thresholds[t]);
    per[key] = r.per_threshold[t];
  }
  j["per_threshold"] = per;
  j["counts"] = {{"num_images", r.num_images}, {"num_gt", r.num_gt}, {"num_pred", r.num_pred}};
  j["no_ground_truth"] = r.no_ground_truth;
  return j.dump(2);
}

std::string report_to_table(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                " IoU type: %s   images: %d   gt: %d   pred: %d\n"
                " AP      @[IoU=0.50:0.95 | maxDets=100] = %.3f\n"
                " AP50    @[IoU=0.50      | maxDets=100] = %.3f\n"
                " AP75    @[IoU=0.75      | maxDets=100] = %.3f\n"
                " AR100   @[IoU=0.50:0.95 | maxDets=100] = %.3f\n",
                to_string(r.iou_kind), r.num_images, r.num_gt, r.num_pred, r.ap, r.ap50, r.ap75,
                r.ar100);
  std::string out = buf;
  if (r.no_ground_truth) out += " warning: ground truth is empty; metrics reported as 0\n";
  return out;
}

}  // namespace votecut
