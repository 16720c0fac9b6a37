// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mostgeo {

double GaussianSampler::uniform01() {
  // 53-bit mantissa draw in (0, 1], safe to feed into log().
  const std::uint64_t bits = rng_() >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double GaussianSampler::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::vector<QuadBox> decode_maps(const PredictionMaps& maps, double score_thresh) {
  const Grid<Geometry5>& geometry = maps.refined_or_coarse();
  if (!maps.score.same_shape(maps.possens) || maps.score.height() != geometry.height() ||
      maps.score.width() != geometry.width()) {
    throw std::invalid_argument("prediction map shapes do not match");
  }
  std::vector<QuadBox> candidates;
  for (int y = 0; y < maps.score.height(); ++y) {
    for (int x = 0; x < maps.score.width(); ++x) {
      const double score = maps.score.at(y, x);
      if (score < score_thresh) continue;
      QuadBox box;
      box.source_pixel = Point2{static_cast<double>(x), static_cast<double>(y)};
      box.quad = decode_rbox(*box.source_pixel, geometry.at(y, x), maps.stride);
      box.score = score;
      box.weights = maps.possens.at(y, x);
      candidates.push_back(std::move(box));
    }
  }
  return candidates;
}

std::vector<QuadBox> detect(const PredictionMaps& maps, const NmsParams& params,
                            NmsVariant variant) {
  std::vector<QuadBox> candidates = decode_maps(maps, params.score_thresh);
  switch (variant) {
    case NmsVariant::kStandard:
      return standard_nms(candidates, params.final_iou);
    case NmsVariant::kLocality:
      return locality_aware_nms(candidates, params);
    case NmsVariant::kPositionAware:
      return pa_nms(candidates, params);
  }
  throw std::invalid_argument("unknown NMS variant");
}

PredictionMaps render_oracle_maps(const std::vector<TextInstance>& instances, int image_h,
                                  int image_w, int stride, const NoiseModel& noise,
                                  double shrink_ratio, PosSensParams psp) {
  if (noise.sigma0 < 0.0 || noise.sigma1 < 0.0 || noise.angle_sigma < 0.0) {
    throw std::invalid_argument("noise sigmas must be non-negative");
  }
  LabelMaps labels = generate_maps(instances, image_h, image_w, stride, shrink_ratio, psp);

  PredictionMaps maps;
  maps.stride = stride;
  maps.score = std::move(labels.score);
  maps.possens = std::move(labels.possens);
  maps.geometry_coarse = std::move(labels.geometry);

  const bool noisy = noise.sigma0 > 0.0 || noise.sigma1 > 0.0 || noise.angle_sigma > 0.0;
  if (noisy) {
    GaussianSampler gauss(noise.seed);
    auto perturb_distance = [&](double d) {
      return std::max(0.0, d + gauss.next() * (noise.sigma0 + noise.sigma1 * d));
    };
    for (int y = 0; y < maps.score.height(); ++y) {
      for (int x = 0; x < maps.score.width(); ++x) {
        if (maps.score.at(y, x) <= 0.5) continue;
        Geometry5& g = maps.geometry_coarse.at(y, x);
        g.d_top = perturb_distance(g.d_top);
        g.d_right = perturb_distance(g.d_right);
        g.d_bottom = perturb_distance(g.d_bottom);
        g.d_left = perturb_distance(g.d_left);
        g.theta += gauss.next() * noise.angle_sigma;
      }
    }
  }
  return maps;
}

std::vector<int> match_detections(const std::vector<QuadBox>& detections,
                                  const std::vector<TextInstance>& gts, double iou_threshold) {
  std::vector<int> matched_gt(detections.size(), -1);

  // Detections mostly covered by a dont-care region never match and never
  // count against precision.
  std::vector<bool> discarded(detections.size(), false);
  for (std::size_t d = 0; d < detections.size(); ++d) {
    const double det_area = quad_area(detections[d].quad);
    if (det_area <= 0.0) continue;
    for (const TextInstance& gt : gts) {
      if (!gt.dont_care) continue;
      if (quad_intersection_area(detections[d].quad, gt.quad) / det_area > 0.5) {
        discarded[d] = true;
        break;
      }
    }
  }

  std::vector<std::size_t> order(detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detections[a].score > detections[b].score;
  });

  std::vector<bool> gt_taken(gts.size(), false);
  for (const std::size_t d : order) {
    if (discarded[d]) {
      matched_gt[d] = -2;
      continue;
    }
    double best_iou = 0.0;
    int best_gt = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gts[g].dont_care || gt_taken[g]) continue;
      const double iou = quad_iou(detections[d].quad, gts[g].quad);
      if (iou > best_iou) {
        best_iou = iou;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0 && best_iou >= iou_threshold) {
      matched_gt[d] = best_gt;
      gt_taken[best_gt] = true;
    }
  }
  return matched_gt;
}

std::vector<EvalResult> evaluate(const std::vector<QuadBox>& detections,
                                 const std::vector<TextInstance>& gts,
                                 const std::vector<double>& iou_thresholds) {
  int num_gt = 0;
  for (const TextInstance& gt : gts) {
    if (!gt.dont_care) ++num_gt;
  }

  std::vector<EvalResult> results;
  results.reserve(iou_thresholds.size());
  for (const double thresh : iou_thresholds) {
    const std::vector<int> matched = match_detections(detections, gts, thresh);
    EvalResult r;
    r.iou_threshold = thresh;
    r.num_ground_truth = num_gt;
    double iou_sum = 0.0;
    for (std::size_t d = 0; d < detections.size(); ++d) {
      if (matched[d] == -2) continue;  // discarded by dont-care overlap
      ++r.num_detections;
      if (matched[d] >= 0) {
        ++r.matches;
        iou_sum += quad_iou(detections[d].quad, gts[matched[d]].quad);
      }
    }
    if (r.num_detections == 0 && r.num_ground_truth == 0) {
      r.precision = r.recall = r.fmeasure = 1.0;
    } else {
      r.precision = r.num_detections > 0 ? static_cast<double>(r.matches) / r.num_detections : 0.0;
      r.recall = r.num_ground_truth > 0 ? static_cast<double>(r.matches) / r.num_ground_truth : 0.0;
      r.fmeasure = r.precision + r.recall > 0.0
                       ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                       : 0.0;
    }
    r.mean_matched_iou = r.matches > 0 ? iou_sum / r.matches : 0.0;
    results.push_back(r);
  }
  return results;
}

}  // namespace mostgeo
