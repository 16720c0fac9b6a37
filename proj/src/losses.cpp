// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace mostgeo {

namespace {

constexpr double kBceClamp = 1e-7;

bool is_positive(const Grid<double>& mask, std::size_t i) { return mask[i] > 0.5; }

void require_same_shape(bool ok) {
  if (!ok) throw std::invalid_argument("grid shapes do not match");
}

// Per-sample smoothed -log IoU term in the box-local distance frame,
// with the gradient w.r.t. the four predicted distances. Ties in min()
// differentiate through the predicted branch.
struct IouTerm {
  double value = 0.0;
  double d_top = 0.0, d_right = 0.0, d_bottom = 0.0, d_left = 0.0;
};

IouTerm iou_term(const Geometry5& p, const Geometry5& g, double smoothing) {
  const double ih = std::min(p.d_top, g.d_top) + std::min(p.d_bottom, g.d_bottom);
  const double iw = std::min(p.d_left, g.d_left) + std::min(p.d_right, g.d_right);
  const double inter = ih * iw;
  const double area_p = (p.d_top + p.d_bottom) * (p.d_left + p.d_right);
  const double area_g = (g.d_top + g.d_bottom) * (g.d_left + g.d_right);
  const double uni = area_p + area_g - inter;

  IouTerm t;
  t.value = std::log(uni + smoothing) - std::log(inter + smoothing);

  const double di_top = p.d_top <= g.d_top ? iw : 0.0;
  const double di_bottom = p.d_bottom <= g.d_bottom ? iw : 0.0;
  const double di_left = p.d_left <= g.d_left ? ih : 0.0;
  const double di_right = p.d_right <= g.d_right ? ih : 0.0;

  const double w_p = p.d_left + p.d_right;
  const double h_p = p.d_top + p.d_bottom;
  const double inv_u = 1.0 / (uni + smoothing);
  const double inv_i = 1.0 / (inter + smoothing);

  t.d_top = (w_p - di_top) * inv_u - di_top * inv_i;
  t.d_bottom = (w_p - di_bottom) * inv_u - di_bottom * inv_i;
  t.d_left = (h_p - di_left) * inv_u - di_left * inv_i;
  t.d_right = (h_p - di_right) * inv_u - di_right * inv_i;
  return t;
}

double smoothed_l1(double x) { return std::abs(x) < 1.0 ? 0.5 * x * x : std::abs(x) - 0.5; }
double smoothed_l1_grad(double x) {
  return std::abs(x) < 1.0 ? x : (x > 0.0 ? 1.0 : -1.0);
}

double bce(double p, double y) { return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p)); }

}  // namespace

GeometryLossResult iou_loss(const Grid<Geometry5>& pred, const Grid<Geometry5>& gt,
                            const Grid<double>& positives, double smoothing) {
  require_same_shape(pred.same_shape(gt) && positives.height() == pred.height() &&
                     positives.width() == pred.width());
  GeometryLossResult result;
  result.grad = Grid<Geometry5>(pred.height(), pred.width());

  std::size_t count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (is_positive(positives, i)) ++count;
  }
  if (count == 0) return result;

  const double scale = 1.0 / static_cast<double>(count);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!is_positive(positives, i)) continue;
    const IouTerm t = iou_term(pred[i], gt[i], smoothing);
    sum += t.value;
    Geometry5& g = result.grad[i];
    g.d_top = t.d_top * scale;
    g.d_right = t.d_right * scale;
    g.d_bottom = t.d_bottom * scale;
    g.d_left = t.d_left * scale;
  }
  result.value = sum * scale;
  return result;
}

GeometryLossResult instance_iou_loss(const Grid<Geometry5>& pred, const Grid<Geometry5>& gt,
                                     const Grid<double>& positives,
                                     const Grid<std::int32_t>& instance_id, double smoothing) {
  require_same_shape(pred.same_shape(gt) && positives.height() == pred.height() &&
                     positives.width() == pred.width() &&
                     instance_id.height() == pred.height() &&
                     instance_id.width() == pred.width());
  GeometryLossResult result;
  result.grad = Grid<Geometry5>(pred.height(), pred.width());

  std::unordered_map<std::int32_t, std::size_t> sample_count;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!is_positive(positives, i)) continue;
    const std::int32_t id = instance_id[i];
    if (id <= 0) throw std::invalid_argument("positive pixel without instance id");
    ++sample_count[id];
  }
  const std::size_t num_instances = sample_count.size();
  if (num_instances == 0) return result;

  // Deterministic accumulation: sum per instance, then combine in id order.
  std::unordered_map<std::int32_t, double> instance_sum;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!is_positive(positives, i)) continue;
    const std::int32_t id = instance_id[i];
    const IouTerm t = iou_term(pred[i], gt[i], smoothing);
    instance_sum[id] += t.value;
    const double scale = 1.0 / (static_cast<double>(num_instances) *
                                static_cast<double>(sample_count[id]));
    Geometry5& g = result.grad[i];
    g.d_top = t.d_top * scale;
    g.d_right = t.d_right * scale;
    g.d_bottom = t.d_bottom * scale;
    g.d_left = t.d_left * scale;
  }

  std::vector<std::int32_t> ids;
  ids.reserve(instance_sum.size());
  for (const auto& [id, _] : instance_sum) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  double total = 0.0;
  for (const std::int32_t id : ids) {
    total += instance_sum[id] / static_cast<double>(sample_count[id]);
  }
  result.value = total / static_cast<double>(num_instances);
  return result;
}

ScalarLossResult angle_loss(const Grid<double>& pred_theta, const Grid<double>& gt_theta,
                            const Grid<double>& positives) {
  require_same_shape(pred_theta.same_shape(gt_theta) &&
                     positives.height() == pred_theta.height() &&
                     positives.width() == pred_theta.width());
  ScalarLossResult result;
  result.grad = Grid<double>(pred_theta.height(), pred_theta.width(), 0.0);

  std::size_t count = 0;
  for (std::size_t i = 0; i < pred_theta.size(); ++i) {
    if (is_positive(positives, i)) ++count;
  }
  if (count == 0) return result;

  const double scale = 1.0 / static_cast<double>(count);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred_theta.size(); ++i) {
    if (!is_positive(positives, i)) continue;
    const double diff = pred_theta[i] - gt_theta[i];
    sum += 1.0 - std::cos(diff);
    result.grad[i] = std::sin(diff) * scale;
  }
  result.value = sum * scale;
  return result;
}

GeometryLossResult geometry_loss(const Grid<Geometry5>& pred, const Grid<Geometry5>& gt,
                                 const Grid<double>& positives,
                                 const Grid<std::int32_t>& instance_id,
                                 const LossWeights& weights, double smoothing) {
  GeometryLossResult iou = iou_loss(pred, gt, positives, smoothing);
  GeometryLossResult ins = instance_iou_loss(pred, gt, positives, instance_id, smoothing);

  Grid<double> pred_theta(pred.height(), pred.width());
  Grid<double> gt_theta(pred.height(), pred.width());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred_theta[i] = pred[i].theta;
    gt_theta[i] = gt[i].theta;
  }
  ScalarLossResult ang = angle_loss(pred_theta, gt_theta, positives);

  GeometryLossResult result;
  result.value = iou.value + weights.lambda_i * ins.value + weights.lambda_theta * ang.value;
  result.grad = Grid<Geometry5>(pred.height(), pred.width());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    Geometry5& g = result.grad[i];
    g.d_top = iou.grad[i].d_top + weights.lambda_i * ins.grad[i].d_top;
    g.d_right = iou.grad[i].d_right + weights.lambda_i * ins.grad[i].d_right;
    g.d_bottom = iou.grad[i].d_bottom + weights.lambda_i * ins.grad[i].d_bottom;
    g.d_left = iou.grad[i].d_left + weights.lambda_i * ins.grad[i].d_left;
    g.theta = weights.lambda_theta * ang.grad[i];
  }
  return result;
}

ScalarLossResult score_loss_ohem(const Grid<double>& pred_score, const Grid<double>& gt_score,
                                 const Grid<double>& train_mask, int neg_pos_ratio) {
  require_same_shape(pred_score.same_shape(gt_score) &&
                     train_mask.height() == pred_score.height() &&
                     train_mask.width() == pred_score.width());
  if (neg_pos_ratio < 0) throw std::invalid_argument("neg_pos_ratio must be >= 0");

  ScalarLossResult result;
  result.grad = Grid<double>(pred_score.height(), pred_score.width(), 0.0);

  std::vector<std::size_t> selected;
  std::vector<std::pair<double, std::size_t>> negatives;  // (loss, index)
  for (std::size_t i = 0; i < pred_score.size(); ++i) {
    if (train_mask[i] <= 0.5) continue;
    const double p = std::clamp(pred_score[i], kBceClamp, 1.0 - kBceClamp);
    if (gt_score[i] > 0.5) {
      selected.push_back(i);
    } else {
      negatives.emplace_back(bce(p, 0.0), i);
    }
  }

  const std::size_t num_pos = selected.size();
  std::size_t num_neg =
      num_pos > 0 ? num_pos * static_cast<std::size_t>(neg_pos_ratio) : std::size_t{100};
  num_neg = std::min(num_neg, negatives.size());
  std::partial_sort(negatives.begin(), negatives.begin() + num_neg, negatives.end(),
                    [](const auto& a, const auto& b) {
                      return a.first > b.first || (a.first == b.first && a.second < b.second);
                    });
  for (std::size_t n = 0; n < num_neg; ++n) selected.push_back(negatives[n].second);

  if (selected.empty()) return result;
  const double scale = 1.0 / static_cast<double>(selected.size());
  double sum = 0.0;
  for (const std::size_t i : selected) {
    const double raw = pred_score[i];
    const double p = std::clamp(raw, kBceClamp, 1.0 - kBceClamp);
    const double y = gt_score[i] > 0.5 ? 1.0 : 0.0;
    sum += bce(p, y);
    if (raw > kBceClamp && raw < 1.0 - kBceClamp) {
      result.grad[i] = (-y / p + (1.0 - y) / (1.0 - p)) * scale;
    }
  }
  result.value = sum * scale;
  return result;
}

SideLossResult possens_loss(const Grid<SideValues>& pred, const Grid<SideValues>& gt,
                            const Grid<double>& positives) {
  require_same_shape(pred.same_shape(gt) && positives.height() == pred.height() &&
                     positives.width() == pred.width());
  SideLossResult result;
  result.grad = Grid<SideValues>(pred.height(), pred.width());

  std::size_t count = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (is_positive(positives, i)) ++count;
  }
  if (count == 0) return result;

  const double scale = 1.0 / (4.0 * static_cast<double>(count));
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!is_positive(positives, i)) continue;
    const SideValues& p = pred[i];
    const SideValues& g = gt[i];
    sum += smoothed_l1(p.left - g.left) + smoothed_l1(p.right - g.right) +
           smoothed_l1(p.top - g.top) + smoothed_l1(p.bottom - g.bottom);
    SideValues& grad = result.grad[i];
    grad.left = smoothed_l1_grad(p.left - g.left) * scale;
    grad.right = smoothed_l1_grad(p.right - g.right) * scale;
    grad.top = smoothed_l1_grad(p.top - g.top) * scale;
    grad.bottom = smoothed_l1_grad(p.bottom - g.bottom) * scale;
  }
  result.value = sum * scale;
  return result;
}

TotalLossResult total_loss(const Grid<double>& pred_score, const Grid<Geometry5>& pred_geo_coarse,
                           const Grid<Geometry5>& pred_geo_refined,
                           const Grid<SideValues>& pred_possens, const LabelMaps& labels,
                           const LossWeights& weights, int neg_pos_ratio) {
  ScalarLossResult score =
      score_loss_ohem(pred_score, labels.score, labels.train_mask, neg_pos_ratio);
  GeometryLossResult coarse = geometry_loss(pred_geo_coarse, labels.geometry, labels.score,
                                            labels.instance_id, weights);
  GeometryLossResult refined = geometry_loss(pred_geo_refined, labels.geometry, labels.score,
                                             labels.instance_id, weights);
  SideLossResult possens = possens_loss(pred_possens, labels.possens, labels.score);

  TotalLossResult result;
  result.score_term = score.value;
  result.coarse_term = coarse.value;
  result.refined_term = refined.value;
  result.possens_term = possens.value;
  result.value = score.value + weights.lambda_gc * coarse.value +
                 weights.lambda_gr * refined.value + weights.lambda_p * possens.value;

  result.score_grad = std::move(score.grad);
  result.coarse_grad = std::move(coarse.grad);
  result.refined_grad = std::move(refined.grad);
  result.possens_grad = std::move(possens.grad);
  for (std::size_t i = 0; i < result.coarse_grad.size(); ++i) {
    Geometry5& c = result.coarse_grad[i];
    c.d_top *= weights.lambda_gc;
    c.d_right *= weights.lambda_gc;
    c.d_bottom *= weights.lambda_gc;
    c.d_left *= weights.lambda_gc;
    c.theta *= weights.lambda_gc;
    Geometry5& r = result.refined_grad[i];
    r.d_top *= weights.lambda_gr;
    r.d_right *= weights.lambda_gr;
    r.d_bottom *= weights.lambda_gr;
    r.d_left *= weights.lambda_gr;
    r.theta *= weights.lambda_gr;
    SideValues& p = result.possens_grad[i];
    p.left *= weights.lambda_p;
    p.right *= weights.lambda_p;
    p.top *= weights.lambda_p;
    p.bottom *= weights.lambda_p;
  }
  return result;
}

}  // namespace mostgeo
