// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "mostgeo/geometry.hpp"
#include "mostgeo/grid.hpp"
#include "mostgeo/labelgen.hpp"

namespace mostgeo {

/// Balancing weights for the training objective. lambda_gc/gr/p weight the
/// coarse-geometry, refined-geometry and position-sensitive terms of the
/// total loss; lambda_i and lambda_theta weight the instance-wise IoU and
/// angle terms inside each geometry loss.
struct LossWeights {
  double lambda_gc = 1.0;
  double lambda_gr = 1.0;
  double lambda_p = 1.0;
  double lambda_i = 1.0;
  double lambda_theta = 20.0;
};

/// Loss value plus the gradient w.r.t. the predicted input grid.
template <typename GradT>
struct LossResult {
  double value = 0.0;
  Grid<GradT> grad;
};

using GeometryLossResult = LossResult<Geometry5>;
using ScalarLossResult = LossResult<double>;
using SideLossResult = LossResult<SideValues>;

/// Log-smoothed axis-aligned IoU loss over positive pixels, computed in
/// the box-local distance frame. smoothing is added to both intersection
/// and union inside the log; pass 0 for the unsmoothed ratio.
GeometryLossResult iou_loss(const Grid<Geometry5>& pred, const Grid<Geometry5>& gt,
                            const Grid<double>& positives, double smoothing = 1.0);

/// IoU loss normalized per text instance before averaging over instances,
/// so large and small instances contribute equally.
GeometryLossResult instance_iou_loss(const Grid<Geometry5>& pred, const Grid<Geometry5>& gt,
                                     const Grid<double>& positives,
                                     const Grid<std::int32_t>& instance_id,
                                     double smoothing = 1.0);

/// Mean of 1 - cos(pred - gt) over positives.
ScalarLossResult angle_loss(const Grid<double>& pred_theta, const Grid<double>& gt_theta,
                            const Grid<double>& positives);

/// Combined geometry objective: iou + lambda_i * instance_iou +
/// lambda_theta * angle. The gradient covers all five channels.
GeometryLossResult geometry_loss(const Grid<Geometry5>& pred, const Grid<Geometry5>& gt,
                                 const Grid<double>& positives,
                                 const Grid<std::int32_t>& instance_id,
                                 const LossWeights& weights = {}, double smoothing = 1.0);

/// Binary cross entropy with online hard example mining: all masked
/// positives plus the neg_pos_ratio * |positives| hardest masked
/// negatives (the 100 hardest when there are no positives). Predictions
/// are clamped to [1e-7, 1 - 1e-7].
ScalarLossResult score_loss_ohem(const Grid<double>& pred_score, const Grid<double>& gt_score,
                                 const Grid<double>& train_mask, int neg_pos_ratio = 3);

/// Smoothed-L1 (beta = 1) over the four position-sensitive channels,
/// normalized by 4 * |positives|.
SideLossResult possens_loss(const Grid<SideValues>& pred, const Grid<SideValues>& gt,
                            const Grid<double>& positives);

/// Full objective and all gradients:
/// score + lambda_gc * geom(coarse) + lambda_gr * geom(refined) +
/// lambda_p * possens.
struct TotalLossResult {
  double value = 0.0;
  double score_term = 0.0;
  double coarse_term = 0.0;
  double refined_term = 0.0;
  double possens_term = 0.0;
  Grid<double> score_grad;
  Grid<Geometry5> coarse_grad;
  Grid<Geometry5> refined_grad;
  Grid<SideValues> possens_grad;
};

TotalLossResult total_loss(const Grid<double>& pred_score, const Grid<Geometry5>& pred_geo_coarse,
                           const Grid<Geometry5>& pred_geo_refined,
                           const Grid<SideValues>& pred_possens, const LabelMaps& labels,
                           const LossWeights& weights = {}, int neg_pos_ratio = 3);

}  // namespace mostgeo
