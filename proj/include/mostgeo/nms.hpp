// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "mostgeo/geometry.hpp"

namespace mostgeo {

/// A detection candidate or merged detection. score starts as the
/// classification score and accumulates across merges; weights start as
/// the position-sensitive values at the predicting pixel and accumulate
/// across position-aware merges.
struct QuadBox {
  Quad quad;
  double score = 0.0;
  SideValues weights;
  std::optional<Point2> source_pixel;
};

struct NmsParams {
  double merge_iou = 0.2;
  double final_iou = 0.2;
  double score_thresh = 0.8;
  double epsilon = 1e-6;
};

/// Score-weighted vertex merge; S(m) = S(p) + S(q). Side weights are
/// score-weighted averages so position-aware comparisons on the result
/// stay well-defined.
QuadBox weighted_merge(const QuadBox& p, const QuadBox& q);

/// Position-aware merge: x of the left/right vertex pairs is weighted by
/// the left/right values, y of the top/bottom pairs by the top/bottom
/// values; side weights and the score accumulate as sums. epsilon floors
/// a side's weights when both constituents carry zero there.
QuadBox position_aware_merge(const QuadBox& p, const QuadBox& q, double epsilon = 1e-6);

/// Greedy suppression by descending score (ties keep the earlier box);
/// boxes with IoU > iou_thresh against a kept box are dropped.
std::vector<QuadBox> standard_nms(const std::vector<QuadBox>& boxes, double iou_thresh);

/// Single-pass row-major merge scan (merge with the running box while
/// IoU > merge_iou, emit otherwise) followed by standard NMS on the
/// accumulated scores. Candidates must arrive in row-major pixel order.
std::vector<QuadBox> locality_aware_nms(const std::vector<QuadBox>& candidates,
                                        const NmsParams& params = {});

/// The same scan merging through position_aware_merge.
std::vector<QuadBox> pa_nms(const std::vector<QuadBox>& candidates, const NmsParams& params = {});

}  // namespace mostgeo
