// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/nms.hpp"

#include <algorithm>
#include <numeric>

namespace mostgeo {

namespace {

bool boxes_may_overlap(const QuadBox& a, const QuadBox& b) {
  const auto [alo, ahi] = bounding_box(a.quad);
  const auto [blo, bhi] = bounding_box(b.quad);
  return alo.x <= bhi.x && blo.x <= ahi.x && alo.y <= bhi.y && blo.y <= ahi.y;
}

double iou_prefiltered(const QuadBox& a, const QuadBox& b) {
  if (!boxes_may_overlap(a, b)) return 0.0;
  return quad_iou(a.quad, b.quad);
}

template <typename MergeFn>
std::vector<QuadBox> merge_scan(const std::vector<QuadBox>& candidates, const NmsParams& params,
                                MergeFn&& merge) {
  std::vector<QuadBox> merged;
  if (candidates.empty()) return merged;
  QuadBox last = candidates.front();
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const QuadBox& cur = candidates[i];
    if (iou_prefiltered(cur, last) > params.merge_iou) {
      last = merge(last, cur);
    } else {
      merged.push_back(std::move(last));
      last = cur;
    }
  }
  merged.push_back(std::move(last));
  return standard_nms(merged, params.final_iou);
}

}  // namespace

QuadBox weighted_merge(const QuadBox& p, const QuadBox& q) {
  const double sp = p.score;
  const double sq = q.score;
  const double total = sp + sq;
  QuadBox m;
  for (int i = 0; i < 4; ++i) {
    m.quad.vertices[i] = (p.quad.vertices[i] * sp + q.quad.vertices[i] * sq) / total;
  }
  m.score = total;
  m.weights.left = (sp * p.weights.left + sq * q.weights.left) / total;
  m.weights.right = (sp * p.weights.right + sq * q.weights.right) / total;
  m.weights.top = (sp * p.weights.top + sq * q.weights.top) / total;
  m.weights.bottom = (sp * p.weights.bottom + sq * q.weights.bottom) / total;
  return m;
}

QuadBox position_aware_merge(const QuadBox& p, const QuadBox& q, double epsilon) {
  auto side = [epsilon](double wp, double wq) {
    if (wp + wq <= 0.0) return std::pair<double, double>{epsilon, epsilon};
    return std::pair<double, double>{wp, wq};
  };
  const auto [lp, lq] = side(p.weights.left, q.weights.left);
  const auto [rp, rq] = side(p.weights.right, q.weights.right);
  const auto [tp, tq] = side(p.weights.top, q.weights.top);
  const auto [bp, bq] = side(p.weights.bottom, q.weights.bottom);

  const auto& pv = p.quad.vertices;
  const auto& qv = q.quad.vertices;
  QuadBox m;
  auto& mv = m.quad.vertices;
  mv[0].x = (lp * pv[0].x + lq * qv[0].x) / (lp + lq);
  mv[3].x = (lp * pv[3].x + lq * qv[3].x) / (lp + lq);
  mv[1].x = (rp * pv[1].x + rq * qv[1].x) / (rp + rq);
  mv[2].x = (rp * pv[2].x + rq * qv[2].x) / (rp + rq);
  mv[0].y = (tp * pv[0].y + tq * qv[0].y) / (tp + tq);
  mv[1].y = (tp * pv[1].y + tq * qv[1].y) / (tp + tq);
  mv[2].y = (bp * pv[2].y + bq * qv[2].y) / (bp + bq);
  mv[3].y = (bp * pv[3].y + bq * qv[3].y) / (bp + bq);

  m.weights.left = p.weights.left + q.weights.left;
  m.weights.right = p.weights.right + q.weights.right;
  m.weights.top = p.weights.top + q.weights.top;
  m.weights.bottom = p.weights.bottom + q.weights.bottom;
  m.score = p.score + q.score;
  return m;
}

std::vector<QuadBox> standard_nms(const std::vector<QuadBox>& boxes, double iou_thresh) {
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return boxes[a].score > boxes[b].score;
  });

  std::vector<QuadBox> kept;
  std::vector<bool> suppressed(boxes.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (suppressed[i]) continue;
    const QuadBox& box = boxes[order[i]];
    kept.push_back(box);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (suppressed[j]) continue;
      if (iou_prefiltered(box, boxes[order[j]]) > iou_thresh) suppressed[j] = true;
    }
  }
  return kept;
}

std::vector<QuadBox> locality_aware_nms(const std::vector<QuadBox>& candidates,
                                        const NmsParams& params) {
  return merge_scan(candidates, params,
                    [](const QuadBox& a, const QuadBox& b) { return weighted_merge(a, b); });
}

std::vector<QuadBox> pa_nms(const std::vector<QuadBox>& candidates, const NmsParams& params) {
  return merge_scan(candidates, params, [&params](const QuadBox& a, const QuadBox& b) {
    return position_aware_merge(a, b, params.epsilon);
  });
}

}  // namespace mostgeo
