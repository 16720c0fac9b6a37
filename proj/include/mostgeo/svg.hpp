// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mostgeo/labelgen.hpp"
#include "mostgeo/nms.hpp"

namespace mostgeo {

/// Render detections (and optionally ground truth) as an SVG document.
/// With ground truth, detections matched at iou_threshold are stroked
/// green and the rest red; ground-truth outlines are gray (dashed for
/// dont-care). Output is deterministic.
std::string render_svg(int image_w, int image_h, const std::vector<QuadBox>& detections,
                       const std::vector<TextInstance>* gts = nullptr,
                       double iou_threshold = 0.5);

}  // namespace mostgeo
