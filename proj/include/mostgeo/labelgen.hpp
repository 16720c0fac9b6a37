// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mostgeo/geometry.hpp"
#include "mostgeo/grid.hpp"

namespace mostgeo {

/// Ground-truth text region. Instances flagged dont_care are excluded from
/// training supervision (the ICDAR "###" convention).
struct TextInstance {
  Quad quad;
  bool dont_care = false;
};

struct PosSensParams {
  double alpha = 0.75;
};

/// Per-image supervision maps at 1/stride resolution.
///   score        {0,1}; 1 on positive pixels
///   geometry     valid wherever score is 1
///   possens      left/right/top/bottom confidences in [0,1]; 0 on background
///   train_mask   {0,1}; 0 inside dont-care regions (positives stay 1)
///   instance_id  0 background, j >= 1 for the j-th input instance
struct LabelMaps {
  Grid<double> score;
  Grid<Geometry5> geometry;
  Grid<SideValues> possens;
  Grid<double> train_mask;
  Grid<std::int32_t> instance_id;
  int skipped_instances = 0;
};

/// Contract each vertex inward along its two incident edges by
/// ratio * r_i, where r_i is the shorter incident edge at vertex i; the
/// longer edge pair moves first. Returns nullopt when the shrink collapses
/// the quad.
std::optional<Quad> shrink_quad(const Quad& q, double ratio);

/// Position-sensitive confidence for one sample: with m = min(dists),
/// M = max(dists) and d_f = alpha * (M - m) + m, the value is
/// 1 - (dist - m) / (d_f - m) when dist < d_f, else 0. All-equidistant
/// sets (M == m) give 1 everywhere.
double position_sensitive_value(double dist, std::span<const double> dists_all, double alpha);
double position_sensitive_value(double dist, double min_dist, double max_dist, double alpha);

/// Build all supervision maps for one image. image_h and image_w must be
/// divisible by stride. Positive pixels are feature pixels whose image
/// point (stride * pixel) falls inside the shrunk quad; overlaps go to the
/// instance with the smaller quad area. Instances that end up with no
/// positive pixels are counted in skipped_instances.
LabelMaps generate_maps(const std::vector<TextInstance>& instances, int image_h, int image_w,
                        int stride = 4, double shrink_ratio = 0.3, PosSensParams psp = {});

}  // namespace mostgeo
