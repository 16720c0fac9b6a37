// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mostgeo/geometry.hpp"

namespace mostgeo {

/// Regular k x k sampling grid in feature units, row-major from top-left
/// to bottom-right ({-1,0,1}^2 for k = 3). Offsets are symmetric about the
/// origin.
struct SamplingGrid {
  int k = 3;
  std::vector<Point2> regular_offsets;

  static SamplingGrid square(int k);
};

/// Additional per-point offsets, in feature units.
struct OffsetField {
  std::vector<Point2> deltas;
};

/// Localization-based sampling offsets: spread the k x k lattice evenly
/// over the coarse detection box decoded at p0 (corner samples land on the
/// box corners; k = 1 samples the box center) and return the offsets from
/// the regular grid to those lattice points.
OffsetField tfam_offsets(const Geometry5& coarse, const Point2& p0, const SamplingGrid& grid,
                         int stride);

/// Final sampling locations p0 + p_n + delta_n, in feature units.
std::vector<Point2> sampled_points(const Point2& p0, const SamplingGrid& grid,
                                   const OffsetField& offsets);

}  // namespace mostgeo
