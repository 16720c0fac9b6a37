// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/sampling.hpp"

#include <stdexcept>

namespace mostgeo {

SamplingGrid SamplingGrid::square(int k) {
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("grid size must be odd and >= 1");
  SamplingGrid grid;
  grid.k = k;
  grid.regular_offsets.reserve(static_cast<std::size_t>(k) * k);
  const int m = k / 2;
  for (int i = -m; i <= m; ++i) {
    for (int j = -m; j <= m; ++j) {
      grid.regular_offsets.push_back({static_cast<double>(j), static_cast<double>(i)});
    }
  }
  return grid;
}

OffsetField tfam_offsets(const Geometry5& coarse, const Point2& p0, const SamplingGrid& grid,
                         int stride) {
  if (stride <= 0) throw std::invalid_argument("stride must be positive");
  const int k = grid.k;
  if (k < 1 || grid.regular_offsets.size() != static_cast<std::size_t>(k) * k) {
    throw std::invalid_argument("inconsistent sampling grid");
  }

  const Quad box = decode_rbox(p0, coarse, stride);
  const auto& c = box.vertices;

  OffsetField field;
  field.deltas.resize(grid.regular_offsets.size());
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double t = k == 1 ? 0.5 : static_cast<double>(i) / (k - 1);
      const double s = k == 1 ? 0.5 : static_cast<double>(j) / (k - 1);
      const Point2 top = c[0] + (c[1] - c[0]) * s;
      const Point2 bottom = c[3] + (c[2] - c[3]) * s;
      const Point2 lattice = (top + (bottom - top) * t) / static_cast<double>(stride);
      const std::size_t n = static_cast<std::size_t>(i) * k + j;
      field.deltas[n] = lattice - (p0 + grid.regular_offsets[n]);
    }
  }
  return field;
}

std::vector<Point2> sampled_points(const Point2& p0, const SamplingGrid& grid,
                                   const OffsetField& offsets) {
  if (offsets.deltas.size() != grid.regular_offsets.size()) {
    throw std::invalid_argument("offset count does not match grid");
  }
  std::vector<Point2> points(grid.regular_offsets.size());
  for (std::size_t n = 0; n < points.size(); ++n) {
    points[n] = p0 + grid.regular_offsets[n] + offsets.deltas[n];
  }
  return points;
}

}  // namespace mostgeo
