// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mostgeo/sampling.hpp"
#include "oracles.hpp"

using namespace mostgeo;

TEST_CASE("square grid layout") {
  const SamplingGrid g = SamplingGrid::square(3);
  REQUIRE(g.regular_offsets.size() == 9);
  CHECK(g.regular_offsets[0].x == -1.0);
  CHECK(g.regular_offsets[0].y == -1.0);
  CHECK(g.regular_offsets[4].x == 0.0);
  CHECK(g.regular_offsets[4].y == 0.0);
  CHECK(g.regular_offsets[8].x == 1.0);
  CHECK(g.regular_offsets[8].y == 1.0);
  // symmetric about the origin
  for (std::size_t n = 0; n < 9; ++n) {
    const Point2 mirrored = g.regular_offsets[8 - n];
    CHECK(g.regular_offsets[n].x == -mirrored.x);
    CHECK(g.regular_offsets[n].y == -mirrored.y);
  }
  CHECK_THROWS_AS(SamplingGrid::square(2), std::invalid_argument);
  CHECK_THROWS_AS(SamplingGrid::square(0), std::invalid_argument);
}

TEST_CASE("tfam_offsets vanish when box matches the grid footprint") {
  const int stride = 4;
  const SamplingGrid grid = SamplingGrid::square(3);
  const Point2 p0{10.0, 7.0};
  // box corners at p0 +- (1, 1) feature units
  const Geometry5 coarse{static_cast<double>(stride), static_cast<double>(stride),
                         static_cast<double>(stride), static_cast<double>(stride), 0.0};
  const OffsetField field = tfam_offsets(coarse, p0, grid, stride);
  for (const Point2& d : field.deltas) {
    CHECK(d.x == 0.0);
    CHECK(d.y == 0.0);
  }
}

TEST_CASE("tfam_offsets 5x3 feature-unit box") {
  const int stride = 4;
  const SamplingGrid grid = SamplingGrid::square(3);
  const Point2 p0{20.0, 15.0};
  // axis-aligned box of width 5 and height 3 feature units centered at p0
  const Geometry5 coarse{1.5 * stride, 2.5 * stride, 1.5 * stride, 2.5 * stride, 0.0};
  const OffsetField field = tfam_offsets(coarse, p0, grid, stride);
  const double dx[3] = {-1.5, 0.0, 1.5};
  const double dy[3] = {-0.5, 0.0, 0.5};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Point2& d = field.deltas[static_cast<std::size_t>(i) * 3 + j];
      CHECK(d.x == doctest::Approx(dx[j]).epsilon(1e-12));
      CHECK(d.y == doctest::Approx(dy[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("sampled points land inside rotated boxes") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(2.0, 40.0);
  std::uniform_real_distribution<double> angle(-0.78, 0.78);
  const SamplingGrid grid = SamplingGrid::square(3);
  const int stride = 4;
  for (int i = 0; i < 1000; ++i) {
    const Geometry5 coarse{dist(rng), dist(rng), dist(rng), dist(rng), angle(rng)};
    const Point2 p0{dist(rng), dist(rng)};
    const OffsetField field = tfam_offsets(coarse, p0, grid, stride);
    const std::vector<Point2> points = sampled_points(p0, grid, field);
    const Quad box = decode_rbox(p0, coarse, stride);
    // grow the box a hair so corner samples stay inside despite rounding
    Quad grown = box;
    const Point2 center =
        (box.vertices[0] + box.vertices[1] + box.vertices[2] + box.vertices[3]) / 4.0;
    for (Point2& v : grown.vertices) v = center + (v - center) * (1.0 + 1e-9);
    for (const Point2& fp : points) {
      CHECK(point_in_quad({fp.x * stride, fp.y * stride}, grown));
    }
  }
}

TEST_CASE("k equal one samples the box center") {
  const SamplingGrid grid = SamplingGrid::square(1);
  const int stride = 4;
  const Geometry5 coarse{2.0, 10.0, 6.0, 2.0, 0.0};
  const Point2 p0{10.0, 10.0};
  const OffsetField field = tfam_offsets(coarse, p0, grid, stride);
  const std::vector<Point2> points = sampled_points(p0, grid, field);
  REQUIRE(points.size() == 1);
  // center of the decoded box: x in [40-2, 40+10] -> 44, y in [34, 46] -> 40
  CHECK(points[0].x * stride == doctest::Approx(44.0));
  CHECK(points[0].y * stride == doctest::Approx(40.0));
}

TEST_CASE("zero offsets reproduce the regular grid") {
  const SamplingGrid grid = SamplingGrid::square(3);
  OffsetField zeros;
  zeros.deltas.assign(9, Point2{0.0, 0.0});
  const std::vector<Point2> points = sampled_points({5.0, 6.0}, grid, zeros);
  for (std::size_t n = 0; n < 9; ++n) {
    CHECK(points[n].x == 5.0 + grid.regular_offsets[n].x);
    CHECK(points[n].y == 6.0 + grid.regular_offsets[n].y);
  }
}

TEST_CASE("feature-unit and image-unit computations agree") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(2.0, 30.0);
  std::uniform_real_distribution<double> angle(-0.7, 0.7);
  const SamplingGrid grid = SamplingGrid::square(3);
  const int stride = 4;
  for (int i = 0; i < 200; ++i) {
    const Geometry5 coarse{dist(rng), dist(rng), dist(rng), dist(rng), angle(rng)};
    const Point2 p0{dist(rng), dist(rng)};
    const std::vector<Point2> feature_pts =
        sampled_points(p0, grid, tfam_offsets(coarse, p0, grid, stride));

    // image-unit route: build the lattice over the decoded box directly
    const Quad box = decode_rbox(p0, coarse, stride);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        const double s = c / 2.0;
        const double t = r / 2.0;
        const Point2 top = box.vertices[0] + (box.vertices[1] - box.vertices[0]) * s;
        const Point2 bottom = box.vertices[3] + (box.vertices[2] - box.vertices[3]) * s;
        const Point2 image_pt = top + (bottom - top) * t;
        const Point2& fp = feature_pts[static_cast<std::size_t>(r) * 3 + c];
        CHECK(std::abs(image_pt.x / stride - fp.x) < 1e-9);
        CHECK(std::abs(image_pt.y / stride - fp.y) < 1e-9);
      }
    }
  }
}

TEST_CASE("center delta points from p0 to the box center") {
  const SamplingGrid grid = SamplingGrid::square(3);
  const int stride = 4;
  const Geometry5 coarse{4.0, 20.0, 8.0, 4.0, 0.0};
  const Point2 p0{10.0, 10.0};
  const OffsetField field = tfam_offsets(coarse, p0, grid, stride);
  // box center in feature units: x = (40 - 4 + 40 + 20)/2 / 4 = 12, y = (40-4+40+8)/2/4 = 10.5
  CHECK(p0.x + field.deltas[4].x == doctest::Approx(12.0));
  CHECK(p0.y + field.deltas[4].y == doctest::Approx(10.5));
}
