// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mostgeo/geometry.hpp"
#include "oracles.hpp"

using namespace mostgeo;
using mostgeo::testing::random_convex_quad;
using mostgeo::testing::random_rect;
using mostgeo::testing::rasterized_iou;

namespace {

Quad make_quad(std::initializer_list<double> xy) {
  Quad q;
  auto it = xy.begin();
  for (int i = 0; i < 4; ++i) {
    q.vertices[i].x = *it++;
    q.vertices[i].y = *it++;
  }
  return q;
}

const Quad kUnitSquare = make_quad({0, 0, 1, 0, 1, 1, 0, 1});

}  // namespace

TEST_CASE("quad_area basics") {
  CHECK(quad_area(kUnitSquare) == doctest::Approx(1.0));
  CHECK(quad_area(make_quad({0, 0, 2, 0, 2, 3, 0, 3})) == doctest::Approx(6.0));
  const Quad collapsed = make_quad({5, 5, 5, 5, 5, 5, 5, 5});
  CHECK(quad_area(collapsed) == 0.0);
}

TEST_CASE("polygon_clip identity and disjoint") {
  const Polygon same = polygon_clip(kUnitSquare, kUnitSquare);
  CHECK(same.size() == 4);
  CHECK(polygon_area(same) == doctest::Approx(1.0));

  const Quad far_square = make_quad({10, 10, 11, 10, 11, 11, 10, 11});
  CHECK(polygon_clip(kUnitSquare, far_square).empty());
}

TEST_CASE("polygon_clip rejects non-convex input") {
  const Quad dart = make_quad({0, 0, 10, 0, 2, 2, 0, 10});
  CHECK(!is_convex(dart));
  CHECK_THROWS_WITH_AS(polygon_clip(dart, kUnitSquare), "non-convex polygon",
                       std::invalid_argument);
}

TEST_CASE("polygon_clip octagon from crossed squares") {
  // Axis square and the 45-degree square of equal size and center
  // intersect in a regular octagon of area 2 (sqrt(2) - 1) s^2.
  const Quad axis = make_quad({-0.5, -0.5, 0.5, -0.5, 0.5, 0.5, -0.5, 0.5});
  const double r = std::sqrt(0.5);
  const Quad diamond = make_quad({0, -r, r, 0, 0, r, -r, 0});
  const Polygon octagon = polygon_clip(axis, diamond);
  CHECK(octagon.size() == 8);
  const double area = polygon_area(octagon);
  CHECK(area == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-9));

  const testing::Rasterizer raster(axis, diamond, 1000);
  const double raster_area = raster.pixels_inter() * raster.pixel_area();
  CHECK(std::abs(area - raster_area) / area < 1e-2);
}

TEST_CASE("quad_iou analytic cases") {
  CHECK(quad_iou(kUnitSquare, kUnitSquare) == doctest::Approx(1.0));
  const Quad shifted = make_quad({0.5, 0, 1.5, 0, 1.5, 1, 0.5, 1});
  CHECK(quad_iou(kUnitSquare, shifted) == doctest::Approx(1.0 / 3.0));
  const Quad far_square = make_quad({5, 5, 6, 5, 6, 6, 5, 6});
  CHECK(quad_iou(kUnitSquare, far_square) == 0.0);

  const Quad collapsed = make_quad({1, 1, 1, 1, 1, 1, 1, 1});
  CHECK(quad_iou(collapsed, collapsed) == 0.0);
}

TEST_CASE("quad_iou matches rasterization oracle") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1000; ++i) {
    Quad a = random_convex_quad(rng, 100.0);
    Quad b = random_convex_quad(rng, 100.0);
    // bias towards overlapping pairs: pull b next to a half of the time
    if (i % 2 == 0) {
      const Point2 shift = a.vertices[0] - b.vertices[0];
      for (Point2& v : b.vertices) v = v + shift;
    }
    const double fast = quad_iou(a, b);
    const double slow = rasterized_iou(a, b);
    CHECK(std::abs(fast - slow) < 1e-2);
  }
}

TEST_CASE("quad_iou symmetry property") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const Quad a = random_convex_quad(rng);
    const Quad b = random_convex_quad(rng);
    CHECK(quad_iou(a, b) == doctest::Approx(quad_iou(b, a)).epsilon(1e-12));
    CHECK(quad_iou(a, a) == doctest::Approx(1.0));
  }
}

TEST_CASE("quad_iou handles concave quads") {
  // arrowhead: concave at vertex 2
  const Quad arrow = make_quad({0, 0, 10, 0, 5, 3, 0, 10});
  CHECK(!is_convex(arrow));
  const Quad box = make_quad({-2, -2, 12, -2, 12, 12, -2, 12});
  // arrow fully inside box: intersection equals the arrow's own area
  const double expected = quad_area(arrow) / quad_area(box);
  CHECK(quad_iou(arrow, box) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(std::abs(quad_iou(arrow, box) - rasterized_iou(arrow, box)) < 1e-2);
}

TEST_CASE("min_area_rect identity on axis rectangle") {
  const Quad rect = make_quad({2, 3, 12, 3, 12, 7, 2, 7});
  const RotatedRect r = min_area_rect(rect);
  CHECK(r.center.x == doctest::Approx(7.0));
  CHECK(r.center.y == doctest::Approx(5.0));
  CHECK(r.width == doctest::Approx(10.0));
  CHECK(r.height == doctest::Approx(4.0));
  CHECK(r.theta == doctest::Approx(0.0));
}

TEST_CASE("min_area_rect inverts a known rotation") {
  const RotatedRect in{{50.0, 40.0}, 30.0, 10.0, 0.2};
  const RotatedRect out = min_area_rect(to_quad(in));
  CHECK(out.center.x == doctest::Approx(in.center.x).epsilon(1e-6));
  CHECK(out.center.y == doctest::Approx(in.center.y).epsilon(1e-6));
  CHECK(out.width == doctest::Approx(in.width).epsilon(1e-6));
  CHECK(out.height == doctest::Approx(in.height).epsilon(1e-6));
  CHECK(out.theta == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("min_area_rect round trip on random rects") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const RotatedRect in = random_rect(rng);
    const RotatedRect out = min_area_rect(to_quad(in));
    CHECK(std::abs(out.center.x - in.center.x) < 1e-6);
    CHECK(std::abs(out.center.y - in.center.y) < 1e-6);
    CHECK(std::abs(out.width - in.width) < 1e-6);
    CHECK(std::abs(out.height - in.height) < 1e-6);
    CHECK(std::abs(out.theta - in.theta) < 1e-6);
  }
}

TEST_CASE("min_area_rect encloses arbitrary quads") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const Quad q = random_convex_quad(rng);
    const RotatedRect r = min_area_rect(q);
    const Quad rq = to_quad(r);
    for (const Point2& v : q.vertices) {
      CHECK(point_in_quad(v, rq));
    }
    CHECK(r.width * r.height >= quad_area(q) - 1e-9);
    CHECK(r.theta >= -0.7853981633974484);
    CHECK(r.theta < 0.7853981633974484);
  }
}

TEST_CASE("min_area_rect rejects degenerate input") {
  const Quad line = make_quad({0, 0, 1, 1, 2, 2, 3, 3});
  CHECK_THROWS_WITH_AS(min_area_rect(line), "degenerate quadrangle", std::invalid_argument);
}

TEST_CASE("decode_rbox axis-aligned examples") {
  const Quad a = decode_rbox({10, 10}, Geometry5{8, 8, 8, 8, 0}, 4);
  CHECK(a.vertices[0].x == doctest::Approx(32.0));
  CHECK(a.vertices[0].y == doctest::Approx(32.0));
  CHECK(a.vertices[1].x == doctest::Approx(48.0));
  CHECK(a.vertices[1].y == doctest::Approx(32.0));
  CHECK(a.vertices[2].x == doctest::Approx(48.0));
  CHECK(a.vertices[2].y == doctest::Approx(48.0));
  CHECK(a.vertices[3].x == doctest::Approx(32.0));
  CHECK(a.vertices[3].y == doctest::Approx(48.0));

  // image point (40, 40), d = (top 2, right 6, bottom 2, left 2)
  const Quad b = decode_rbox({10, 10}, Geometry5{2, 6, 2, 2, 0}, 4);
  CHECK(b.vertices[0].x == doctest::Approx(38.0));
  CHECK(b.vertices[0].y == doctest::Approx(38.0));
  CHECK(b.vertices[1].x == doctest::Approx(46.0));
  CHECK(b.vertices[1].y == doctest::Approx(38.0));
  CHECK(b.vertices[2].x == doctest::Approx(46.0));
  CHECK(b.vertices[2].y == doctest::Approx(42.0));
  CHECK(b.vertices[3].x == doctest::Approx(38.0));
  CHECK(b.vertices[3].y == doctest::Approx(42.0));
}

TEST_CASE("decode_rbox rotated against standalone rotation oracle") {
  const Geometry5 g{3.0, 7.0, 5.0, 2.0, 0.3};
  const Point2 pixel{12.0, 9.0};
  const int stride = 4;
  const Quad q = decode_rbox(pixel, g, stride);

  const double c = std::cos(0.3);
  const double s = std::sin(0.3);
  const double px = pixel.x * stride;
  const double py = pixel.y * stride;
  const double corners[4][2] = {{-g.d_left, -g.d_top},
                                {g.d_right, -g.d_top},
                                {g.d_right, g.d_bottom},
                                {-g.d_left, g.d_bottom}};
  for (int i = 0; i < 4; ++i) {
    const double ex = px + c * corners[i][0] - s * corners[i][1];
    const double ey = py + s * corners[i][0] + c * corners[i][1];
    CHECK(std::abs(q.vertices[i].x - ex) < 1e-9);
    CHECK(std::abs(q.vertices[i].y - ey) < 1e-9);
  }
}

TEST_CASE("decode_rbox round trip recovers distances") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.5, 40.0);
  std::uniform_real_distribution<double> angle(-0.78, 0.78);
  std::uniform_real_distribution<double> pix(1.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const Geometry5 g{d(rng), d(rng), d(rng), d(rng), angle(rng)};
    const Point2 pixel{pix(rng), pix(rng)};
    const Quad q = decode_rbox(pixel, g, 4);
    const RotatedRect rect = min_area_rect(q);
    const Geometry5 back = geometry_at(rect, {pixel.x * 4, pixel.y * 4});
    CHECK(std::abs(back.d_top - g.d_top) < 1e-6);
    CHECK(std::abs(back.d_right - g.d_right) < 1e-6);
    CHECK(std::abs(back.d_bottom - g.d_bottom) < 1e-6);
    CHECK(std::abs(back.d_left - g.d_left) < 1e-6);
  }
}

TEST_CASE("canonical_rect folds angles into range") {
  const RotatedRect r = canonical_rect({0, 0}, 10.0, 4.0, 1.6707963267948966);
  CHECK(r.theta == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(r.width == doctest::Approx(4.0));
  CHECK(r.height == doctest::Approx(10.0));
}

TEST_CASE("rotated rect to quad and back is identity") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const RotatedRect in = random_rect(rng);
    const Quad q = to_quad(in);
    const Quad q2 = to_quad(min_area_rect(q));
    for (int v = 0; v < 4; ++v) {
      CHECK(std::abs(q.vertices[v].x - q2.vertices[v].x) < 2e-7);
      CHECK(std::abs(q.vertices[v].y - q2.vertices[v].y) < 2e-7);
    }
  }
}
