// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <vector>

namespace mostgeo {

/// Point in image coordinates: x grows right, y grows down.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2 operator+(const Point2& p) const { return {x + p.x, y + p.y}; }
  Point2 operator-(const Point2& p) const { return {x - p.x, y - p.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  Point2 operator/(double s) const { return {x / s, y / s}; }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return dot(a, a); }

/// Rotate by theta with the image-coordinate rotation matrix
/// [[cos, -sin], [sin, cos]].
Point2 rotate(const Point2& v, double theta);

/// Oriented quadrilateral. Vertices ordered top-left, top-right,
/// bottom-right, bottom-left; clockwise in image coordinates (positive
/// shoelace sum with y pointing down).
struct Quad {
  std::array<Point2, 4> vertices;
};

/// Rotated rectangle with canonical angle in [-pi/4, pi/4). Build through
/// canonical_rect so the angle range invariant holds.
struct RotatedRect {
  Point2 center;
  double width = 0.0;
  double height = 0.0;
  double theta = 0.0;
};

/// Per-pixel box geometry: distances to the four sides of the enclosing
/// rotated rectangle plus its rotation angle.
struct Geometry5 {
  double d_top = 0.0;
  double d_right = 0.0;
  double d_bottom = 0.0;
  double d_left = 0.0;
  double theta = 0.0;
};

/// Values attached to the four box sides, in left/right/top/bottom order.
struct SideValues {
  double left = 0.0;
  double right = 0.0;
  double top = 0.0;
  double bottom = 0.0;
};

using Polygon = std::vector<Point2>;

/// Signed shoelace area; positive for clockwise order in image coordinates.
double signed_area(std::span<const Point2> poly);
double signed_area(const Quad& q);

/// Absolute polygon area. Degenerate inputs give 0.
double polygon_area(std::span<const Point2> poly);
double quad_area(const Quad& q);

bool is_convex(const Quad& q);

/// Sutherland-Hodgman intersection of two convex quads; at most 8 vertices.
/// Throws std::invalid_argument("non-convex polygon") if either input is
/// not convex. Empty result means disjoint.
Polygon polygon_clip(const Quad& subject, const Quad& clip);

/// Intersection area of two simple quads. Convex pairs go through
/// polygon_clip; concave ones are split into triangles first.
double quad_intersection_area(const Quad& a, const Quad& b);

/// area(a n b) / area(a u b); 0 when both areas are 0.
double quad_iou(const Quad& a, const Quad& b);

/// Fold (width, height, theta) into the canonical representation with
/// theta in [-pi/4, pi/4), swapping width/height as needed.
RotatedRect canonical_rect(Point2 center, double width, double height, double theta);

/// Smallest-area enclosing rotated rectangle (rotating calipers over the
/// convex hull). Throws std::invalid_argument("degenerate quadrangle")
/// when the quad has no area.
RotatedRect min_area_rect(const Quad& q);

Quad to_quad(const RotatedRect& rect);

/// Rect-local coordinates of an image point: R(-theta) * (p - center).
Point2 to_local(const RotatedRect& rect, const Point2& p);

/// Distances from an interior image point to the four rect sides plus the
/// rect angle. Slightly-outside points clamp to distance 0.
Geometry5 geometry_at(const RotatedRect& rect, const Point2& image_point);

/// Decode an RBOX prediction at a feature-map pixel into an image-space
/// quad: image point P = stride * pixel, vertices P + R(theta) * v with
/// v1 = (-d_left, -d_top), v2 = (d_right, -d_top), v3 = (d_right, d_bottom),
/// v4 = (-d_left, d_bottom).
Quad decode_rbox(const Point2& pixel, const Geometry5& g, int stride);

/// Winding-number point-in-polygon test; boundary points count as inside.
bool point_in_polygon(const Point2& p, std::span<const Point2> poly);
bool point_in_quad(const Point2& p, const Quad& q);

/// Axis-aligned bounds, as {min, max} corners.
std::pair<Point2, Point2> bounding_box(std::span<const Point2> poly);
std::pair<Point2, Point2> bounding_box(const Quad& q);

}  // namespace mostgeo
