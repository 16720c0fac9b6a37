// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mostgeo {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Cross product of (a - o) and (b - o).
double cross3(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double extent_of(std::span<const Point2> pts) {
  double m = 1.0;
  for (const Point2& p : pts) m = std::max({m, std::abs(p.x), std::abs(p.y)});
  return m;
}

// Vertices as a positively-oriented (clockwise in image coords) polygon.
Polygon oriented(const Quad& q) {
  Polygon out(q.vertices.begin(), q.vertices.end());
  if (signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

// Sutherland-Hodgman: clip a positively-oriented subject polygon against
// one edge (a -> b) of a positively-oriented convex clip polygon.
Polygon clip_edge(const Polygon& subject, const Point2& a, const Point2& b, double eps) {
  Polygon out;
  const std::size_t n = subject.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& cur = subject[i];
    const Point2& prev = subject[(i + n - 1) % n];
    const double dc = cross3(a, b, cur);
    const double dp = cross3(a, b, prev);
    const bool cur_in = dc >= -eps;
    const bool prev_in = dp >= -eps;
    if (cur_in != prev_in) {
      const double t = dp / (dp - dc);
      out.push_back(prev + (cur - prev) * t);
    }
    if (cur_in) out.push_back(cur);
  }
  return out;
}

Polygon dedup(Polygon poly, double eps) {
  Polygon out;
  out.reserve(poly.size());
  for (const Point2& p : poly) {
    if (out.empty() || std::abs(p.x - out.back().x) > eps || std::abs(p.y - out.back().y) > eps) {
      out.push_back(p);
    }
  }
  while (out.size() > 1 && std::abs(out.front().x - out.back().x) <= eps &&
         std::abs(out.front().y - out.back().y) <= eps) {
    out.pop_back();
  }
  if (out.size() < 3) out.clear();
  return out;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip, double scale) {
  const double eps = 1e-12 * scale * scale;
  Polygon result = subject;
  const std::size_t n = clip.size();
  for (std::size_t i = 0; i < n && !result.empty(); ++i) {
    result = clip_edge(result, clip[i], clip[(i + 1) % n], eps);
  }
  return dedup(std::move(result), 1e-9 * scale);
}

// Split a simple, positively-oriented quad into two triangles along the
// diagonal from its reflex vertex (any diagonal works for convex quads).
std::array<Polygon, 2> triangulate(const Quad& q, double scale) {
  Polygon v = oriented(q);
  const double eps = 1e-12 * scale * scale;
  int reflex = 0;
  for (int i = 0; i < 4; ++i) {
    if (cross3(v[i == 0 ? 3 : i - 1], v[i], v[(i + 1) % 4]) < -eps) {
      reflex = i;
      break;
    }
  }
  auto tri = [&](int i, int j, int k) { return Polygon{v[i], v[j], v[k]}; };
  const int r = reflex;
  return {tri(r, (r + 1) % 4, (r + 2) % 4), tri(r, (r + 2) % 4, (r + 3) % 4)};
}

bool on_segment(const Point2& p, const Point2& a, const Point2& b, double eps) {
  if (std::abs(cross3(a, b, p)) > eps) return false;
  return p.x >= std::min(a.x, b.x) - eps && p.x <= std::max(a.x, b.x) + eps &&
         p.y >= std::min(a.y, b.y) - eps && p.y <= std::max(a.y, b.y) + eps;
}

}  // namespace

Point2 rotate(const Point2& v, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double signed_area(std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

double signed_area(const Quad& q) {
  return signed_area(std::span<const Point2>(q.vertices.data(), 4));
}

double polygon_area(std::span<const Point2> poly) { return std::abs(signed_area(poly)); }

double quad_area(const Quad& q) { return std::abs(signed_area(q)); }

bool is_convex(const Quad& q) {
  const double scale = extent_of(q.vertices);
  const double eps = 1e-12 * scale * scale;
  int pos = 0;
  int neg = 0;
  for (int i = 0; i < 4; ++i) {
    const double c = cross3(q.vertices[i], q.vertices[(i + 1) % 4], q.vertices[(i + 2) % 4]);
    if (c > eps) ++pos;
    if (c < -eps) ++neg;
  }
  return pos == 0 || neg == 0;
}

Polygon polygon_clip(const Quad& subject, const Quad& clip) {
  if (!is_convex(subject) || !is_convex(clip)) {
    throw std::invalid_argument("non-convex polygon");
  }
  double scale = std::max(extent_of(subject.vertices), extent_of(clip.vertices));
  return clip_convex(oriented(subject), oriented(clip), scale);
}

double quad_intersection_area(const Quad& a, const Quad& b) {
  const double scale = std::max(extent_of(a.vertices), extent_of(b.vertices));
  if (is_convex(a) && is_convex(b)) {
    return polygon_area(clip_convex(oriented(a), oriented(b), scale));
  }
  double sum = 0.0;
  for (const Polygon& ta : triangulate(a, scale)) {
    if (polygon_area(ta) <= 0.0) continue;
    for (const Polygon& tb : triangulate(b, scale)) {
      if (polygon_area(tb) <= 0.0) continue;
      sum += polygon_area(clip_convex(ta, tb, scale));
    }
  }
  return sum;
}

double quad_iou(const Quad& a, const Quad& b) {
  const double area_a = quad_area(a);
  const double area_b = quad_area(b);
  if (area_a <= 0.0 && area_b <= 0.0) return 0.0;
  const double inter = quad_intersection_area(a, b);
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

RotatedRect canonical_rect(Point2 center, double width, double height, double theta) {
  double t = std::fmod(theta, kPi);
  if (t >= kPi / 2.0) t -= kPi;
  if (t < -kPi / 2.0) t += kPi;
  if (t >= kPi / 4.0) {
    t -= kPi / 2.0;
    std::swap(width, height);
  } else if (t < -kPi / 4.0) {
    t += kPi / 2.0;
    std::swap(width, height);
  }
  return RotatedRect{center, width, height, t};
}

RotatedRect min_area_rect(const Quad& q) {
  if (quad_area(q) <= 0.0) throw std::invalid_argument("degenerate quadrangle");

  // Monotone-chain convex hull of the four vertices.
  std::vector<Point2> pts(q.vertices.begin(), q.vertices.end());
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Point2> hull;
  auto build = [&](auto begin, auto end) {
    const std::size_t base = hull.size();
    for (auto it = begin; it != end; ++it) {
      while (hull.size() >= base + 2 &&
             cross3(hull[hull.size() - 2], hull[hull.size() - 1], *it) <= 0.0) {
        hull.pop_back();
      }
      hull.push_back(*it);
    }
    hull.pop_back();
  };
  build(pts.begin(), pts.end());
  build(pts.rbegin(), pts.rend());
  if (hull.size() < 3) throw std::invalid_argument("degenerate quadrangle");

  double best_area = std::numeric_limits<double>::infinity();
  RotatedRect best{};
  const std::size_t n = hull.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = hull[i];
    const Point2 e = hull[(i + 1) % n] - a;
    const double len = std::sqrt(norm(e));
    if (len <= 0.0) continue;
    const Point2 u = e / len;
    const Point2 v{-u.y, u.x};
    double smin = 0.0, smax = 0.0, tmin = 0.0, tmax = 0.0;
    for (const Point2& p : hull) {
      const Point2 d = p - a;
      const double s = dot(d, u);
      const double t = dot(d, v);
      smin = std::min(smin, s);
      smax = std::max(smax, s);
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
    }
    const double area = (smax - smin) * (tmax - tmin);
    if (area < best_area) {
      best_area = area;
      const Point2 center = a + u * ((smin + smax) / 2.0) + v * ((tmin + tmax) / 2.0);
      best = canonical_rect(center, smax - smin, tmax - tmin, std::atan2(u.y, u.x));
    }
  }
  return best;
}

Quad to_quad(const RotatedRect& rect) {
  const double hw = rect.width / 2.0;
  const double hh = rect.height / 2.0;
  Quad q;
  q.vertices[0] = rect.center + rotate({-hw, -hh}, rect.theta);
  q.vertices[1] = rect.center + rotate({hw, -hh}, rect.theta);
  q.vertices[2] = rect.center + rotate({hw, hh}, rect.theta);
  q.vertices[3] = rect.center + rotate({-hw, hh}, rect.theta);
  return q;
}

Point2 to_local(const RotatedRect& rect, const Point2& p) {
  return rotate(p - rect.center, -rect.theta);
}

Geometry5 geometry_at(const RotatedRect& rect, const Point2& image_point) {
  const Point2 u = to_local(rect, image_point);
  const double hw = rect.width / 2.0;
  const double hh = rect.height / 2.0;
  Geometry5 g;
  g.d_top = std::max(0.0, u.y + hh);
  g.d_bottom = std::max(0.0, hh - u.y);
  g.d_left = std::max(0.0, u.x + hw);
  g.d_right = std::max(0.0, hw - u.x);
  g.theta = rect.theta;
  return g;
}

Quad decode_rbox(const Point2& pixel, const Geometry5& g, int stride) {
  const Point2 p{pixel.x * stride, pixel.y * stride};
  Quad q;
  q.vertices[0] = p + rotate({-g.d_left, -g.d_top}, g.theta);
  q.vertices[1] = p + rotate({g.d_right, -g.d_top}, g.theta);
  q.vertices[2] = p + rotate({g.d_right, g.d_bottom}, g.theta);
  q.vertices[3] = p + rotate({-g.d_left, g.d_bottom}, g.theta);
  return q;
}

bool point_in_polygon(const Point2& p, std::span<const Point2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  const double eps = 1e-9 * extent_of(poly);
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    if (on_segment(p, a, b, eps)) return true;
    if (a.y <= p.y) {
      if (b.y > p.y && cross3(a, b, p) > 0.0) ++winding;
    } else {
      if (b.y <= p.y && cross3(a, b, p) < 0.0) --winding;
    }
  }
  return winding != 0;
}

bool point_in_quad(const Point2& p, const Quad& q) {
  return point_in_polygon(p, std::span<const Point2>(q.vertices.data(), 4));
}

std::pair<Point2, Point2> bounding_box(std::span<const Point2> poly) {
  Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point2& p : poly) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  return {lo, hi};
}

std::pair<Point2, Point2> bounding_box(const Quad& q) {
  return bounding_box(std::span<const Point2>(q.vertices.data(), 4));
}

}  // namespace mostgeo
