// SPDX-License-Identifier: Apache-2.0
// Test-only reference implementations, kept independent of the library
// code paths they are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mostgeo/geometry.hpp"

namespace mostgeo::testing {

// Pixel-center scanline rasterization on a res x res grid spanning the
// joint bounding box. Counts centers inside each polygon (even-odd rule
// from raw edge crossings) and centers inside both.
class Rasterizer {
 public:
  Rasterizer(const Quad& a, const Quad& b, int res) : res_(res) {
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    for (const Quad* q : {&a, &b}) {
      for (const Point2& p : q->vertices) {
        minx = std::min(minx, p.x);
        miny = std::min(miny, p.y);
        maxx = std::max(maxx, p.x);
        maxy = std::max(maxy, p.y);
      }
    }
    minx_ = minx - 1e-6;
    miny_ = miny - 1e-6;
    dx_ = (maxx - minx + 2e-6) / res;
    dy_ = (maxy - miny + 2e-6) / res;

    for (int r = 0; r < res_; ++r) {
      const double y = miny_ + (r + 0.5) * dy_;
      auto ia = row_intervals(a, y);
      auto ib = row_intervals(b, y);
      count_a_ += centers_in(ia);
      count_b_ += centers_in(ib);
      std::vector<std::pair<double, double>> inter;
      for (const auto& [a0, a1] : ia) {
        for (const auto& [b0, b1] : ib) {
          const double lo = std::max(a0, b0);
          const double hi = std::min(a1, b1);
          if (lo < hi) inter.emplace_back(lo, hi);
        }
      }
      count_inter_ += centers_in(inter);
    }
  }

  double iou() const {
    const long long uni = count_a_ + count_b_ - count_inter_;
    return uni > 0 ? static_cast<double>(count_inter_) / static_cast<double>(uni) : 0.0;
  }
  long long pixels_a() const { return count_a_; }
  long long pixels_inter() const { return count_inter_; }
  double pixel_area() const { return dx_ * dy_; }

 private:
  std::vector<std::pair<double, double>> row_intervals(const Quad& q, double y) const {
    std::vector<double> xs;
    for (int i = 0; i < 4; ++i) {
      const Point2& p = q.vertices[i];
      const Point2& n = q.vertices[(i + 1) % 4];
      const double ylo = std::min(p.y, n.y);
      const double yhi = std::max(p.y, n.y);
      if (y < ylo || y >= yhi) continue;  // half-open to avoid double counting vertices
      xs.push_back(p.x + (y - p.y) * (n.x - p.x) / (n.y - p.y));
    }
    std::sort(xs.begin(), xs.end());
    std::vector<std::pair<double, double>> intervals;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) intervals.emplace_back(xs[i], xs[i + 1]);
    return intervals;
  }

  long long centers_in(const std::vector<std::pair<double, double>>& intervals) const {
    long long count = 0;
    for (const auto& [x0, x1] : intervals) {
      const long long lo =
          std::max<long long>(0, static_cast<long long>(std::ceil((x0 - minx_) / dx_ - 0.5)));
      const long long hi = std::min<long long>(
          res_ - 1, static_cast<long long>(std::ceil((x1 - minx_) / dx_ - 0.5)) - 1);
      if (hi >= lo) count += hi - lo + 1;
    }
    return count;
  }

  int res_;
  double minx_ = 0, miny_ = 0, dx_ = 1, dy_ = 1;
  long long count_a_ = 0, count_b_ = 0, count_inter_ = 0;
};

inline double rasterized_iou(const Quad& a, const Quad& b, int res = 1000) {
  return Rasterizer(a, b, res).iou();
}

inline RotatedRect random_rect(std::mt19937_64& rng, double max_center = 200.0,
                               double min_side = 2.0, double max_side = 60.0,
                               double theta_margin = 1e-4) {
  std::uniform_real_distribution<double> c(-max_center, max_center);
  std::uniform_real_distribution<double> side(min_side, max_side);
  constexpr double kQuarterPi = 0.78539816339744831;
  std::uniform_real_distribution<double> angle(-kQuarterPi + theta_margin,
                                               kQuarterPi - theta_margin);
  double w = side(rng);
  double h = side(rng);
  // keep the rectangle clearly non-square so the canonical angle is unique
  if (std::abs(w - h) < 0.1 * std::max(w, h)) w *= 1.25;
  return RotatedRect{{c(rng), c(rng)}, std::max(w, h), std::min(w, h), angle(rng)};
}

inline Quad random_rect_quad(std::mt19937_64& rng, double max_center = 200.0) {
  return to_quad(random_rect(rng, max_center));
}

// Convex quad: a rotated rectangle with vertices nudged inward/outward
// while convexity holds.
inline Quad random_convex_quad(std::mt19937_64& rng, double max_center = 200.0) {
  std::uniform_real_distribution<double> jitter(-0.08, 0.08);
  for (;;) {
    Quad q = random_rect_quad(rng, max_center);
    const Point2 center =
        (q.vertices[0] + q.vertices[1] + q.vertices[2] + q.vertices[3]) / 4.0;
    for (Point2& v : q.vertices) v = v + (v - center) * jitter(rng);
    if (is_convex(q) && signed_area(q) > 1.0) return q;
  }
}

}  // namespace mostgeo::testing
