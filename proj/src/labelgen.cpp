// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/labelgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mostgeo {

namespace {

// Move vertex i towards vertex j by dist along their connecting edge.
void move_along(std::array<Point2, 4>& v, int i, int j, double dist) {
  const Point2 e = v[j] - v[i];
  const double len = std::sqrt(norm(e));
  if (len <= 0.0) return;
  v[i] = v[i] + e * (dist / len);
}

void shrink_edge_pair(std::array<Point2, 4>& v, const std::array<double, 4>& r, double ratio,
                      int a, int b, int c, int d) {
  // edge (a, b) and edge (c, d); endpoints slide towards each other
  move_along(v, a, b, ratio * r[a]);
  move_along(v, b, a, ratio * r[b]);
  move_along(v, c, d, ratio * r[c]);
  move_along(v, d, c, ratio * r[d]);
}

struct PixelClaim {
  double area = std::numeric_limits<double>::infinity();
  std::int32_t owner = 0;
};

}  // namespace

std::optional<Quad> shrink_quad(const Quad& q, double ratio) {
  if (ratio < 0.0 || ratio >= 0.5) throw std::invalid_argument("shrink ratio must be in [0, 0.5)");
  if (ratio == 0.0) return q;

  std::array<double, 4> edge_len;
  for (int i = 0; i < 4; ++i) {
    edge_len[i] = std::sqrt(norm(q.vertices[(i + 1) % 4] - q.vertices[i]));
  }
  std::array<double, 4> r;
  for (int i = 0; i < 4; ++i) {
    r[i] = std::min(edge_len[i], edge_len[(i + 3) % 4]);
  }

  std::array<Point2, 4> v = q.vertices;
  if (edge_len[0] + edge_len[2] > edge_len[1] + edge_len[3]) {
    shrink_edge_pair(v, r, ratio, 0, 1, 3, 2);  // top and bottom edges first
    shrink_edge_pair(v, r, ratio, 0, 3, 1, 2);
  } else {
    shrink_edge_pair(v, r, ratio, 0, 3, 1, 2);  // left and right edges first
    shrink_edge_pair(v, r, ratio, 0, 1, 3, 2);
  }

  Quad out{v};
  if (signed_area(out) <= 0.0) return std::nullopt;
  return out;
}

double position_sensitive_value(double dist, double min_dist, double max_dist, double alpha) {
  const double span = max_dist - min_dist;
  if (span <= 0.0) return 1.0;
  const double d_f = alpha * span + min_dist;
  if (dist >= d_f) return 0.0;
  return 1.0 - (dist - min_dist) / (d_f - min_dist);
}

double position_sensitive_value(double dist, std::span<const double> dists_all, double alpha) {
  if (dists_all.empty()) throw std::invalid_argument("empty distance set");
  const auto [lo, hi] = std::minmax_element(dists_all.begin(), dists_all.end());
  return position_sensitive_value(dist, *lo, *hi, alpha);
}

LabelMaps generate_maps(const std::vector<TextInstance>& instances, int image_h, int image_w,
                        int stride, double shrink_ratio, PosSensParams psp) {
  if (stride <= 0) throw std::invalid_argument("stride must be positive");
  if (image_h % stride != 0 || image_w % stride != 0) {
    throw std::invalid_argument("image size must be divisible by stride");
  }
  if (psp.alpha <= 0.0 || psp.alpha > 1.0) throw std::invalid_argument("alpha must be in (0, 1]");

  const int gh = image_h / stride;
  const int gw = image_w / stride;
  LabelMaps maps;
  maps.score = Grid<double>(gh, gw, 0.0);
  maps.geometry = Grid<Geometry5>(gh, gw);
  maps.possens = Grid<SideValues>(gh, gw);
  maps.train_mask = Grid<double>(gh, gw, 1.0);
  maps.instance_id = Grid<std::int32_t>(gh, gw, 0);

  // Feature pixels whose image point lies inside the polygon, restricted
  // to its bounding box.
  auto pixels_inside = [&](const Quad& poly, auto&& fn) {
    const auto [lo, hi] = bounding_box(poly);
    const int x0 = std::max(0, static_cast<int>(std::floor(lo.x / stride)));
    const int x1 = std::min(gw - 1, static_cast<int>(std::ceil(hi.x / stride)));
    const int y0 = std::max(0, static_cast<int>(std::floor(lo.y / stride)));
    const int y1 = std::min(gh - 1, static_cast<int>(std::ceil(hi.y / stride)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const Point2 img{static_cast<double>(x) * stride, static_cast<double>(y) * stride};
        if (point_in_quad(img, poly)) fn(y, x);
      }
    }
  };

  for (const TextInstance& inst : instances) {
    if (inst.dont_care) {
      pixels_inside(inst.quad, [&](int y, int x) { maps.train_mask.at(y, x) = 0.0; });
    }
  }

  // Resolve pixel ownership first: the instance with the smaller quad area
  // keeps contested pixels, earlier instances win exact ties.
  Grid<PixelClaim> claims(gh, gw);
  std::vector<std::optional<Quad>> shrunk(instances.size());
  for (std::size_t j = 0; j < instances.size(); ++j) {
    const TextInstance& inst = instances[j];
    if (inst.dont_care) continue;
    shrunk[j] = shrink_quad(inst.quad, shrink_ratio);
    if (!shrunk[j]) continue;
    const double area = quad_area(inst.quad);
    pixels_inside(*shrunk[j], [&](int y, int x) {
      PixelClaim& claim = claims.at(y, x);
      if (area < claim.area) {
        claim.area = area;
        claim.owner = static_cast<std::int32_t>(j + 1);
      }
    });
  }

  std::vector<std::vector<std::pair<int, int>>> owned(instances.size() + 1);
  for (int y = 0; y < gh; ++y) {
    for (int x = 0; x < gw; ++x) {
      const std::int32_t owner = claims.at(y, x).owner;
      if (owner > 0) owned[owner].emplace_back(y, x);
    }
  }

  for (std::size_t j = 0; j < instances.size(); ++j) {
    const TextInstance& inst = instances[j];
    if (inst.dont_care) continue;
    const auto& positives = owned[j + 1];
    if (positives.empty()) {
      ++maps.skipped_instances;
      continue;
    }

    const RotatedRect rect = min_area_rect(inst.quad);
    std::vector<Geometry5> geoms;
    geoms.reserve(positives.size());
    SideValues dmin{1e300, 1e300, 1e300, 1e300};
    SideValues dmax{-1e300, -1e300, -1e300, -1e300};
    for (const auto& [y, x] : positives) {
      const Point2 img{static_cast<double>(x) * stride, static_cast<double>(y) * stride};
      const Geometry5 g = geometry_at(rect, img);
      geoms.push_back(g);
      dmin.left = std::min(dmin.left, g.d_left);
      dmax.left = std::max(dmax.left, g.d_left);
      dmin.right = std::min(dmin.right, g.d_right);
      dmax.right = std::max(dmax.right, g.d_right);
      dmin.top = std::min(dmin.top, g.d_top);
      dmax.top = std::max(dmax.top, g.d_top);
      dmin.bottom = std::min(dmin.bottom, g.d_bottom);
      dmax.bottom = std::max(dmax.bottom, g.d_bottom);
    }

    for (std::size_t k = 0; k < positives.size(); ++k) {
      const auto [y, x] = positives[k];
      const Geometry5& g = geoms[k];
      maps.score.at(y, x) = 1.0;
      maps.train_mask.at(y, x) = 1.0;
      maps.instance_id.at(y, x) = static_cast<std::int32_t>(j + 1);
      maps.geometry.at(y, x) = g;
      SideValues& ps = maps.possens.at(y, x);
      ps.left = position_sensitive_value(g.d_left, dmin.left, dmax.left, psp.alpha);
      ps.right = position_sensitive_value(g.d_right, dmin.right, dmax.right, psp.alpha);
      ps.top = position_sensitive_value(g.d_top, dmin.top, dmax.top, psp.alpha);
      ps.bottom = position_sensitive_value(g.d_bottom, dmin.bottom, dmax.bottom, psp.alpha);
    }
  }

  return maps;
}

}  // namespace mostgeo
