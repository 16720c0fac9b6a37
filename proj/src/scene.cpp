// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/scene.hpp"

#include <algorithm>
#include <cmath>

#include "mostgeo/pipeline.hpp"

namespace mostgeo {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Feature pixels whose image point falls inside the polygon.
int count_inside_pixels(const Quad& poly, int stride, int gw, int gh) {
  const auto [lo, hi] = bounding_box(poly);
  const int x0 = std::max(0, static_cast<int>(std::floor(lo.x / stride)));
  const int x1 = std::min(gw - 1, static_cast<int>(std::ceil(hi.x / stride)));
  const int y0 = std::max(0, static_cast<int>(std::floor(lo.y / stride)));
  const int y1 = std::min(gh - 1, static_cast<int>(std::ceil(hi.y / stride)));
  int count = 0;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Point2 img{static_cast<double>(x) * stride, static_cast<double>(y) * stride};
      if (point_in_quad(img, poly)) ++count;
    }
  }
  return count;
}

bool inside_image(const Quad& q, double w, double h, double border) {
  const auto [lo, hi] = bounding_box(q);
  return lo.x >= border && lo.y >= border && hi.x <= w - border && hi.y <= h - border;
}

}  // namespace

std::vector<TextInstance> make_scene(std::mt19937_64& rng, const SceneParams& params) {
  std::uniform_int_distribution<int> count_dist(params.min_instances, params.max_instances);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int target = count_dist(rng);
  const int gw = params.image_w / params.stride;
  const int gh = params.image_h / params.stride;

  std::vector<TextInstance> instances;
  std::vector<Quad> dilated;
  for (int n = 0; n < target; ++n) {
    const double min_aspect =
        n == 0 && params.force_min_aspect_first > 0.0
            ? std::max(params.min_aspect, params.force_min_aspect_first)
            : params.min_aspect;
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const double h = params.min_height + unit(rng) * (params.max_height - params.min_height);
      const double aspect = min_aspect + unit(rng) * (params.max_aspect - min_aspect);
      const double w = std::min(aspect * h, params.image_w - 2.0 * params.margin - 8.0);
      const double theta = (unit(rng) - 0.5) * (kPi / 2.0 - 0.04);
      const double cx = params.margin + w / 2.0 +
                        unit(rng) * std::max(1.0, params.image_w - w - 2.0 * params.margin);
      const double cy = params.margin + h / 2.0 +
                        unit(rng) * std::max(1.0, params.image_h - h - 2.0 * params.margin);

      const RotatedRect rect = canonical_rect({cx, cy}, w, h, theta);
      const Quad quad = to_quad(rect);
      if (!inside_image(quad, params.image_w, params.image_h, 4.0)) continue;

      const Quad grown = to_quad(canonical_rect(rect.center, rect.width + 2.0 * params.margin,
                                                rect.height + 2.0 * params.margin, rect.theta));
      bool overlaps = false;
      for (const Quad& other : dilated) {
        if (quad_intersection_area(grown, other) > 0.0) {
          overlaps = true;
          break;
        }
      }
      if (overlaps) continue;

      const auto shrunk = shrink_quad(quad, params.shrink_ratio);
      if (!shrunk || count_inside_pixels(*shrunk, params.stride, gw, gh) < 2) continue;

      instances.push_back(TextInstance{quad, false});
      dilated.push_back(grown);
      placed = true;
    }
    if (!placed && n == 0) continue;  // keep trying for a non-empty scene
  }

  // Never return an empty scene; retry with a perturbed stream.
  if (instances.empty()) return make_scene(rng, params);
  return instances;
}

std::vector<QuadBox> synthesize_candidates(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SceneParams params;
  params.image_w = 1024;
  params.image_h = 1024;
  params.min_instances = 6;
  params.max_instances = 12;
  params.force_min_aspect_first = 8.0;

  std::vector<QuadBox> candidates;
  std::uint64_t scene_index = 0;
  while (candidates.size() < count) {
    const std::vector<TextInstance> scene = make_scene(rng, params);
    NoiseModel noise;
    noise.sigma0 = 0.5;
    noise.sigma1 = 0.02;
    noise.seed = seed ^ (0x9e3779b97f4a7c15ULL * ++scene_index);
    const PredictionMaps maps =
        render_oracle_maps(scene, params.image_h, params.image_w, params.stride, noise);
    const std::vector<QuadBox> decoded = decode_maps(maps, 0.8);
    candidates.insert(candidates.end(), decoded.begin(), decoded.end());
  }
  candidates.resize(count);
  return candidates;
}

}  // namespace mostgeo
