// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mostgeo/labelgen.hpp"
#include "mostgeo/nms.hpp"

namespace mostgeo {

/// Random-scene generator settings for synthetic validation and
/// benchmarking. Instances are rotated rectangles that do not overlap
/// (separated by margin pixels) and always keep at least one positive
/// pixel after shrinking.
struct SceneParams {
  int image_w = 512;
  int image_h = 512;
  int stride = 4;
  int min_instances = 1;
  int max_instances = 8;
  double min_aspect = 1.0;
  double max_aspect = 20.0;
  double min_height = 14.0;
  double max_height = 40.0;
  double margin = 12.0;
  double shrink_ratio = 0.3;
  // Force the first instance to have at least this aspect ratio (0 = off).
  double force_min_aspect_first = 0.0;
};

std::vector<TextInstance> make_scene(std::mt19937_64& rng, const SceneParams& params);

/// Row-major candidate boxes from oracle maps over as many random scenes
/// as needed to reach at least `count` candidates, truncated to exactly
/// `count`. Used by the NMS benchmark.
std::vector<QuadBox> synthesize_candidates(std::size_t count, std::uint64_t seed);

}  // namespace mostgeo
