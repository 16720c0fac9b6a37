// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mostgeo/geometry.hpp"
#include "mostgeo/grid.hpp"
#include "mostgeo/labelgen.hpp"
#include "mostgeo/nms.hpp"

namespace mostgeo {

/// Dense per-pixel predictions at 1/stride resolution. geometry_refined is
/// optional; decoding falls back to the coarse grid when it is absent.
struct PredictionMaps {
  Grid<double> score;
  Grid<Geometry5> geometry_coarse;
  std::optional<Grid<Geometry5>> geometry_refined;
  Grid<SideValues> possens;
  int stride = 4;

  const Grid<Geometry5>& refined_or_coarse() const {
    return geometry_refined ? *geometry_refined : geometry_coarse;
  }
};

/// Synthetic prediction-error model: each regressed distance d picks up
/// Gaussian noise with standard deviation sigma0 + sigma1 * d, so error
/// grows with the distance to the boundary; the angle picks up
/// angle_sigma. Fully determined by seed.
struct NoiseModel {
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  double angle_sigma = 0.0;
  std::uint64_t seed = 0;
};

enum class NmsVariant { kStandard, kLocality, kPositionAware };

/// Detection metrics at one IoU threshold.
struct EvalResult {
  double iou_threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double fmeasure = 0.0;
  double mean_matched_iou = 0.0;
  int matches = 0;
  int num_detections = 0;
  int num_ground_truth = 0;
};

/// One candidate per pixel with score >= score_thresh, in row-major pixel
/// order, carrying that pixel's score and position-sensitive values.
std::vector<QuadBox> decode_maps(const PredictionMaps& maps, double score_thresh);

/// decode_maps followed by the selected NMS.
std::vector<QuadBox> detect(const PredictionMaps& maps, const NmsParams& params,
                            NmsVariant variant);

/// Ground-truth maps with the noise model applied to the geometry channel;
/// score and position-sensitive maps are rendered exactly. Zero sigmas
/// reproduce generate_maps bit for bit.
PredictionMaps render_oracle_maps(const std::vector<TextInstance>& instances, int image_h,
                                  int image_w, int stride, const NoiseModel& noise,
                                  double shrink_ratio = 0.3, PosSensParams psp = {});

/// Greedy score-ordered one-to-one matching per threshold. Detections
/// covered more than half by a dont-care region are discarded first.
std::vector<EvalResult> evaluate(const std::vector<QuadBox>& detections,
                                 const std::vector<TextInstance>& gts,
                                 const std::vector<double>& iou_thresholds);

/// Indices of the ground-truth instance matched per detection at one
/// threshold: -1 unmatched, -2 discarded by dont-care overlap. Detections
/// are visited in descending score order.
std::vector<int> match_detections(const std::vector<QuadBox>& detections,
                                  const std::vector<TextInstance>& gts, double iou_threshold);

/// Deterministic standard-normal stream (Box-Muller over mt19937_64), so
/// rendered noise is reproducible across platforms.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
  double next();

 private:
  double uniform01();
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mostgeo
