// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "mostgeo/losses.hpp"

namespace mostgeo {

namespace {

// Synthetic loss inputs on a small grid: three instances of positives with
// well-separated predictions so every sampled coordinate is differentiable
// (no min() ties, no smoothed-L1 kinks, no OHEM boundary flips).
struct LossConfig {
  Grid<double> positives;
  Grid<std::int32_t> instance_id;
  Grid<Geometry5> gt_geo;
  Grid<Geometry5> pred_geo;
  Grid<Geometry5> pred_geo_refined;
  Grid<SideValues> gt_possens;
  Grid<SideValues> pred_possens;
  Grid<double> pred_score;
  Grid<double> train_mask;
  LabelMaps labels;
  std::vector<std::size_t> positive_indices;
  std::vector<std::size_t> safe_score_indices;  // away from the OHEM boundary
};

constexpr int kGridSide = 10;

double away_from(std::mt19937_64& rng, std::uniform_real_distribution<double>& dist, double avoid,
                 double min_gap) {
  for (;;) {
    const double v = dist(rng);
    if (std::abs(v - avoid) >= min_gap) return v;
  }
}

LossConfig make_config(std::mt19937_64& rng) {
  LossConfig cfg;
  const int side = kGridSide;
  cfg.positives = Grid<double>(side, side, 0.0);
  cfg.instance_id = Grid<std::int32_t>(side, side, 0);
  cfg.gt_geo = Grid<Geometry5>(side, side);
  cfg.pred_geo = Grid<Geometry5>(side, side);
  cfg.pred_geo_refined = Grid<Geometry5>(side, side);
  cfg.gt_possens = Grid<SideValues>(side, side);
  cfg.pred_possens = Grid<SideValues>(side, side);
  cfg.pred_score = Grid<double>(side, side, 0.0);
  cfg.train_mask = Grid<double>(side, side, 1.0);

  std::uniform_real_distribution<double> dist_d(0.5, 6.0);
  std::uniform_real_distribution<double> theta_d(-0.6, 0.6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> score_d(0.05, 0.95);
  std::uniform_int_distribution<int> count_d(8, 14);

  auto random_geo = [&] {
    Geometry5 g;
    g.d_top = dist_d(rng);
    g.d_right = dist_d(rng);
    g.d_bottom = dist_d(rng);
    g.d_left = dist_d(rng);
    g.theta = theta_d(rng);
    return g;
  };
  auto perturbed_geo = [&](const Geometry5& gt) {
    // keep every distance at least 1e-3 away from its target so min()
    // branches stay fixed under the finite-difference step
    Geometry5 p;
    p.d_top = away_from(rng, dist_d, gt.d_top, 1e-3);
    p.d_right = away_from(rng, dist_d, gt.d_right, 1e-3);
    p.d_bottom = away_from(rng, dist_d, gt.d_bottom, 1e-3);
    p.d_left = away_from(rng, dist_d, gt.d_left, 1e-3);
    p.theta = gt.theta + (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.05 + 0.4 * unit(rng));
    return p;
  };
  auto random_sides = [&] {
    return SideValues{unit(rng), unit(rng), unit(rng), unit(rng)};
  };
  auto perturbed_sides = [&](const SideValues& gt) {
    auto channel = [&](double g) {
      for (;;) {
        const double v = g + 2.5 * (unit(rng) - 0.5);
        if (std::abs(std::abs(v - g) - 1.0) >= 1e-3) return v;  // off the kink
      }
    };
    return SideValues{channel(gt.left), channel(gt.right), channel(gt.top), channel(gt.bottom)};
  };

  const int num_positives = count_d(rng);
  std::uniform_int_distribution<int> pix(0, side * side - 1);
  for (int n = 0; n < num_positives; ++n) {
    const std::size_t i = static_cast<std::size_t>(pix(rng));
    if (cfg.positives[i] > 0.5) continue;
    cfg.positives[i] = 1.0;
    cfg.instance_id[i] = 1 + static_cast<std::int32_t>(n % 3);
    cfg.gt_geo[i] = random_geo();
    cfg.pred_geo[i] = perturbed_geo(cfg.gt_geo[i]);
    cfg.pred_geo_refined[i] = perturbed_geo(cfg.gt_geo[i]);
    cfg.gt_possens[i] = random_sides();
    cfg.pred_possens[i] = perturbed_sides(cfg.gt_possens[i]);
    cfg.positive_indices.push_back(i);
  }

  for (std::size_t i = 0; i < cfg.pred_score.size(); ++i) {
    cfg.pred_score[i] = score_d(rng);
    if (cfg.positives[i] <= 0.5 && unit(rng) < 0.08) cfg.train_mask[i] = 0.0;
  }

  cfg.labels.score = cfg.positives;
  cfg.labels.geometry = cfg.gt_geo;
  cfg.labels.possens = cfg.gt_possens;
  cfg.labels.train_mask = cfg.train_mask;
  cfg.labels.instance_id = cfg.instance_id;

  // Pixels safely above or below the OHEM selection threshold.
  std::vector<double> neg_losses;
  for (std::size_t i = 0; i < cfg.pred_score.size(); ++i) {
    if (cfg.train_mask[i] <= 0.5 || cfg.positives[i] > 0.5) continue;
    neg_losses.push_back(-std::log(1.0 - cfg.pred_score[i]));
  }
  std::sort(neg_losses.rbegin(), neg_losses.rend());
  const std::size_t num_sel = std::min<std::size_t>(3 * cfg.positive_indices.size(),
                                                    neg_losses.size());
  const double boundary = num_sel > 0 && num_sel <= neg_losses.size()
                              ? neg_losses[num_sel - 1]
                              : 0.0;
  for (std::size_t i = 0; i < cfg.pred_score.size(); ++i) {
    if (cfg.train_mask[i] <= 0.5) continue;
    if (cfg.positives[i] > 0.5) {
      cfg.safe_score_indices.push_back(i);
      continue;
    }
    const double l = -std::log(1.0 - cfg.pred_score[i]);
    if (std::abs(l - boundary) > 1e-3) cfg.safe_score_indices.push_back(i);
  }
  return cfg;
}

struct Probe {
  double* slot = nullptr;     // input coordinate to perturb
  double analytic = 0.0;      // analytic gradient at that coordinate
};

double relative_error(double analytic, double fd) {
  const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-6});
  return std::abs(analytic - fd) / denom;
}

// One named loss to check: given a (mutable) config, return the loss value;
// and a probe picker that selects an input slot plus its analytic gradient.
struct CheckedLoss {
  std::string name;
  std::function<double(LossConfig&)> value;
  std::function<Probe(LossConfig&, std::mt19937_64&)> pick;
};

double* geo_channel(Geometry5& g, int c) {
  switch (c) {
    case 0: return &g.d_top;
    case 1: return &g.d_right;
    case 2: return &g.d_bottom;
    case 3: return &g.d_left;
    default: return &g.theta;
  }
}

double geo_channel_value(const Geometry5& g, int c) {
  switch (c) {
    case 0: return g.d_top;
    case 1: return g.d_right;
    case 2: return g.d_bottom;
    case 3: return g.d_left;
    default: return g.theta;
  }
}

double* side_channel(SideValues& s, int c) {
  switch (c) {
    case 0: return &s.left;
    case 1: return &s.right;
    case 2: return &s.top;
    default: return &s.bottom;
  }
}

double side_channel_value(const SideValues& s, int c) {
  switch (c) {
    case 0: return s.left;
    case 1: return s.right;
    case 2: return s.top;
    default: return s.bottom;
  }
}

std::vector<CheckedLoss> build_checks() {
  std::vector<CheckedLoss> checks;

  auto pick_positive = [](LossConfig& cfg, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> d(0, cfg.positive_indices.size() - 1);
    return cfg.positive_indices[d(rng)];
  };

  checks.push_back(
      {"iou",
       [](LossConfig& c) { return iou_loss(c.pred_geo, c.gt_geo, c.positives).value; },
       [pick_positive](LossConfig& c, std::mt19937_64& rng) {
         const std::size_t i = pick_positive(c, rng);
         std::uniform_int_distribution<int> ch(0, 3);
         const int channel = ch(rng);
         const auto r = iou_loss(c.pred_geo, c.gt_geo, c.positives);
         return Probe{geo_channel(c.pred_geo[i], channel),
                      geo_channel_value(r.grad[i], channel)};
       }});

  checks.push_back(
      {"instance_iou",
       [](LossConfig& c) {
         return instance_iou_loss(c.pred_geo, c.gt_geo, c.positives, c.instance_id).value;
       },
       [pick_positive](LossConfig& c, std::mt19937_64& rng) {
         const std::size_t i = pick_positive(c, rng);
         std::uniform_int_distribution<int> ch(0, 3);
         const int channel = ch(rng);
         const auto r = instance_iou_loss(c.pred_geo, c.gt_geo, c.positives, c.instance_id);
         return Probe{geo_channel(c.pred_geo[i], channel),
                      geo_channel_value(r.grad[i], channel)};
       }});

  checks.push_back(
      {"angle",
       [](LossConfig& c) {
         Grid<double> pt(c.pred_geo.height(), c.pred_geo.width());
         Grid<double> gt(c.pred_geo.height(), c.pred_geo.width());
         for (std::size_t i = 0; i < pt.size(); ++i) {
           pt[i] = c.pred_geo[i].theta;
           gt[i] = c.gt_geo[i].theta;
         }
         return angle_loss(pt, gt, c.positives).value;
       },
       [pick_positive](LossConfig& c, std::mt19937_64& rng) {
         const std::size_t i = pick_positive(c, rng);
         Grid<double> pt(c.pred_geo.height(), c.pred_geo.width());
         Grid<double> gt(c.pred_geo.height(), c.pred_geo.width());
         for (std::size_t n = 0; n < pt.size(); ++n) {
           pt[n] = c.pred_geo[n].theta;
           gt[n] = c.gt_geo[n].theta;
         }
         const auto r = angle_loss(pt, gt, c.positives);
         return Probe{&c.pred_geo[i].theta, r.grad[i]};
       }});

  checks.push_back(
      {"geometry",
       [](LossConfig& c) {
         return geometry_loss(c.pred_geo, c.gt_geo, c.positives, c.instance_id).value;
       },
       [pick_positive](LossConfig& c, std::mt19937_64& rng) {
         const std::size_t i = pick_positive(c, rng);
         std::uniform_int_distribution<int> ch(0, 4);
         const int channel = ch(rng);
         const auto r = geometry_loss(c.pred_geo, c.gt_geo, c.positives, c.instance_id);
         return Probe{geo_channel(c.pred_geo[i], channel),
                      geo_channel_value(r.grad[i], channel)};
       }});

  checks.push_back(
      {"score_ohem",
       [](LossConfig& c) {
         return score_loss_ohem(c.pred_score, c.positives, c.train_mask).value;
       },
       [](LossConfig& c, std::mt19937_64& rng) {
         std::uniform_int_distribution<std::size_t> d(0, c.safe_score_indices.size() - 1);
         const std::size_t i = c.safe_score_indices[d(rng)];
         const auto r = score_loss_ohem(c.pred_score, c.positives, c.train_mask);
         return Probe{&c.pred_score[i], r.grad[i]};
       }});

  checks.push_back(
      {"possens",
       [](LossConfig& c) {
         return possens_loss(c.pred_possens, c.gt_possens, c.positives).value;
       },
       [pick_positive](LossConfig& c, std::mt19937_64& rng) {
         const std::size_t i = pick_positive(c, rng);
         std::uniform_int_distribution<int> ch(0, 3);
         const int channel = ch(rng);
         const auto r = possens_loss(c.pred_possens, c.gt_possens, c.positives);
         return Probe{side_channel(c.pred_possens[i], channel),
                      side_channel_value(r.grad[i], channel)};
       }});

  checks.push_back(
      {"total",
       [](LossConfig& c) {
         return total_loss(c.pred_score, c.pred_geo, c.pred_geo_refined, c.pred_possens,
                           c.labels)
             .value;
       },
       [pick_positive](LossConfig& c, std::mt19937_64& rng) {
         const auto r =
             total_loss(c.pred_score, c.pred_geo, c.pred_geo_refined, c.pred_possens, c.labels);
         std::uniform_int_distribution<int> which(0, 3);
         switch (which(rng)) {
           case 0: {
             std::uniform_int_distribution<std::size_t> d(0, c.safe_score_indices.size() - 1);
             const std::size_t i = c.safe_score_indices[d(rng)];
             return Probe{&c.pred_score[i], r.score_grad[i]};
           }
           case 1: {
             const std::size_t i = pick_positive(c, rng);
             std::uniform_int_distribution<int> ch(0, 4);
             const int channel = ch(rng);
             return Probe{geo_channel(c.pred_geo[i], channel),
                          geo_channel_value(r.coarse_grad[i], channel)};
           }
           case 2: {
             const std::size_t i = pick_positive(c, rng);
             std::uniform_int_distribution<int> ch(0, 4);
             const int channel = ch(rng);
             return Probe{geo_channel(c.pred_geo_refined[i], channel),
                          geo_channel_value(r.refined_grad[i], channel)};
           }
           default: {
             const std::size_t i = pick_positive(c, rng);
             std::uniform_int_distribution<int> ch(0, 3);
             const int channel = ch(rng);
             return Probe{side_channel(c.pred_possens[i], channel),
                          side_channel_value(r.possens_grad[i], channel)};
           }
         }
       }});

  return checks;
}

}  // namespace

std::vector<GradCheckReport> run_gradient_checks(std::uint64_t seed, int points_per_loss,
                                                 double step, double tolerance) {
  std::mt19937_64 rng(seed);
  std::vector<GradCheckReport> reports;
  for (const CheckedLoss& check : build_checks()) {
    GradCheckReport report;
    report.loss_name = check.name;
    int point = 0;
    while (point < points_per_loss) {
      LossConfig cfg = make_config(rng);
      // A handful of probes per configuration keeps the mix varied.
      for (int k = 0; k < 10 && point < points_per_loss; ++k, ++point) {
        const Probe probe = check.pick(cfg, rng);
        const double original = *probe.slot;
        *probe.slot = original + step;
        const double f_plus = check.value(cfg);
        *probe.slot = original - step;
        const double f_minus = check.value(cfg);
        *probe.slot = original;
        const double fd = (f_plus - f_minus) / (2.0 * step);
        report.max_rel_err = std::max(report.max_rel_err, relative_error(probe.analytic, fd));
        ++report.points_checked;
      }
    }
    report.ok = report.max_rel_err < tolerance;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace mostgeo
