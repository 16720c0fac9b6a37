// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mostgeo {

struct GradCheckReport {
  std::string loss_name;
  int points_checked = 0;
  double max_rel_err = 0.0;
  bool ok = false;
};

/// Compare every analytic loss gradient against central finite
/// differences of the loss value at randomly sampled input coordinates.
/// The check only consumes loss values, never the analytic gradient path.
std::vector<GradCheckReport> run_gradient_checks(std::uint64_t seed, int points_per_loss = 100,
                                                 double step = 1e-5, double tolerance = 1e-4);

}  // namespace mostgeo
