// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mostgeo/nms.hpp"

namespace mostgeo {

/// JSON interchange for detections, one array of records per image:
/// {"detections": [{"points": [[x,y] x4], "score": s,
///                  "weights": {"l":..,"r":..,"t":..,"b":..}}, ...]}
std::string detections_to_json(const std::vector<QuadBox>& detections);
std::vector<QuadBox> detections_from_json(const std::string& json_text);

void save_detections(const std::filesystem::path& path, const std::vector<QuadBox>& detections);
std::vector<QuadBox> load_detections(const std::filesystem::path& path);

}  // namespace mostgeo
