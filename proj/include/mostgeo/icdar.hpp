// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "mostgeo/labelgen.hpp"

namespace mostgeo {

/// Parse ICDAR-style ground truth: one instance per line as
/// "x1,y1,x2,y2,x3,y3,x4,y4,transcription", where "###" marks dont-care.
/// Vertices are reordered to canonical clockwise order starting at the
/// top-left (smallest x + y). Blank lines are skipped; a UTF-8 BOM on the
/// first line is tolerated. Malformed lines raise std::runtime_error with
/// the 1-based line number.
std::vector<TextInstance> parse_icdar_gt(std::istream& in);
std::vector<TextInstance> parse_icdar_gt(const std::string& text);
std::vector<TextInstance> load_icdar_gt(const std::filesystem::path& path);

/// Canonicalize vertex order in place: clockwise in image coordinates,
/// starting at the vertex minimizing x + y.
Quad canonical_quad(const Quad& q);

}  // namespace mostgeo
