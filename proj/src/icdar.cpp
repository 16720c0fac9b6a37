// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/icdar.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mostgeo {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, sep)) fields.push_back(field);
  return fields;
}

double parse_coordinate(const std::string& token, std::size_t line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw std::runtime_error("line " + std::to_string(line_no) + ": bad coordinate '" + token +
                             "'");
  }
  return value;
}

}  // namespace

Quad canonical_quad(const Quad& q) {
  Quad out = q;
  if (signed_area(out) < 0.0) {
    std::swap(out.vertices[1], out.vertices[3]);
  }
  int start = 0;
  auto key = [&](int i) {
    const Point2& p = out.vertices[i];
    return std::tuple<double, double, double>(p.x + p.y, p.y, p.x);
  };
  for (int i = 1; i < 4; ++i) {
    if (key(i) < key(start)) start = i;
  }
  Quad rotated;
  for (int i = 0; i < 4; ++i) rotated.vertices[i] = out.vertices[(start + i) % 4];
  return rotated;
}

std::vector<TextInstance> parse_icdar_gt(std::istream& in) {
  std::vector<TextInstance> instances;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line[0] == '\xef' && line[1] == '\xbb' &&
        line[2] == '\xbf') {
      line.erase(0, 3);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() < 9) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 8 coordinates " +
                               "and a transcription, got " + std::to_string(fields.size()) +
                               " fields");
    }

    Quad quad;
    for (int i = 0; i < 4; ++i) {
      quad.vertices[i].x = parse_coordinate(fields[i * 2], line_no);
      quad.vertices[i].y = parse_coordinate(fields[i * 2 + 1], line_no);
    }

    // Transcriptions may themselves contain commas.
    std::string transcription = fields[8];
    for (std::size_t i = 9; i < fields.size(); ++i) transcription += "," + fields[i];

    TextInstance inst;
    inst.quad = canonical_quad(quad);
    inst.dont_care = transcription == "###";
    instances.push_back(std::move(inst));
  }
  return instances;
}

std::vector<TextInstance> parse_icdar_gt(const std::string& text) {
  std::istringstream stream(text);
  return parse_icdar_gt(stream);
}

std::vector<TextInstance> load_icdar_gt(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_icdar_gt(in);
}

}  // namespace mostgeo
