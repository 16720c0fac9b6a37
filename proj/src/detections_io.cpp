// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/detections_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mostgeo {

using nlohmann::json;

std::string detections_to_json(const std::vector<QuadBox>& detections) {
  json records = json::array();
  for (const QuadBox& box : detections) {
    json points = json::array();
    for (const Point2& v : box.quad.vertices) points.push_back({v.x, v.y});
    json record{{"points", std::move(points)},
                {"score", box.score},
                {"weights",
                 {{"l", box.weights.left},
                  {"r", box.weights.right},
                  {"t", box.weights.top},
                  {"b", box.weights.bottom}}}};
    records.push_back(std::move(record));
  }
  return json{{"detections", std::move(records)}}.dump(2) + "\n";
}

std::vector<QuadBox> detections_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("invalid detections file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("detections") || !doc["detections"].is_array()) {
    throw std::runtime_error("invalid detections file: missing 'detections' array");
  }

  std::vector<QuadBox> detections;
  std::size_t index = 0;
  for (const json& record : doc["detections"]) {
    try {
      QuadBox box;
      const json& points = record.at("points");
      if (!points.is_array() || points.size() != 4) {
        throw std::runtime_error("'points' must hold 4 pairs");
      }
      for (int i = 0; i < 4; ++i) {
        box.quad.vertices[i].x = points[i].at(0).get<double>();
        box.quad.vertices[i].y = points[i].at(1).get<double>();
      }
      box.score = record.at("score").get<double>();
      const json& w = record.at("weights");
      box.weights.left = w.at("l").get<double>();
      box.weights.right = w.at("r").get<double>();
      box.weights.top = w.at("t").get<double>();
      box.weights.bottom = w.at("b").get<double>();
      detections.push_back(std::move(box));
    } catch (const json::exception& e) {
      throw std::runtime_error("invalid detection record " + std::to_string(index) + ": " +
                               e.what());
    }
    ++index;
  }
  return detections;
}

void save_detections(const std::filesystem::path& path, const std::vector<QuadBox>& detections) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << detections_to_json(detections);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<QuadBox> load_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return detections_from_json(text);
}

}  // namespace mostgeo
