// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/svg.hpp"

#include <cstdio>
#include <sstream>

#include "mostgeo/pipeline.hpp"

namespace mostgeo {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

void polygon_element(std::ostringstream& out, const Quad& q, const std::string& stroke,
                     bool dashed) {
  out << "  <polygon points=\"";
  for (int i = 0; i < 4; ++i) {
    if (i) out << ' ';
    out << fmt(q.vertices[i].x) << ',' << fmt(q.vertices[i].y);
  }
  out << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"";
  if (dashed) out << " stroke-dasharray=\"4 3\"";
  out << "/>\n";
}

}  // namespace

std::string render_svg(int image_w, int image_h, const std::vector<QuadBox>& detections,
                       const std::vector<TextInstance>* gts, double iou_threshold) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << image_w << "\" height=\""
      << image_h << "\" viewBox=\"0 0 " << image_w << ' ' << image_h << "\">\n";
  out << "  <rect width=\"" << image_w << "\" height=\"" << image_h
      << "\" fill=\"white\"/>\n";

  std::vector<int> matched;
  if (gts) {
    for (const TextInstance& gt : *gts) {
      polygon_element(out, gt.quad, "#999999", gt.dont_care);
    }
    matched = match_detections(detections, *gts, iou_threshold);
  }

  for (std::size_t d = 0; d < detections.size(); ++d) {
    std::string stroke = "green";
    if (gts) stroke = matched[d] >= 0 ? "green" : "red";
    polygon_element(out, detections[d].quad, stroke, false);
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace mostgeo
