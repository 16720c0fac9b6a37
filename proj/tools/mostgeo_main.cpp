// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mostgeo/detections_io.hpp"
#include "mostgeo/gradcheck.hpp"
#include "mostgeo/icdar.hpp"
#include "mostgeo/labelgen.hpp"
#include "mostgeo/nms.hpp"
#include "mostgeo/pipeline.hpp"
#include "mostgeo/scene.hpp"
#include "mostgeo/svg.hpp"
#include "mostgeo/tensor_io.hpp"

namespace {

using namespace mostgeo;

std::pair<int, int> parse_size(const std::string& size) {
  const std::size_t sep = size.find('x');
  if (sep == std::string::npos) throw std::runtime_error("--size expects HxW, e.g. 512x640");
  const int h = std::stoi(size.substr(0, sep));
  const int w = std::stoi(size.substr(sep + 1));
  if (h <= 0 || w <= 0) throw std::runtime_error("--size expects positive dimensions");
  return {h, w};
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const std::size_t next = csv.find(',', pos);
    values.push_back(std::stod(csv.substr(pos, next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (values.empty()) throw std::runtime_error("expected a comma-separated list");
  return values;
}

NmsVariant parse_variant(const std::string& name) {
  if (name == "std") return NmsVariant::kStandard;
  if (name == "la") return NmsVariant::kLocality;
  if (name == "pa") return NmsVariant::kPositionAware;
  throw std::runtime_error("unknown NMS variant '" + name + "' (expected std, la or pa)");
}

int count_dont_care(const std::vector<TextInstance>& instances) {
  int n = 0;
  for (const TextInstance& inst : instances) n += inst.dont_care ? 1 : 0;
  return n;
}

int count_positives(const Grid<double>& score) {
  int n = 0;
  for (std::size_t i = 0; i < score.size(); ++i) n += score[i] > 0.5 ? 1 : 0;
  return n;
}

struct CommonMapArgs {
  std::string gt_path;
  std::string size;
  std::string out_dir;
  int stride = 4;
  double shrink = 0.3;
  double alpha = 0.75;
};

void add_map_options(CLI::App* cmd, CommonMapArgs& args) {
  cmd->add_option("--gt", args.gt_path, "ICDAR-style ground-truth file")->required();
  cmd->add_option("--size", args.size, "image size as HxW")->required();
  cmd->add_option("--out", args.out_dir, "output directory for tensor files")->required();
  cmd->add_option("--stride", args.stride, "feature-map stride");
  cmd->add_option("--shrink", args.shrink, "positive-region shrink ratio");
  cmd->add_option("--alpha", args.alpha, "position-sensitive alpha");
}

int run_labels(const CommonMapArgs& args) {
  const auto [h, w] = parse_size(args.size);
  const std::vector<TextInstance> instances = load_icdar_gt(args.gt_path);
  const LabelMaps maps =
      generate_maps(instances, h, w, args.stride, args.shrink, PosSensParams{args.alpha});
  save_label_maps(args.out_dir, maps);
  std::printf("instances=%zu dont_care=%d positives=%d skipped=%d\n", instances.size(),
              count_dont_care(instances), count_positives(maps.score), maps.skipped_instances);
  std::printf("wrote=%s\n", args.out_dir.c_str());
  return 0;
}

int run_simulate(const CommonMapArgs& args, const NoiseModel& noise) {
  const auto [h, w] = parse_size(args.size);
  const std::vector<TextInstance> instances = load_icdar_gt(args.gt_path);
  const PredictionMaps maps = render_oracle_maps(instances, h, w, args.stride, noise, args.shrink,
                                                 PosSensParams{args.alpha});
  save_prediction_maps(args.out_dir, maps);
  std::printf("instances=%zu positives=%d sigma0=%g sigma1=%g angle_sigma=%g seed=%llu\n",
              instances.size(), count_positives(maps.score), noise.sigma0, noise.sigma1,
              noise.angle_sigma, static_cast<unsigned long long>(noise.seed));
  std::printf("wrote=%s\n", args.out_dir.c_str());
  return 0;
}

int run_decode(const std::string& maps_dir, int stride, const std::string& variant,
               const NmsParams& params, const std::string& out_path) {
  const PredictionMaps maps = load_prediction_maps(maps_dir, stride);
  const std::vector<QuadBox> candidates = decode_maps(maps, params.score_thresh);
  const std::vector<QuadBox> detections = detect(maps, params, parse_variant(variant));
  save_detections(out_path, detections);
  std::printf("candidates=%zu detections=%zu wrote=%s\n", candidates.size(), detections.size(),
              out_path.c_str());
  return 0;
}

int run_eval(const std::string& det_path, const std::string& gt_path, const std::string& ious) {
  const std::vector<QuadBox> detections = load_detections(det_path);
  const std::vector<TextInstance> gts = load_icdar_gt(gt_path);
  for (const EvalResult& r : evaluate(detections, gts, parse_double_list(ious))) {
    std::printf(
        "iou=%.2f precision=%.6f recall=%.6f fmeasure=%.6f matches=%d detections=%d "
        "ground_truth=%d mean_matched_iou=%.6f\n",
        r.iou_threshold, r.precision, r.recall, r.fmeasure, r.matches, r.num_detections,
        r.num_ground_truth, r.mean_matched_iou);
  }
  return 0;
}

int run_render(const std::string& det_path, const std::string& gt_path, const std::string& size,
               double iou, const std::string& out_path) {
  const auto [h, w] = parse_size(size);
  const std::vector<QuadBox> detections = load_detections(det_path);
  std::string svg;
  if (!gt_path.empty()) {
    const std::vector<TextInstance> gts = load_icdar_gt(gt_path);
    svg = render_svg(w, h, detections, &gts, iou);
  } else {
    svg = render_svg(w, h, detections);
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << svg;
  std::printf("wrote=%s\n", out_path.c_str());
  return 0;
}

int run_bench(const std::string& counts_csv, std::uint64_t seed, const NmsParams& params) {
  for (const double count_d : parse_double_list(counts_csv)) {
    const std::size_t count = static_cast<std::size_t>(count_d);
    const std::vector<QuadBox> candidates = synthesize_candidates(count, seed);
    struct Variant {
      const char* name;
      NmsVariant variant;
    };
    for (const Variant v : {Variant{"la", NmsVariant::kLocality},
                            Variant{"pa", NmsVariant::kPositionAware},
                            Variant{"std", NmsVariant::kStandard}}) {
      std::size_t merged = 0;
      double best_ms = 1e300;
      for (int rep = 0; rep < 3; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        std::vector<QuadBox> out;
        switch (v.variant) {
          case NmsVariant::kLocality: out = locality_aware_nms(candidates, params); break;
          case NmsVariant::kPositionAware: out = pa_nms(candidates, params); break;
          case NmsVariant::kStandard: out = standard_nms(candidates, params.final_iou); break;
        }
        const auto stop = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
        best_ms = std::min(best_ms, ms);
        merged = out.size();
      }
      std::printf("variant=%s candidates=%zu detections=%zu ms=%.3f\n", v.name, count, merged,
                  best_ms);
    }
  }
  return 0;
}

int run_gradcheck(std::uint64_t seed, int points, double step, double tol) {
  bool all_ok = true;
  for (const GradCheckReport& r : run_gradient_checks(seed, points, step, tol)) {
    std::printf("loss=%s points=%d max_rel_err=%.3e status=%s\n", r.loss_name.c_str(),
                r.points_checked, r.max_rel_err, r.ok ? "ok" : "FAIL");
    all_ok = all_ok && r.ok;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detection-geometry toolkit: label generation, NMS variants, losses, evaluation"};
  app.require_subcommand(1);

  CommonMapArgs label_args;
  CLI::App* labels_cmd = app.add_subcommand("labels", "Generate ground-truth tensor files");
  add_map_options(labels_cmd, label_args);

  CommonMapArgs sim_args;
  NoiseModel noise;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Render noisy oracle prediction maps");
  add_map_options(sim_cmd, sim_args);
  sim_cmd->add_option("--sigma0", noise.sigma0, "distance noise intercept (pixels)");
  sim_cmd->add_option("--sigma1", noise.sigma1, "distance noise slope");
  sim_cmd->add_option("--angle-sigma", noise.angle_sigma, "angle noise (radians)");
  sim_cmd->add_option("--seed", noise.seed, "noise seed");

  std::string maps_dir, det_out = "detections.json", nms_name = "pa";
  int decode_stride = 4;
  NmsParams nms_params;
  CLI::App* decode_cmd = app.add_subcommand("decode", "Decode prediction maps into detections");
  decode_cmd->add_option("--maps", maps_dir, "directory holding prediction tensor files")
      ->required();
  decode_cmd->add_option("--out", det_out, "output detections file");
  decode_cmd->add_option("--stride", decode_stride, "feature-map stride");
  decode_cmd->add_option("--nms", nms_name, "NMS variant: std, la or pa");
  decode_cmd->add_option("--score-thresh", nms_params.score_thresh, "pixel score threshold");
  decode_cmd->add_option("--merge-iou", nms_params.merge_iou, "merge threshold for the scan");
  decode_cmd->add_option("--final-iou", nms_params.final_iou, "final suppression threshold");

  std::string eval_det, eval_gt, eval_ious = "0.5,0.7";
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score detections against ground truth");
  eval_cmd->add_option("--det", eval_det, "detections file")->required();
  eval_cmd->add_option("--gt", eval_gt, "ICDAR-style ground-truth file")->required();
  eval_cmd->add_option("--iou", eval_ious, "comma-separated IoU thresholds");

  std::string render_det, render_gt, render_size, render_out = "detections.svg";
  double render_iou = 0.5;
  CLI::App* render_cmd = app.add_subcommand("render", "Render detections as SVG");
  render_cmd->add_option("--det", render_det, "detections file")->required();
  render_cmd->add_option("--gt", render_gt, "optional ground truth for match coloring");
  render_cmd->add_option("--size", render_size, "image size as HxW")->required();
  render_cmd->add_option("--iou", render_iou, "match threshold for coloring");
  render_cmd->add_option("--out", render_out, "output SVG file");

  std::string bench_counts = "1000,5000,10000";
  std::uint64_t bench_seed = 1;
  NmsParams bench_params;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Time the NMS variants");
  bench_cmd->add_option("--counts", bench_counts, "comma-separated candidate counts");
  bench_cmd->add_option("--seed", bench_seed, "candidate synthesis seed");

  std::uint64_t gc_seed = 7;
  int gc_points = 100;
  double gc_step = 1e-5, gc_tol = 1e-4;
  CLI::App* gc_cmd = app.add_subcommand("gradcheck", "Finite-difference check of loss gradients");
  gc_cmd->add_option("--seed", gc_seed, "sampling seed");
  gc_cmd->add_option("--points", gc_points, "points per loss");
  gc_cmd->add_option("--step", gc_step, "finite-difference step");
  gc_cmd->add_option("--tol", gc_tol, "relative-error tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*labels_cmd) return run_labels(label_args);
    if (*sim_cmd) return run_simulate(sim_args, noise);
    if (*decode_cmd) return run_decode(maps_dir, decode_stride, nms_name, nms_params, det_out);
    if (*eval_cmd) return run_eval(eval_det, eval_gt, eval_ious);
    if (*render_cmd) return run_render(render_det, render_gt, render_size, render_iou, render_out);
    if (*bench_cmd) return run_bench(bench_counts, bench_seed, bench_params);
    if (*gc_cmd) return run_gradcheck(gc_seed, gc_points, gc_step, gc_tol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
