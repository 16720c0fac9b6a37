// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mostgeo/geometry.hpp"
#include "mostgeo/grid.hpp"
#include "mostgeo/labelgen.hpp"
#include "mostgeo/pipeline.hpp"

namespace mostgeo {

/// Minimal binary tensor container, bit-exact across platforms:
///   magic "MOSTTNSR" | u32 version=1 | u32 ndim | ndim x u32 dims |
///   u32 dtype (0 = float32) | row-major little-endian payload.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;
};

Tensor read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, const Tensor& tensor);

// Map packing. Geometry tensors are H x W x 5 in (top, right, bottom,
// left, theta) channel order; position-sensitive tensors H x W x 4 in
// (left, right, top, bottom) order.
Tensor pack_scalar(const Grid<double>& grid);
Tensor pack_geometry(const Grid<Geometry5>& grid);
Tensor pack_possens(const Grid<SideValues>& grid);
Tensor pack_instance_id(const Grid<std::int32_t>& grid);

Grid<double> unpack_scalar(const Tensor& t);
Grid<Geometry5> unpack_geometry(const Tensor& t);
Grid<SideValues> unpack_possens(const Tensor& t);
Grid<std::int32_t> unpack_instance_id(const Tensor& t);

/// Fixed per-directory file layout used by the CLI: score.tnsr,
/// geometry.tnsr, possens.tnsr (+ train_mask.tnsr, instance_id.tnsr for
/// label maps).
void save_label_maps(const std::filesystem::path& dir, const LabelMaps& maps);
void save_prediction_maps(const std::filesystem::path& dir, const PredictionMaps& maps);
PredictionMaps load_prediction_maps(const std::filesystem::path& dir, int stride);

}  // namespace mostgeo
