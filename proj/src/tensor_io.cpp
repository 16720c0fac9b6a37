// SPDX-License-Identifier: Apache-2.0
#include "mostgeo/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mostgeo {

namespace {

constexpr char kMagic[8] = {'M', 'O', 'S', 'T', 'T', 'N', 'S', 'R'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kDtypeF32 = 0;
constexpr std::uint32_t kMaxDims = 8;

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw std::runtime_error("tensor file truncated");
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

std::size_t element_count(const std::vector<std::uint32_t>& dims) {
  std::size_t n = 1;
  for (const std::uint32_t d : dims) n *= d;
  return n;
}

void check_rank(const Tensor& t, std::size_t rank, const char* what) {
  if (t.dims.size() != rank) {
    throw std::runtime_error(std::string("unexpected tensor rank for ") + what);
  }
}

}  // namespace

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw std::runtime_error("not a tensor file: " + path.string());
  }
  if (get_u32(in) != kVersion) throw std::runtime_error("unsupported tensor version");
  const std::uint32_t ndim = get_u32(in);
  if (ndim == 0 || ndim > kMaxDims) throw std::runtime_error("invalid tensor dimension count");

  Tensor t;
  t.dims.resize(ndim);
  for (std::uint32_t& d : t.dims) d = get_u32(in);
  if (get_u32(in) != kDtypeF32) throw std::runtime_error("unsupported tensor dtype");

  const std::size_t count = element_count(t.dims);
  std::vector<unsigned char> payload(count * 4);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size() || in.peek() != EOF) {
    throw std::runtime_error("payload size mismatch in " + path.string());
  }

  t.data.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t bits = static_cast<std::uint32_t>(payload[i * 4]) |
                               (static_cast<std::uint32_t>(payload[i * 4 + 1]) << 8) |
                               (static_cast<std::uint32_t>(payload[i * 4 + 2]) << 16) |
                               (static_cast<std::uint32_t>(payload[i * 4 + 3]) << 24);
    t.data[i] = std::bit_cast<float>(bits);
  }
  return t;
}

void write_tensor(const std::filesystem::path& path, const Tensor& tensor) {
  if (tensor.dims.empty() || tensor.dims.size() > kMaxDims) {
    throw std::runtime_error("invalid tensor dimension count");
  }
  if (tensor.data.size() != element_count(tensor.dims)) {
    throw std::runtime_error("tensor payload does not match dims");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());

  out.write(kMagic, 8);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(tensor.dims.size()));
  for (const std::uint32_t d : tensor.dims) put_u32(out, d);
  put_u32(out, kDtypeF32);
  for (const float f : tensor.data) put_u32(out, std::bit_cast<std::uint32_t>(f));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Tensor pack_scalar(const Grid<double>& grid) {
  Tensor t;
  t.dims = {static_cast<std::uint32_t>(grid.height()), static_cast<std::uint32_t>(grid.width())};
  t.data.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) t.data.push_back(static_cast<float>(grid[i]));
  return t;
}

Tensor pack_geometry(const Grid<Geometry5>& grid) {
  Tensor t;
  t.dims = {static_cast<std::uint32_t>(grid.height()), static_cast<std::uint32_t>(grid.width()),
            5};
  t.data.reserve(grid.size() * 5);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Geometry5& g = grid[i];
    t.data.push_back(static_cast<float>(g.d_top));
    t.data.push_back(static_cast<float>(g.d_right));
    t.data.push_back(static_cast<float>(g.d_bottom));
    t.data.push_back(static_cast<float>(g.d_left));
    t.data.push_back(static_cast<float>(g.theta));
  }
  return t;
}

Tensor pack_possens(const Grid<SideValues>& grid) {
  Tensor t;
  t.dims = {static_cast<std::uint32_t>(grid.height()), static_cast<std::uint32_t>(grid.width()),
            4};
  t.data.reserve(grid.size() * 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SideValues& s = grid[i];
    t.data.push_back(static_cast<float>(s.left));
    t.data.push_back(static_cast<float>(s.right));
    t.data.push_back(static_cast<float>(s.top));
    t.data.push_back(static_cast<float>(s.bottom));
  }
  return t;
}

Tensor pack_instance_id(const Grid<std::int32_t>& grid) {
  Tensor t;
  t.dims = {static_cast<std::uint32_t>(grid.height()), static_cast<std::uint32_t>(grid.width())};
  t.data.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) t.data.push_back(static_cast<float>(grid[i]));
  return t;
}

Grid<double> unpack_scalar(const Tensor& t) {
  check_rank(t, 2, "scalar map");
  Grid<double> grid(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]));
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = t.data[i];
  return grid;
}

Grid<Geometry5> unpack_geometry(const Tensor& t) {
  check_rank(t, 3, "geometry map");
  if (t.dims[2] != 5) throw std::runtime_error("geometry map must have 5 channels");
  Grid<Geometry5> grid(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Geometry5& g = grid[i];
    g.d_top = t.data[i * 5];
    g.d_right = t.data[i * 5 + 1];
    g.d_bottom = t.data[i * 5 + 2];
    g.d_left = t.data[i * 5 + 3];
    g.theta = t.data[i * 5 + 4];
  }
  return grid;
}

Grid<SideValues> unpack_possens(const Tensor& t) {
  check_rank(t, 3, "position-sensitive map");
  if (t.dims[2] != 4) throw std::runtime_error("position-sensitive map must have 4 channels");
  Grid<SideValues> grid(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SideValues& s = grid[i];
    s.left = t.data[i * 4];
    s.right = t.data[i * 4 + 1];
    s.top = t.data[i * 4 + 2];
    s.bottom = t.data[i * 4 + 3];
  }
  return grid;
}

Grid<std::int32_t> unpack_instance_id(const Tensor& t) {
  check_rank(t, 2, "instance-id map");
  Grid<std::int32_t> grid(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = static_cast<std::int32_t>(t.data[i]);
  }
  return grid;
}

void save_label_maps(const std::filesystem::path& dir, const LabelMaps& maps) {
  std::filesystem::create_directories(dir);
  write_tensor(dir / "score.tnsr", pack_scalar(maps.score));
  write_tensor(dir / "geometry.tnsr", pack_geometry(maps.geometry));
  write_tensor(dir / "possens.tnsr", pack_possens(maps.possens));
  write_tensor(dir / "train_mask.tnsr", pack_scalar(maps.train_mask));
  write_tensor(dir / "instance_id.tnsr", pack_instance_id(maps.instance_id));
}

void save_prediction_maps(const std::filesystem::path& dir, const PredictionMaps& maps) {
  std::filesystem::create_directories(dir);
  write_tensor(dir / "score.tnsr", pack_scalar(maps.score));
  write_tensor(dir / "geometry.tnsr", pack_geometry(maps.refined_or_coarse()));
  write_tensor(dir / "possens.tnsr", pack_possens(maps.possens));
}

PredictionMaps load_prediction_maps(const std::filesystem::path& dir, int stride) {
  PredictionMaps maps;
  maps.stride = stride;
  maps.score = unpack_scalar(read_tensor(dir / "score.tnsr"));
  maps.geometry_coarse = unpack_geometry(read_tensor(dir / "geometry.tnsr"));
  maps.possens = unpack_possens(read_tensor(dir / "possens.tnsr"));
  if (!maps.score.same_shape(maps.possens) ||
      maps.score.height() != maps.geometry_coarse.height() ||
      maps.score.width() != maps.geometry_coarse.width()) {
    throw std::runtime_error("prediction map shapes do not match in " + dir.string());
  }
  return maps;
}

}  // namespace mostgeo
