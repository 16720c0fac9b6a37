// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace mostgeo {

/// Dense row-major 2-D grid indexed as (y, x).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, T fill = T{})
      : height_(height), width_(width),
        data_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill) {
    assert(height >= 0 && width >= 0);
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(int y, int x) {
    assert(y >= 0 && y < height_ && x >= 0 && x < width_);
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& at(int y, int x) const {
    assert(y >= 0 && y < height_ && x >= 0 && x < width_);
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  bool operator==(const Grid& other) const {
    return height_ == other.height_ && width_ == other.width_ && data_ == other.data_;
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<T> data_;
};

}  // namespace mostgeo
