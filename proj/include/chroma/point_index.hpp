// Copyright 2026 The Chroma Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Uniform-grid index over points in R^d for fixed-radius queries. Used to
// keep greedy saturation of packings and nets near-linear. Dimensions above
// kMaxGridDim, or grids that would need too many cells, fall back to a
// linear scan.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace chroma {

class PointIndex {
 public:
  static constexpr int kMaxGridDim = 4;
  static constexpr std::int64_t kMaxCells = std::int64_t{1} << 22;

  // Points are expected to lie in the cube [-extent, extent]^dim.
  PointIndex(int dim, double extent, double cell) : dim_(dim), extent_(extent), cell_(cell) {
    if (dim_ <= kMaxGridDim && cell_ > 0.0) {
      side_ = static_cast<std::int64_t>(std::floor(2.0 * extent_ / cell_)) + 1;
      std::int64_t total = 1;
      for (int i = 0; i < dim_ && total <= kMaxCells; ++i) total *= side_;
      if (total <= kMaxCells) cells_.resize(static_cast<std::size_t>(total));
    }
  }

  std::size_t size() const noexcept { return coords_.size() / static_cast<std::size_t>(dim_); }

  Eigen::Map<const Eigen::VectorXd> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), dim_};
  }

  void insert(const Eigen::Ref<const Eigen::VectorXd>& p) {
    const auto id = static_cast<std::uint32_t>(size());
    for (int i = 0; i < dim_; ++i) coords_.push_back(p[i]);
    if (!cells_.empty()) cells_[cell_of(p)].push_back(id);
  }

  // True if some stored point lies within Euclidean distance `radius` of q
  // (inclusive).
  bool any_within(const Eigen::Ref<const Eigen::VectorXd>& q, double radius) const {
    const double r2 = radius * radius;
    if (cells_.empty()) {
      for (std::size_t i = 0; i < size(); ++i) {
        if ((point(i) - q).squaredNorm() <= r2) return true;
      }
      return false;
    }
    std::int64_t lo[kMaxGridDim];
    std::int64_t hi[kMaxGridDim];
    for (int i = 0; i < dim_; ++i) {
      lo[i] = clamp(axis_cell(q[i] - radius));
      hi[i] = clamp(axis_cell(q[i] + radius));
    }
    std::int64_t cur[kMaxGridDim];
    for (int i = 0; i < dim_; ++i) cur[i] = lo[i];
    for (;;) {
      std::int64_t flat = 0;
      for (int i = 0; i < dim_; ++i) flat = flat * side_ + cur[i];
      for (std::uint32_t id : cells_[static_cast<std::size_t>(flat)]) {
        if ((point(id) - q).squaredNorm() <= r2) return true;
      }
      int axis = dim_ - 1;
      while (axis >= 0 && cur[axis] == hi[axis]) {
        cur[axis] = lo[axis];
        --axis;
      }
      if (axis < 0) return false;
      ++cur[axis];
    }
  }

 private:
  std::int64_t axis_cell(double v) const {
    return static_cast<std::int64_t>(std::floor((v + extent_) / cell_));
  }
  std::int64_t clamp(std::int64_t c) const { return c < 0 ? 0 : (c >= side_ ? side_ - 1 : c); }
  std::size_t cell_of(const Eigen::Ref<const Eigen::VectorXd>& p) const {
    std::int64_t flat = 0;
    for (int i = 0; i < dim_; ++i) flat = flat * side_ + clamp(axis_cell(p[i]));
    return static_cast<std::size_t>(flat);
  }

  int dim_;
  double extent_;
  double cell_;
  std::int64_t side_ = 0;
  std::vector<double> coords_;
  std::vector<std::vector<std::uint32_t>> cells_;
};

}  // namespace chroma
