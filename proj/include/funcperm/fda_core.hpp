#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "funcperm/error.hpp"

namespace funcperm {

/// Strictly increasing time points t_0 < ... < t_L, at least two of them.
class Grid {
 public:
  explicit Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw GridError("grid needs at least 2 points");
    for (std::size_t l = 0; l < points_.size(); ++l) {
      if (!std::isfinite(points_[l]))
        throw GridError("grid point " + std::to_string(l) + " is not finite");
      if (l > 0 && !(points_[l] > points_[l - 1]))
        throw GridError("grid points must be strictly increasing (index " +
                        std::to_string(l) + ")");
    }
  }

  /// `count` equally spaced points from `start` to `stop`, endpoints exact.
  static Grid uniform(double start, double stop, std::size_t count) {
    if (count < 2) throw GridError("grid needs at least 2 points");
    std::vector<double> pts(count);
    const double span = stop - start;
    const double last = static_cast<double>(count - 1);
    for (std::size_t l = 0; l < count; ++l)
      pts[l] = start + span * (static_cast<double>(l) / last);
    pts.back() = stop;
    return Grid(std::move(pts));
  }

  /// 0, 1, ..., count-1.
  static Grid index(std::size_t count) {
    std::vector<double> pts(count);
    for (std::size_t l = 0; l < count; ++l) pts[l] = static_cast<double>(l);
    return Grid(std::move(pts));
  }

  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t l) const { return points_[l]; }
  double front() const noexcept { return points_.front(); }
  double back() const noexcept { return points_.back(); }
  double length() const noexcept { return points_.back() - points_.front(); }
  std::span<const double> points() const noexcept { return points_; }

  bool operator==(const Grid&) const = default;

 private:
  std::vector<double> points_;
};

/// Left-Riemann weights: w_0 = 0, w_l = t_l - t_{l-1}. These are the weights
/// of the squared L2 grid distance.
inline std::vector<double> riemann_weights(const Grid& grid) {
  std::vector<double> w(grid.size(), 0.0);
  for (std::size_t l = 1; l < grid.size(); ++l) w[l] = grid[l] - grid[l - 1];
  return w;
}

/// Trapezoidal quadrature weights; they sum to t_L - t_0 and are all positive.
inline std::vector<double> trapezoid_weights(const Grid& grid) {
  const std::size_t n = grid.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t l = 1; l < n; ++l) {
    const double half = 0.5 * (grid[l] - grid[l - 1]);
    w[l - 1] += half;
    w[l] += half;
  }
  return w;
}

/// Trapezoidal weights rescaled to sum to one.
inline std::vector<double> normalized_trapezoid_weights(const Grid& grid) {
  auto w = trapezoid_weights(grid);
  const double total = grid.length();
  for (double& x : w) x /= total;
  return w;
}

/// Curves registered on a common grid, stored row-major (one row per curve).
class FunctionalSample {
 public:
  FunctionalSample(Grid grid, std::vector<double> values)
      : grid_(std::make_shared<const Grid>(std::move(grid))), values_(std::move(values)) {
    validate();
  }

  FunctionalSample(std::shared_ptr<const Grid> grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    validate();
  }

  static FunctionalSample from_rows(Grid grid, const std::vector<std::vector<double>>& rows) {
    std::vector<double> flat;
    flat.reserve(rows.size() * grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != grid.size())
        throw DimensionError("curve " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " values, grid has " +
                             std::to_string(grid.size()));
      flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return FunctionalSample(std::move(grid), std::move(flat));
  }

  const Grid& grid() const noexcept { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const noexcept { return grid_; }
  std::size_t count() const noexcept { return values_.size() / grid_->size(); }
  std::size_t points() const noexcept { return grid_->size(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * points(), points()};
  }
  double operator()(std::size_t i, std::size_t l) const { return values_[i * points() + l]; }
  std::span<const double> values() const noexcept { return values_; }

  /// New sample made of the listed rows, in the given order.
  FunctionalSample subset(std::span<const std::size_t> rows) const {
    std::vector<double> out;
    out.reserve(rows.size() * points());
    for (std::size_t i : rows) {
      auto r = row(i);
      out.insert(out.end(), r.begin(), r.end());
    }
    return FunctionalSample(grid_, std::move(out));
  }

 private:
  void validate() const {
    if (!grid_) throw GridError("sample has no grid");
    if (values_.empty()) throw DimensionError("sample needs at least one curve");
    if (values_.size() % grid_->size() != 0)
      throw DimensionError("value count is not a multiple of the grid size");
    for (std::size_t k = 0; k < values_.size(); ++k)
      if (!std::isfinite(values_[k]))
        throw DomainError("curve " + std::to_string(k / grid_->size()) +
                          " has a non-finite value at grid index " +
                          std::to_string(k % grid_->size()));
  }

  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

inline void require_same_grid(const FunctionalSample& a, const FunctionalSample& b) {
  if (a.grid_ptr() != b.grid_ptr() && a.grid() != b.grid())
    throw DimensionError("samples are registered on different grids");
}

enum class Group : std::uint8_t { X = 0, Y = 1 };

/// Concatenated X and Y curves plus a group label per row. Relabeling shares
/// the curve data, so permutation iterations never copy curves.
class PooledSample {
 public:
  /// Canonical order: rows of xs are group X, rows of ys are group Y.
  static PooledSample pool(const FunctionalSample& xs, const FunctionalSample& ys) {
    require_same_grid(xs, ys);
    std::vector<double> all(xs.values().begin(), xs.values().end());
    all.insert(all.end(), ys.values().begin(), ys.values().end());
    std::vector<Group> labels(xs.count(), Group::X);
    labels.resize(xs.count() + ys.count(), Group::Y);
    return PooledSample(
        std::make_shared<const FunctionalSample>(xs.grid_ptr(), std::move(all)),
        std::move(labels));
  }

  PooledSample(std::shared_ptr<const FunctionalSample> data, std::vector<Group> labels)
      : data_(std::move(data)), labels_(std::move(labels)) {
    if (!data_) throw DimensionError("pooled sample has no data");
    if (labels_.size() != data_->count())
      throw DimensionError("label count differs from curve count");
    for (Group g : labels_) (g == Group::X ? m_ : n_) += 1;
    if (m_ == 0 || n_ == 0) throw DomainError("both groups need at least one curve");
  }

  /// Same curves, new labels; the group sizes must be preserved.
  PooledSample relabeled(std::vector<Group> labels) const {
    PooledSample out(data_, std::move(labels));
    if (out.m_ != m_) throw DomainError("relabeling changed the group sizes");
    return out;
  }

  const FunctionalSample& sample() const noexcept { return *data_; }
  const std::shared_ptr<const FunctionalSample>& sample_ptr() const noexcept { return data_; }
  std::span<const Group> labels() const noexcept { return labels_; }
  Group label(std::size_t i) const { return labels_[i]; }
  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return labels_.size(); }

  /// Row indices of one group, ascending.
  std::vector<std::size_t> indices(Group g) const {
    std::vector<std::size_t> out;
    out.reserve(g == Group::X ? m_ : n_);
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == g) out.push_back(i);
    return out;
  }

  FunctionalSample group(Group g) const { return data_->subset(indices(g)); }

 private:
  std::shared_ptr<const FunctionalSample> data_;
  std::vector<Group> labels_;
  std::size_t m_ = 0;
  std::size_t n_ = 0;
};

/// Squared L2 grid distance sum_l w_l (a_l - b_l)^2 with precomputed weights.
inline double l2_distance(std::span<const double> a, std::span<const double> b,
                          std::span<const double> weights) {
  if (a.size() != b.size() || a.size() != weights.size())
    throw DimensionError("curves and weights must have the same length");
  double acc = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) {
    const double d = a[l] - b[l];
    acc += weights[l] * d * d;
  }
  return acc;
}

/// Squared L2 grid distance with left-Riemann weights taken from `grid`.
inline double l2_distance(std::span<const double> a, std::span<const double> b, const Grid& grid) {
  if (a.size() != grid.size() || b.size() != grid.size())
    throw DimensionError("curve length differs from grid size");
  return l2_distance(a, b, riemann_weights(grid));
}

}  // namespace funcperm
