#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace degen {

/// Uniform cell-centered discretization of a box [0,L_x] (x [0,L_y]).
///
/// Cells are stored row-major with x running fastest: index = j * nx + i.
/// Homogeneous Neumann conditions are realized by ghost-cell reflection, so
/// nothing here stores ghost values.
class Grid {
 public:
  /// Throws std::invalid_argument unless dim is 1 or 2, every length is
  /// positive and every axis has at least two cells.
  static Grid make(int dim, std::span<const double> lengths, std::span<const int> cells);
  static Grid line(double length, int cells);
  static Grid rect(double lx, double ly, int nx, int ny);

  int dim() const { return dim_; }
  double length(int axis) const { return lengths_[axis]; }
  int cells(int axis) const { return cells_[axis]; }
  double h(int axis) const { return spacing_[axis]; }
  double h_min() const;

  int nx() const { return cells_[0]; }
  int ny() const { return cells_[1]; }
  std::size_t size() const { return static_cast<std::size_t>(cells_[0]) * cells_[1]; }

  double cell_volume() const;
  double volume() const;

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * cells_[0] + i;
  }
  /// Cell-center coordinate along an axis.
  double center(int axis, int i) const { return (i + 0.5) * spacing_[axis]; }
  /// Midpoint of the box along an axis.
  double midpoint(int axis) const { return 0.5 * lengths_[axis]; }

  bool operator==(const Grid&) const = default;

 private:
  Grid() = default;

  int dim_ = 1;
  std::array<double, 2> lengths_{1.0, 1.0};
  std::array<int, 2> cells_{2, 1};
  std::array<double, 2> spacing_{0.5, 1.0};
};

}  // namespace degen
