#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "degen/grid.hpp"

namespace degen {

/// One real value per cell of a Grid.
class ScalarField {
 public:
  ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  /// Samples f at every cell center; for 1D grids y is passed as 0.
  static ScalarField sample(const Grid& grid, const std::function<double(double, double)>& f);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& at(int i, int j = 0) { return values_[grid_.index(i, j)]; }
  double at(int i, int j = 0) const { return values_[grid_.index(i, j)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double min() const;
  double max() const;
  bool is_nonnegative() const { return min() >= 0.0; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

  bool operator==(const ScalarField&) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// Face-centered vector field.
///
/// Component `axis` lives on faces normal to that axis: (nx+1) x ny faces for
/// x, nx x (ny+1) faces for y. Faces with index 0 or n along their own axis lie
/// on the boundary; their values are the normal component a.nu.
class VectorField {
 public:
  explicit VectorField(const Grid& grid);

  /// Samples f(axis, x, y) at face midpoints and zeroes every boundary face.
  static VectorField sample_no_flux(const Grid& grid,
                                    const std::function<double(int, double, double)>& f);

  const Grid& grid() const { return grid_; }

  std::size_t face_count(int axis) const { return comps_[axis].size(); }
  /// Face (i, j) normal to `axis`; i in [0, nx] for axis 0, j in [0, ny] for axis 1.
  std::size_t face_index(int axis, int i, int j = 0) const;

  double& face(int axis, int i, int j = 0) { return comps_[axis][face_index(axis, i, j)]; }
  double face(int axis, int i, int j = 0) const { return comps_[axis][face_index(axis, i, j)]; }

  std::span<double> component(int axis) { return comps_[axis]; }
  std::span<const double> component(int axis) const { return comps_[axis]; }

  /// True when every boundary face carries exactly zero normal component.
  bool has_zero_normal_flux() const;
  double max_abs() const;

 private:
  Grid grid_;
  std::array<std::vector<double>, 2> comps_;
};

}  // namespace degen
