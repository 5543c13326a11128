#include "degen/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degen {

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field value count does not match grid cell count");
  }
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  for (int j = 0; j < grid.ny(); ++j) {
    const double y = grid.dim() == 2 ? grid.center(1, j) : 0.0;
    for (int i = 0; i < grid.nx(); ++i) out.at(i, j) = f(grid.center(0, i), y);
  }
  return out;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!(o.grid_ == grid_)) throw std::invalid_argument("field grids differ");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!(o.grid_ == grid_)) throw std::invalid_argument("field grids differ");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("field grids differ");
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

VectorField::VectorField(const Grid& grid) : grid_(grid) {
  comps_[0].assign(static_cast<std::size_t>(grid.nx() + 1) * grid.ny(), 0.0);
  if (grid.dim() == 2) comps_[1].assign(static_cast<std::size_t>(grid.nx()) * (grid.ny() + 1), 0.0);
}

std::size_t VectorField::face_index(int axis, int i, int j) const {
  if (axis == 0) return static_cast<std::size_t>(j) * (grid_.nx() + 1) + i;
  return static_cast<std::size_t>(j) * grid_.nx() + i;
}

VectorField VectorField::sample_no_flux(const Grid& grid,
                                        const std::function<double(int, double, double)>& f) {
  VectorField a(grid);
  const int nx = grid.nx();
  const int ny = grid.ny();
  for (int j = 0; j < ny; ++j) {
    const double y = grid.dim() == 2 ? grid.center(1, j) : 0.0;
    for (int i = 1; i < nx; ++i) a.face(0, i, j) = f(0, i * grid.h(0), y);
  }
  if (grid.dim() == 2) {
    for (int j = 1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) a.face(1, i, j) = f(1, grid.center(0, i), j * grid.h(1));
    }
  }
  return a;
}

bool VectorField::has_zero_normal_flux() const {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  for (int j = 0; j < ny; ++j) {
    if (face(0, 0, j) != 0.0 || face(0, nx, j) != 0.0) return false;
  }
  if (grid_.dim() == 2) {
    for (int i = 0; i < nx; ++i) {
      if (face(1, i, 0) != 0.0 || face(1, i, ny) != 0.0) return false;
    }
  }
  return true;
}

double VectorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : comps_) {
    for (double x : c) m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace degen
