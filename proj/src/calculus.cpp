#include "degen/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degen {

double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  const double ix2 = 1.0 / (g.h(0) * g.h(0));
  ScalarField out(g);
  if (g.dim() == 1) {
    for (int i = 0; i < nx; ++i) {
      const double c = f[i];
      const double l = i > 0 ? f[i - 1] : c;
      const double r = i + 1 < nx ? f[i + 1] : c;
      out[i] = ((r - c) - (c - l)) * ix2;
    }
    return out;
  }
  const double iy2 = 1.0 / (g.h(1) * g.h(1));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double c = f.at(i, j);
      const double l = i > 0 ? f.at(i - 1, j) : c;
      const double r = i + 1 < nx ? f.at(i + 1, j) : c;
      const double d = j > 0 ? f.at(i, j - 1) : c;
      const double u = j + 1 < ny ? f.at(i, j + 1) : c;
      out.at(i, j) = ((r - c) - (c - l)) * ix2 + ((u - c) - (c - d)) * iy2;
    }
  }
  return out;
}

VectorField grad(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out(g);
  const int nx = g.nx();
  const int ny = g.ny();
  for (int j = 0; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) out.face(0, i, j) = (f.at(i, j) - f.at(i - 1, j)) / g.h(0);
  }
  if (g.dim() == 2) {
    for (int j = 1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) out.face(1, i, j) = (f.at(i, j) - f.at(i, j - 1)) / g.h(1);
    }
  }
  return out;
}

ScalarField div_flux(const VectorField& a, const ScalarField& f) {
  if (!(a.grid() == f.grid())) throw std::invalid_argument("div_flux: grids differ");
  if (!a.has_zero_normal_flux()) {
    throw std::invalid_argument("div_flux: drift must satisfy a.nu = 0 on the boundary");
  }
  const Grid& g = f.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  ScalarField out(g);
  // Face flux a*F_up; boundary faces carry zero flux.
  auto flux_x = [&](int i, int j) {
    const double af = a.face(0, i, j);
    return af * (af > 0.0 ? f.at(i, j) : f.at(i - 1, j));
  };
  for (int j = 0; j < ny; ++j) {
    double left = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double right = i + 1 < nx ? flux_x(i + 1, j) : 0.0;
      out.at(i, j) = (right - left) / g.h(0);
      left = right;
    }
  }
  if (g.dim() == 2) {
    auto flux_y = [&](int i, int j) {
      const double af = a.face(1, i, j);
      return af * (af > 0.0 ? f.at(i, j) : f.at(i, j - 1));
    };
    for (int i = 0; i < nx; ++i) {
      double below = 0.0;
      for (int j = 0; j < ny; ++j) {
        const double above = j + 1 < ny ? flux_y(i, j + 1) : 0.0;
        out.at(i, j) += (above - below) / g.h(1);
        below = above;
      }
    }
  }
  return out;
}

double integrate(const ScalarField& f) {
  return compensated_sum(f.values()) * f.grid().cell_volume();
}

double lp_norm(const ScalarField& f, double p) {
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (double x : f.values()) m = std::max(m, std::abs(x));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  std::vector<double> powered(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) powered[k] = std::pow(std::abs(f[k]), p);
  return std::pow(compensated_sum(powered) * f.grid().cell_volume(), 1.0 / p);
}

double inner(const ScalarField& f, const ScalarField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("inner: grids differ");
  std::vector<double> prod(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) prod[k] = f[k] * g[k];
  return compensated_sum(prod) * f.grid().cell_volume();
}

ScalarField cell_grad_sq(const ScalarField& f) {
  const Grid& g = f.grid();
  const VectorField d = grad(f);
  const int nx = g.nx();
  const int ny = g.ny();
  ScalarField out(g);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double l = d.face(0, i, j);
      const double r = d.face(0, i + 1, j);
      double s = 0.5 * (l * l + r * r);
      if (g.dim() == 2) {
        const double b = d.face(1, i, j);
        const double t = d.face(1, i, j + 1);
        s += 0.5 * (b * b + t * t);
      }
      out.at(i, j) = s;
    }
  }
  return out;
}

double sup_grad(const ScalarField& f) { return std::sqrt(cell_grad_sq(f).max()); }

}  // namespace degen
