#include "degen/initial_data.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "degen/calculus.hpp"

namespace degen {

namespace {

constexpr double kPi = 3.14159265358979323846;

double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

ScalarField random_series(const Grid& grid, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  constexpr int kModes = 6;
  const int lmax = grid.dim() == 2 ? kModes : 0;
  std::vector<double> c((kModes + 1) * (lmax + 1));
  for (int k = 0; k <= kModes; ++k) {
    for (int l = 0; l <= lmax; ++l) c[k * (lmax + 1) + l] = amplitude * unit(rng) / std::max(1, k + l);
  }
  return ScalarField::sample(grid, [&](double x, double y) {
    double s = 0.0;
    for (int k = 0; k <= kModes; ++k) {
      const double cx = std::cos(k * kPi * x / grid.length(0));
      for (int l = 0; l <= lmax; ++l) s += c[k * (lmax + 1) + l] * cx * std::cos(l * kPi * y / grid.length(1));
    }
    return std::exp(s);
  });
}

}  // namespace

ScalarField make_u0(const Grid& grid, const InitConfig& init, std::uint64_t seed) {
  if (init.u == "constant") return ScalarField(grid, init.u_base);
  if (init.u == "two_bump") {
    return ScalarField::sample(grid, [&](double x, double) {
      const double rise = smoothstep5((x - (init.u_lo - init.u_ramp)) / init.u_ramp);
      const double fall = 1.0 - smoothstep5((x - init.u_hi) / init.u_ramp);
      return init.u_base + init.u_height * rise * fall;
    });
  }
  if (init.u == "gaussian") {
    return ScalarField::sample(grid, [&](double x, double y) {
      const double dx = x - init.u_center;
      const double dy = grid.dim() == 2 ? y - grid.midpoint(1) : 0.0;
      return init.u_base + init.u_height * std::exp(-(dx * dx + dy * dy) / (init.u_width * init.u_width));
    });
  }
  if (init.u == "random_smooth") {
    ScalarField f = random_series(grid, seed, init.u_amplitude);
    f *= init.u_base;
    return f;
  }
  throw std::invalid_argument("unknown u recipe: " + init.u);
}

ScalarField v0_shape(const Grid& grid, const InitConfig& init) {
  return ScalarField::sample(grid, [&](double x, double y) {
    const double dx = x - init.v_center;
    const double dy = grid.dim() == 2 ? y - grid.midpoint(1) : 0.0;
    const double r = std::sqrt(dx * dx + dy * dy);
    if (r >= init.v_width) return 0.0;
    const double c = std::cos(0.5 * kPi * r / init.v_width);
    return init.v_peak * c * c;
  });
}

ScalarField make_v0(const Grid& grid, const InitConfig& init, std::uint64_t seed) {
  if (init.v == "constant") return ScalarField(grid, init.v_level);
  if (init.v == "bump") {
    ScalarField f = v0_shape(grid, init);
    if (init.v_mass > 0.0) {
      const double mass = integrate(f);
      if (!(mass > 0.0)) throw std::invalid_argument("v0 bump misses every cell center");
      if (init.v_mass > mass * (1.0 + 1e-12)) {
        throw std::invalid_argument("v_mass exceeds the mass of the bump with peak v_peak");
      }
      f *= init.v_mass / mass;
    }
    return f;
  }
  if (init.v == "random_smooth") {
    ScalarField f = random_series(grid, seed ^ 0x9e3779b97f4a7c15ULL, init.v_amplitude);
    f *= init.v_peak / f.max();
    return f;
  }
  throw std::invalid_argument("unknown v recipe: " + init.v);
}

}  // namespace degen
