#pragma once

#include <cstdint>

#include "degen/config.hpp"
#include "degen/field.hpp"

namespace degen {

/// u0 from the recipe in `init`:
///   constant       u_base
///   two_bump       u_base plus u_height on the x-band [u_lo, u_hi], with quintic
///                  ramps of width u_ramp on either side
///   gaussian       u_base + u_height exp(-|x - c|^2 / u_width^2), c = u_center (x)
///                  and the midpoint (y)
///   random_smooth  u_base exp(s), s a random cosine series of size u_amplitude
ScalarField make_u0(const Grid& grid, const InitConfig& init, std::uint64_t seed);

/// cos^2 bump of half-width v_width and peak v_peak around (v_center, midpoint).
ScalarField v0_shape(const Grid& grid, const InitConfig& init);

/// v0 from the recipe in `init`:
///   constant       v_level
///   bump           v0_shape, rescaled to mass v_mass when v_mass > 0 (so its
///                  sup stays below v_peak; throws std::invalid_argument when
///                  v_mass exceeds the mass of the shape)
///   random_smooth  v_peak exp(s) / max exp(s)
ScalarField make_v0(const Grid& grid, const InitConfig& init, std::uint64_t seed);

}  // namespace degen
