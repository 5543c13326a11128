#pragma once

#include <limits>
#include <span>

#include "degen/field.hpp"

namespace degen {

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> xs);

/// Second difference (3-point in 1D, 5-point in 2D) with reflected ghost
/// cells. Self-adjoint for the cell-volume inner product; kills constants.
ScalarField laplacian(const ScalarField& f);

/// Face differences (f_{i+1} - f_i)/h on interior faces, 0 on boundary faces.
VectorField grad(const ScalarField& f);

/// Conservative divergence of the face flux a*F, with F taken upwind:
/// the face value comes from the cell the term's transport velocity (-a)
/// leaves. Throws std::invalid_argument when `a` has a nonzero normal
/// component on some boundary face.
ScalarField div_flux(const VectorField& a, const ScalarField& f);

/// Sum of values times cell volume (compensated).
double integrate(const ScalarField& f);

/// Discrete L^p norm; p == kInfNorm gives max |f|. Throws for p < 1.
double lp_norm(const ScalarField& f, double p);

/// Cell-volume weighted inner product.
double inner(const ScalarField& f, const ScalarField& g);

/// |grad f|^2 at cell centers: per axis, the mean of the squared face
/// differences on the two faces bounding the cell.
ScalarField cell_grad_sq(const ScalarField& f);

/// max over cells of sqrt(cell_grad_sq(f)).
double sup_grad(const ScalarField& f);

}  // namespace degen
