#pragma once

#include "taxis/field.hpp"

namespace taxis {

class SpatialTest; // test_functions.hpp

/// Cell-volume-weighted sum of f, accumulated in fixed row-major order
/// so repeated runs are bit-identical.
double integrate(const ScalarField& f);

/// Central-difference gradient at interior faces; boundary faces are
/// exactly zero (discrete homogeneous Neumann condition).
FaceField gradient_neumann(const ScalarField& f);

/// Conservative divergence: per-cell net outflux divided by cell volume.
/// Boundary faces participate as stored, so a field with zero boundary
/// faces integrates to zero up to roundoff.
ScalarField divergence(const FaceField& F);

/// divergence(gradient_neumann(f)) without the intermediate allocation.
ScalarField laplacian_neumann(const ScalarField& f);

/// Discrete normal-trace pairing <F.nu, phi> = int F.grad(phi) + int phi div F.
/// phi is sampled at cell centers and differenced at faces, which makes
/// the pairing telescope: it vanishes to roundoff whenever the boundary
/// faces of F are zero, and otherwise equals the discrete boundary flux
/// integral of F weighted by phi.
double gauss_green_residual(const FaceField& F, const ScalarField& divF,
                            const ScalarField& phi);

/// Sum of the discrete boundary flux integral of F against phi (direct
/// boundary summation; oracle counterpart of gauss_green_residual).
double boundary_flux_integral(const FaceField& F, const ScalarField& phi);

// --- staggered quadrature helpers used by the certificate evaluations ---

/// Arithmetic face average of a cell field, per axis (boundary faces get
/// the single adjacent cell value).
FaceField face_average(const ScalarField& w);

/// int_Omega sum_d A_d(x) B_d(x) dx over interior faces; each interior
/// face carries one cell volume of quadrature weight.  Integrands built
/// from zero-flux gradients vanish at the walls, which keeps this
/// second-order accurate.
double face_inner_product(const FaceField& A, const FaceField& B);

/// Same but with an additional cellwise weight averaged onto faces.
double face_inner_product_weighted(const FaceField& A, const FaceField& B,
                                   const ScalarField& weight);

/// Cellwise product integral int f g dx.
double integrate_product(const ScalarField& f, const ScalarField& g);

} // namespace taxis
