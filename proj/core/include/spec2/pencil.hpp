// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "spec2/galerkin.hpp"
#include "spec2/linalg.hpp"

namespace spec2 {

/// S = blockdiag(M^-1, M^-1) [[L, -B], [M, 0]] = [[M^-1 L, -M^-1 B], [I, 0]],
/// built with Cholesky solves. Throws DegenerateBasis.
ComplexMatrix companion(const GalerkinMatrices& g);

/// The finite-section matrix M^-1 N (compression of A to the trial space).
ComplexMatrix finite_section(const GalerkinMatrices& g);

struct Spec2Point {
  Complex z;
  ComplexVector u;  // top block of the companion eigenvector (z v)
  ComplexVector v;  // bottom block: trial-space coefficients of phi
  double backward_error = 0.0;   // ||S x - w x|| / ||S||_F of the solved eigenpair
  double pencil_residual = 0.0;  // ||Q(z) v|| / ((|z|^2 ||M|| + |z| ||L|| + ||B||) ||v||)
};

struct Cluster {
  Complex center;
  double radius = 0.0;
  std::vector<std::size_t> members;  // indices into Spec2Result::points
};

struct Spec2Result {
  std::vector<Spec2Point> points;  // sorted by (re, im); points at infinity excluded
  std::vector<Cluster> clusters;
  std::optional<double> alpha;     // set for the shift-and-invert solve
  std::size_t points_at_infinity = 0;
  std::size_t dim = 0;             // trial dimension d
  SchurForm schur;                 // of the matrix actually solved (S or the shifted inverse)
  std::vector<std::size_t> schur_position;  // diagonal index in schur.t of each point

  std::vector<Complex> values() const;
};

/// Second-order spectrum: the 2d roots of det(z^2 M - z L + B) = 0. With
/// shifted matrices the roots are reported for A itself (z = alpha + root).
Spec2Result spec2(const GalerkinMatrices& g, const EigOptions& options = {});

/// Shift-and-invert solve from shifted matrices: eigenvalues w of the
/// companion built from M' = B(alpha), L' = L(alpha), B' = M, mapped to
/// z = alpha + 1/w. Roots with |w| < 1e-12 are counted as points at infinity.
Spec2Result spec2_shifted(const GalerkinMatrices& shifted, const EigOptions& options = {});

/// Groups the points strictly inside the circle |z - center| = radius and
/// returns the new cluster id. A non-real center needs radius < |Im center|;
/// a real center needs radius != |center|. Throws InvalidCircle or
/// BoundaryEigenvalue (a point within 1e-8 of the circle).
std::size_t cluster(Spec2Result& result, Complex center, double radius);

enum class SubspaceMethod {
  schur,         // invariant subspace from reordered Schur vectors (handles Jordan blocks)
  eigenvectors,  // span of the members' eigenvectors; defective clusters are an error
};

struct SpectralSubspace {
  ComplexMatrix full;   // 2d x k orthonormal
  ComplexMatrix plus;   // d x rank, orthonormalized top blocks
  ComplexMatrix minus;  // d x rank, orthonormalized bottom blocks (trial coefficients)
  std::size_t count = 0;  // cluster size
  std::size_t full_rank = 0;
  std::size_t plus_rank = 0;
  std::size_t minus_rank = 0;
};

SpectralSubspace subspace(const Spec2Result& result, std::size_t cluster_id,
                          SubspaceMethod method = SubspaceMethod::schur);

/// min ||(A - z) phi|| over unit phi = Psi c with c in span(V). Shifted
/// matrices are handled by working with z - alpha.
double residual_gamma(const GalerkinMatrices& g, const ComplexMatrix& v, Complex z);

}  // namespace spec2
