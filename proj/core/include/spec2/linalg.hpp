// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spec2 {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Throws Error(non_finite) naming `what` if any entry is NaN or Inf.
void require_finite(const ComplexMatrix& x, std::string_view what);

/// Lexicographic (real, imag) order used for every sorted point list.
bool lex_less(Complex a, Complex b) noexcept;

struct HermitianCheckReport {
  double max_asymmetry = 0.0;  // max |X - X^H| entrywise
  bool is_psd_hint = false;    // a Cholesky attempt on X succeeded
};

HermitianCheckReport hermitian_check(const ComplexMatrix& x);

/// Upper-triangular R with R^H R = M. Throws NotPositiveDefinite when a pivot
/// falls to d * ulp * ||M||_F or below.
ComplexMatrix cholesky(const ComplexMatrix& m);

/// Solves (R^H R) X = B given the factor from `cholesky`.
ComplexMatrix cholesky_solve(const ComplexMatrix& r, const ComplexMatrix& b);

struct EigOptions {
  bool balance = true;
  /// Accepted relative backward error ||Sv - zv|| / ||S||_F of every pair.
  double tol_eig = 1e-10;
};

/// Diagonal similarity and symmetric permutation applied before reduction:
/// S_bal = D^-1 P^T S P D, where (P^T S P)(i, j) = S(perm[i], perm[j]).
/// The permutation orders the strongly connected components of the sparsity
/// graph so that S_bal is block upper triangular; block k occupies rows
/// [block_starts[k], block_starts[k+1]) with a final sentinel equal to dim.
struct Balancing {
  std::vector<std::size_t> perm;
  RealVector scale;
  std::vector<std::size_t> block_starts;

  /// Maps a vector from balanced coordinates back to the original ones.
  ComplexMatrix unbalance(const ComplexMatrix& x) const;
};

/// Complex Schur form S_bal = Z T Z^H of the balanced matrix.
struct SchurForm {
  ComplexMatrix t;
  ComplexMatrix z;
  Balancing balancing;

  std::size_t dim() const { return static_cast<std::size_t>(t.rows()); }
  ComplexVector eigenvalues() const { return t.diagonal(); }
};

/// Balance, then Hessenberg reduction and implicitly shifted complex QR with
/// Wilkinson shifts on each diagonal block. Throws NoConvergence when a
/// deflation needs more than 30 * max(10, block dim) iterations.
SchurForm schur(const ComplexMatrix& s, const EigOptions& options = {});

/// Moves the diagonal entries at `positions` of an upper-triangular Schur form
/// to the leading block (in the given order) with unitary swaps. Returns the
/// new position of every old diagonal index.
std::vector<std::size_t> reorder_schur(SchurForm& form, const std::vector<std::size_t>& positions);

/// Right eigenvectors (unit 2-norm, original coordinates) of the matrix whose
/// Schur form is given, one column per diagonal entry of T.
ComplexMatrix schur_eigenvectors(const SchurForm& form);

struct EigenPairs {
  std::vector<Complex> values;
  std::optional<ComplexMatrix> vectors;
  std::vector<double> backward_errors;  // ||Sv - zv|| / ||S||_F per pair
};

/// Eigenvalues (sorted by (re, im)) and optionally unit eigenvectors of a
/// general complex matrix.
EigenPairs eig_dense(const ComplexMatrix& s, bool want_vectors, const EigOptions& options = {});

struct HermitianPencilEig {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // M-orthonormal columns
};

/// Solves H v = lambda M v for Hermitian H and Hermitian positive definite M.
HermitianPencilEig eig_hermitian_pencil(const ComplexMatrix& h, const ComplexMatrix& m);

struct Orthonormalized {
  ComplexMatrix basis;  // orthonormal columns spanning the numerical range
  std::size_t rank = 0;
  std::size_t input_columns = 0;
};

/// Rank-revealing orthonormalization. A column direction is kept when its
/// pivot exceeds rel_tol times the largest one.
Orthonormalized orthonormalize(const ComplexMatrix& x, double rel_tol = 1e-8);

struct SubspaceGaps {
  double forward = 0.0;    // delta(U, V) = sup_{u in U, |u|=1} dist(u, V)
  double backward = 0.0;   // delta(V, U)
  double symmetric = 0.0;  // max of the two
};

/// Gaps between the column spans of U and V (re-orthonormalized when their
/// columns are not orthonormal to 1e-10). Throws EmptySubspace.
SubspaceGaps subspace_gap(const ComplexMatrix& u, const ComplexMatrix& v);

/// Largest singular value.
double spectral_norm(const ComplexMatrix& x);

}  // namespace spec2
