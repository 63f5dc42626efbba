// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spec2/linalg.hpp"

namespace spec2 {

/// What is known exactly about the spectrum of a model.
struct SpectralData {
  std::vector<Complex> point_spectrum;    // eigenvalues (discrete part, or every diagonal entry)
  std::vector<Complex> essential_sample;  // finite sample of the essential spectrum, may be empty
  bool self_adjoint = false;
  bool unbounded = false;

  /// point_spectrum followed by essential_sample.
  std::vector<Complex> sample() const;
  /// Distance from z to the union of both lists; +inf when both are empty.
  double distance(Complex z) const;
};

/// A normal operator acting on coefficient vectors of a working truncation of
/// a canonical basis. Vectors have working_dim() entries.
class OperatorModel {
 public:
  virtual ~OperatorModel() = default;

  virtual std::string name() const = 0;
  virtual std::size_t working_dim() const = 0;
  virtual ComplexVector apply(const ComplexVector& x) const = 0;
  virtual ComplexVector apply_adjoint(const ComplexVector& x) const = 0;
  virtual SpectralData spectrum() const = 0;

  /// Number of coordinates at each end of the window where the truncated
  /// action differs from the true operator. Trial vectors and witnesses stay
  /// inside [margin, working_dim - margin).
  virtual std::size_t margin() const { return 0; }

  /// <u, v>, linear in u. The models are sequence spaces with the Euclidean product.
  Complex inner(const ComplexVector& u, const ComplexVector& v) const { return v.dot(u); }

  /// Column-wise action.
  ComplexMatrix apply(const ComplexMatrix& x) const;
  ComplexMatrix apply_adjoint(const ComplexMatrix& x) const;
};

struct WitnessReport {
  double normality_defect = 0.0;  // max ||AA*v - A*Av|| / (||A||_est^2 ||v||)
  double adjoint_defect = 0.0;    // max |<Au, v> - <u, A*v>| / (||A||_est ||u|| ||v||)
  double norm_estimate = 0.0;
};

/// Checks normality and adjoint consistency on random vectors supported
/// inside the margin.
WitnessReport check_witnesses(const OperatorModel& model, std::uint64_t seed, int samples = 8);

struct TrialSpace {
  ComplexMatrix basis;  // working_dim x d, one column per basis vector
  std::string label;

  std::size_t dim() const { return static_cast<std::size_t>(basis.cols()); }
};

/// Standard basis vectors e_k for the given working indices.
TrialSpace coordinate_space(std::size_t working_dim, const std::vector<std::size_t>& indices,
                            std::string label = {});

struct GalerkinMatrices {
  ComplexMatrix m;  // M(i, j) = <psi_j, psi_i>
  ComplexMatrix n;  // N(i, j) = <(A - alpha) psi_j, psi_i>
  ComplexMatrix b;  // B(i, j) = <(A - alpha) psi_j, (A - alpha) psi_i>
  std::optional<double> alpha;

  std::size_t dim() const { return static_cast<std::size_t>(m.rows()); }
  /// N + N^H (the shifted L(alpha) = L - 2 alpha M when alpha is set).
  ComplexMatrix l() const { return n + n.adjoint(); }
};

/// Throws DegenerateBasis when the Gram matrix is not positive definite.
GalerkinMatrices assemble(const OperatorModel& model, const TrialSpace& space);

/// Matrices of A - alpha. Checks the algebraic identities against the
/// unshifted assembly and rejects alpha in the known spectrum.
GalerkinMatrices assemble_shifted(const OperatorModel& model, const TrialSpace& space, double alpha);

/// The shifted matrices computed algebraically from unshifted ones.
GalerkinMatrices shift_matrices(const GalerkinMatrices& g, double alpha);

/// Graph-norm distance from psi to the trial space: min_c ||psi - Psi c||_A
/// with ||x||_A^2 = ||x||^2 + ||Ax||^2.
double graph_norm_distance(const OperatorModel& model, const ComplexVector& psi, const TrialSpace& space);

/// Graph-norm gap delta_A(span U, L) = sup over graph-unit u in span U of dist_A(u, L).
double graph_norm_gap(const OperatorModel& model, const ComplexMatrix& u, const TrialSpace& space);

}  // namespace spec2
