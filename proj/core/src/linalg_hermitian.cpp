// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Eigenvalues>

#include "spec2/error.hpp"
#include "spec2/linalg.hpp"

namespace spec2 {

HermitianPencilEig eig_hermitian_pencil(const ComplexMatrix& h, const ComplexMatrix& m) {
  if (h.rows() != h.cols() || h.rows() != m.rows() || m.rows() != m.cols()) {
    throw Error(ErrorCode::invalid_argument, "eig_hermitian_pencil: shape mismatch");
  }
  require_finite(h, "pencil matrix");
  const ComplexMatrix r = cholesky(m);
  const auto upper = r.triangularView<Eigen::Upper>();
  // C = R^-H H R^-1
  ComplexMatrix tmp = upper.adjoint().solve(h);
  ComplexMatrix c = upper.adjoint().solve(tmp.adjoint()).adjoint();
  c = 0.5 * (c + c.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(c);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::no_convergence, "Hermitian eigensolver failed");
  }
  HermitianPencilEig out;
  out.values = solver.eigenvalues();
  out.vectors = upper.solve(solver.eigenvectors());
  return out;
}

}  // namespace spec2
