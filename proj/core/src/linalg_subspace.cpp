// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "spec2/error.hpp"
#include "spec2/linalg.hpp"

namespace spec2 {
namespace {

bool has_orthonormal_columns(const ComplexMatrix& x) {
  const auto k = x.cols();
  if (k == 0) return true;
  return ((x.adjoint() * x) - ComplexMatrix::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-10;
}

// Largest singular value of (I - Q_v Q_v^H) Q_u for orthonormal Q_u, Q_v.
double directed_gap(const ComplexMatrix& qu, const ComplexMatrix& qv) {
  const ComplexMatrix resid = qu - qv * (qv.adjoint() * qu);
  return std::min(1.0, spectral_norm(resid));
}

}  // namespace

double spectral_norm(const ComplexMatrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(x);
  return svd.singularValues()(0);
}

Orthonormalized orthonormalize(const ComplexMatrix& x, double rel_tol) {
  Orthonormalized out;
  out.input_columns = static_cast<std::size_t>(x.cols());
  if (x.cols() == 0 || x.rows() == 0) {
    out.basis = ComplexMatrix(x.rows(), 0);
    return out;
  }
  require_finite(x, "orthonormalize input");
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(x);
  const auto& r = qr.matrixQR();
  const Eigen::Index diag = std::min(r.rows(), r.cols());
  const double lead = std::abs(r(0, 0));
  Eigen::Index rank = 0;
  if (lead > 0.0) {
    while (rank < diag && std::abs(r(rank, rank)) > rel_tol * lead) ++rank;
  }
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(x.rows(), rank);
  out.basis = std::move(q);
  out.rank = static_cast<std::size_t>(rank);
  return out;
}

SubspaceGaps subspace_gap(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows()) throw Error(ErrorCode::invalid_argument, "subspace_gap: row mismatch");
  const ComplexMatrix qu = has_orthonormal_columns(u) ? u : orthonormalize(u).basis;
  const ComplexMatrix qv = has_orthonormal_columns(v) ? v : orthonormalize(v).basis;
  if (qu.cols() == 0 || qv.cols() == 0) {
    throw Error(ErrorCode::empty_subspace, "subspace_gap needs two nonzero subspaces");
  }
  SubspaceGaps gaps;
  gaps.forward = directed_gap(qu, qv);
  gaps.backward = directed_gap(qv, qu);
  gaps.symmetric = std::max(gaps.forward, gaps.backward);
  return gaps;
}

}  // namespace spec2
