// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spec2/error.hpp"
#include "spec2/linalg.hpp"

namespace spec2 {

void require_finite(const ComplexMatrix& x, std::string_view what) {
  if (!x.allFinite()) {
    throw Error(ErrorCode::non_finite, std::string(what) + " has NaN or Inf entries");
  }
}

bool lex_less(Complex a, Complex b) noexcept {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

HermitianCheckReport hermitian_check(const ComplexMatrix& x) {
  HermitianCheckReport report;
  if (x.rows() != x.cols()) {
    throw Error(ErrorCode::invalid_argument, "hermitian_check needs a square matrix");
  }
  report.max_asymmetry = (x - x.adjoint()).cwiseAbs().maxCoeff();
  try {
    (void)cholesky(0.5 * (x + x.adjoint()));
    report.is_psd_hint = true;
  } catch (const Error&) {
    report.is_psd_hint = false;
  }
  return report;
}

ComplexMatrix cholesky(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::invalid_argument, "cholesky needs a nonempty square matrix");
  }
  require_finite(m, "cholesky input");
  const Eigen::Index d = m.rows();
  const double norm = m.norm();
  const double ulp = std::numeric_limits<double>::epsilon();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(norm, 1e-300)) {
    throw Error(ErrorCode::invalid_argument, "cholesky input is not Hermitian");
  }
  const double pivot_floor = static_cast<double>(d) * ulp * norm;

  // Row-oriented upper factor: R(k, k:) from the k-th Schur complement row.
  ComplexMatrix r = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    double pivot = m(k, k).real();
    for (Eigen::Index i = 0; i < k; ++i) pivot -= std::norm(r(i, k));
    if (!(pivot > pivot_floor)) {
      throw Error(ErrorCode::not_positive_definite,
                  "pivot " + std::to_string(k) + " is " + std::to_string(pivot) +
                      " (floor " + std::to_string(pivot_floor) + ")");
    }
    const double rkk = std::sqrt(pivot);
    r(k, k) = rkk;
    for (Eigen::Index j = k + 1; j < d; ++j) {
      Complex s = m(k, j);
      for (Eigen::Index i = 0; i < k; ++i) s -= std::conj(r(i, k)) * r(i, j);
      r(k, j) = s / rkk;
    }
  }
  return r;
}

ComplexMatrix cholesky_solve(const ComplexMatrix& r, const ComplexMatrix& b) {
  const auto upper = r.triangularView<Eigen::Upper>();
  ComplexMatrix y = upper.adjoint().solve(b);
  return upper.solve(y);
}

}  // namespace spec2
