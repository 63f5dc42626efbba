// SPDX-License-Identifier: Apache-2.0

#include "spec2/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/QR>

#include "spec2/error.hpp"

namespace spec2 {
namespace {

void check_space(const OperatorModel& model, const TrialSpace& space) {
  if (space.basis.cols() == 0) {
    throw Error(ErrorCode::invalid_argument, "trial space is empty");
  }
  if (static_cast<std::size_t>(space.basis.rows()) != model.working_dim()) {
    throw Error(ErrorCode::invalid_argument,
                "trial vectors have " + std::to_string(space.basis.rows()) + " entries, model window is " +
                    std::to_string(model.working_dim()));
  }
  require_finite(space.basis, "trial basis");
}

ComplexMatrix hermitian_part(const ComplexMatrix& x) { return 0.5 * (x + x.adjoint()); }

void require_gram_pd(const ComplexMatrix& m, std::string_view what) {
  try {
    (void)cholesky(m);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_positive_definite) throw;
    throw Error(ErrorCode::degenerate_basis, std::string(what) + " is not positive definite: " + e.what());
  }
}

// [x; Ax] stacked column-wise.
ComplexMatrix graph_stack(const OperatorModel& model, const ComplexMatrix& x) {
  ComplexMatrix out(2 * x.rows(), x.cols());
  out.topRows(x.rows()) = x;
  out.bottomRows(x.rows()) = model.apply(x);
  return out;
}

}  // namespace

std::vector<Complex> SpectralData::sample() const {
  std::vector<Complex> out = point_spectrum;
  out.insert(out.end(), essential_sample.begin(), essential_sample.end());
  return out;
}

double SpectralData::distance(Complex z) const {
  double best = std::numeric_limits<double>::infinity();
  for (Complex p : point_spectrum) best = std::min(best, std::abs(p - z));
  for (Complex p : essential_sample) best = std::min(best, std::abs(p - z));
  return best;
}

ComplexMatrix OperatorModel::apply(const ComplexMatrix& x) const {
  ComplexMatrix out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) out.col(c) = apply(ComplexVector(x.col(c)));
  return out;
}

ComplexMatrix OperatorModel::apply_adjoint(const ComplexMatrix& x) const {
  ComplexMatrix out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) out.col(c) = apply_adjoint(ComplexVector(x.col(c)));
  return out;
}

WitnessReport check_witnesses(const OperatorModel& model, std::uint64_t seed, int samples) {
  const std::size_t w = model.working_dim();
  const std::size_t margin = model.margin();
  WitnessReport report;
  if (w <= 2 * margin) return report;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(w));
    // Keep two steps away from the edge so that A A* v is still exact.
    const std::size_t lo = std::min(w, 2 * margin);
    for (std::size_t i = lo; i + 2 * margin < w; ++i) v(static_cast<Eigen::Index>(i)) = Complex(normal(rng), normal(rng));
    return v;
  };
  std::vector<ComplexVector> us;
  for (int s = 0; s < samples; ++s) us.push_back(random_vector());
  for (const auto& u : us) {
    const double nu = u.norm();
    if (nu > 0.0) report.norm_estimate = std::max(report.norm_estimate, model.apply(u).norm() / nu);
  }
  const double a = std::max(report.norm_estimate, 1e-300);
  for (int s = 0; s < samples; ++s) {
    const ComplexVector& u = us[static_cast<std::size_t>(s)];
    const ComplexVector v = random_vector();
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) continue;
    const ComplexVector comm = model.apply(model.apply_adjoint(u)) - model.apply_adjoint(model.apply(u));
    report.normality_defect = std::max(report.normality_defect, comm.norm() / (a * a * nu));
    const Complex lhs = model.inner(model.apply(u), v);
    const Complex rhs = model.inner(u, model.apply_adjoint(v));
    report.adjoint_defect = std::max(report.adjoint_defect, std::abs(lhs - rhs) / (a * nu * nv));
  }
  return report;
}

TrialSpace coordinate_space(std::size_t working_dim, const std::vector<std::size_t>& indices, std::string label) {
  TrialSpace space;
  space.basis = ComplexMatrix::Zero(static_cast<Eigen::Index>(working_dim), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    if (indices[c] >= working_dim) throw Error(ErrorCode::invalid_argument, "coordinate index outside window");
    space.basis(static_cast<Eigen::Index>(indices[c]), static_cast<Eigen::Index>(c)) = 1.0;
  }
  space.label = std::move(label);
  return space;
}

GalerkinMatrices assemble(const OperatorModel& model, const TrialSpace& space) {
  check_space(model, space);
  const ComplexMatrix& psi = space.basis;
  const ComplexMatrix a_psi = model.apply(psi);
  require_finite(a_psi, "operator image of the trial basis");
  GalerkinMatrices g;
  g.m = hermitian_part(psi.adjoint() * psi);
  g.n = psi.adjoint() * a_psi;
  g.b = hermitian_part(a_psi.adjoint() * a_psi);
  require_gram_pd(g.m, "Gram matrix");
  return g;
}

GalerkinMatrices shift_matrices(const GalerkinMatrices& g, double alpha) {
  if (g.alpha) throw Error(ErrorCode::invalid_argument, "matrices are already shifted");
  GalerkinMatrices s;
  s.m = g.m;
  s.n = g.n - alpha * g.m;
  s.b = hermitian_part(g.b - alpha * g.l() + (alpha * alpha) * g.m);
  s.alpha = alpha;
  return s;
}

GalerkinMatrices assemble_shifted(const OperatorModel& model, const TrialSpace& space, double alpha) {
  check_space(model, space);
  if (!std::isfinite(alpha)) throw Error(ErrorCode::non_finite, "shift is not finite");
  const SpectralData spec = model.spectrum();
  if (spec.distance(Complex(alpha, 0.0)) <= 1e-14 * std::max(1.0, std::abs(alpha))) {
    throw Error(ErrorCode::shift_in_spectrum, "shift " + std::to_string(alpha) + " lies in the spectrum");
  }
  const ComplexMatrix& psi = space.basis;
  const ComplexMatrix a_psi = model.apply(psi);
  const ComplexMatrix shifted = a_psi - alpha * psi;
  require_finite(shifted, "operator image of the trial basis");

  GalerkinMatrices g;
  g.m = hermitian_part(psi.adjoint() * psi);
  g.n = psi.adjoint() * shifted;
  g.b = hermitian_part(shifted.adjoint() * shifted);
  g.alpha = alpha;
  require_gram_pd(g.m, "Gram matrix");

  GalerkinMatrices plain;
  plain.m = g.m;
  plain.n = psi.adjoint() * a_psi;
  plain.b = hermitian_part(a_psi.adjoint() * a_psi);
  const GalerkinMatrices algebraic = shift_matrices(plain, alpha);
  const double scale = plain.b.norm() + std::abs(alpha) * plain.l().norm() + alpha * alpha * plain.m.norm();
  const double defect = std::max((algebraic.b - g.b).norm(), (algebraic.l() - g.l()).norm());
  if (defect > 1e-12 * std::max(scale, 1.0)) {
    throw Error(ErrorCode::non_finite, "shifted assembly disagrees with the algebraic identities (defect " +
                                           std::to_string(defect) + ")");
  }
  return g;
}

double graph_norm_distance(const OperatorModel& model, const ComplexVector& psi, const TrialSpace& space) {
  check_space(model, space);
  if (psi.size() != space.basis.rows()) throw Error(ErrorCode::invalid_argument, "vector length mismatch");
  const ComplexMatrix g = graph_stack(model, space.basis);
  require_gram_pd(hermitian_part(g.adjoint() * g), "graph-norm Gram matrix");
  const ComplexMatrix target = graph_stack(model, ComplexMatrix(psi));
  const ComplexMatrix coeff = g.colPivHouseholderQr().solve(target);
  return (target - g * coeff).norm();
}

double graph_norm_gap(const OperatorModel& model, const ComplexMatrix& u, const TrialSpace& space) {
  check_space(model, space);
  if (u.rows() != space.basis.rows()) throw Error(ErrorCode::invalid_argument, "vector length mismatch");
  return subspace_gap(graph_stack(model, u), graph_stack(model, space.basis)).forward;
}

}  // namespace spec2
