// SPDX-License-Identifier: Apache-2.0

#include "spec2/models.hpp"

#include <cmath>
#include <numbers>

#include "spec2/error.hpp"

namespace spec2 {
namespace {

using Index = Eigen::Index;

void check_length(const ComplexVector& x, std::size_t w) {
  if (static_cast<std::size_t>(x.size()) != w) {
    throw Error(ErrorCode::invalid_argument, "vector length " + std::to_string(x.size()) +
                                                 " does not match window " + std::to_string(w));
  }
}

}  // namespace

BilateralShift::BilateralShift(std::size_t window, std::size_t circle_samples)
    : window_(window), circle_samples_(circle_samples) {
  if (window < 3 || window % 2 == 0) throw Error(ErrorCode::invalid_argument, "bilateral shift window must be odd and >= 3");
}

ComplexVector BilateralShift::apply(const ComplexVector& x) const {
  check_length(x, window_);
  ComplexVector out = ComplexVector::Zero(x.size());
  out.tail(x.size() - 1) = x.head(x.size() - 1);
  return out;
}

ComplexVector BilateralShift::apply_adjoint(const ComplexVector& x) const {
  check_length(x, window_);
  ComplexVector out = ComplexVector::Zero(x.size());
  out.head(x.size() - 1) = x.tail(x.size() - 1);
  return out;
}

SpectralData BilateralShift::spectrum() const {
  SpectralData s;
  for (std::size_t k = 0; k < circle_samples_; ++k) {
    s.essential_sample.push_back(
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(circle_samples_)));
  }
  return s;
}

std::size_t BilateralShift::position(long k) const {
  const long w = static_cast<long>(window_ / 2);
  if (k < -w || k > w) throw Error(ErrorCode::invalid_argument, "index outside the shift window");
  return static_cast<std::size_t>(k + w);
}

TrialSpace BilateralShift::section(std::size_t n) const {
  if (n + 1 > window_ / 2) {
    throw Error(ErrorCode::invalid_argument, "section n=" + std::to_string(n) + " needs a window of at least " +
                                                 std::to_string(2 * n + 3));
  }
  std::vector<std::size_t> idx;
  for (long k = -static_cast<long>(n); k <= static_cast<long>(n); ++k) idx.push_back(position(k));
  return coordinate_space(window_, idx, "n=" + std::to_string(n));
}

DeflatedIdentity::DeflatedIdentity(std::size_t window) : window_(window) {
  if (window < 2) throw Error(ErrorCode::invalid_argument, "deflated identity window must be >= 2");
}

ComplexVector DeflatedIdentity::apply(const ComplexVector& x) const {
  check_length(x, window_);
  ComplexVector out = x;
  out(0) = 0.0;
  return out;
}

SpectralData DeflatedIdentity::spectrum() const {
  SpectralData s;
  s.point_spectrum = {Complex(0.0)};
  s.essential_sample = {Complex(1.0)};
  s.self_adjoint = true;
  return s;
}

TrialSpace DeflatedIdentity::trial_space(std::size_t n, double eps) const {
  if (n < 3 || n + 2 > window_) {
    throw Error(ErrorCode::invalid_argument, "level n=" + std::to_string(n) + " needs 3 <= n <= W - 2");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::invalid_argument, "epsilon must lie in (0, 1)");
  const auto d = static_cast<Index>(n - 1);
  TrialSpace space;
  space.basis = ComplexMatrix::Zero(static_cast<Index>(window_), d);
  for (Index k = 0; k + 1 < d; ++k) space.basis(k + 1, k) = 1.0;  // phi_{k+2}
  space.basis(0, d - 1) = std::sqrt(1.0 - eps * eps);
  space.basis(static_cast<Index>(n - 1), d - 1) = eps;
  space.label = "n=" + std::to_string(n);
  return space;
}

ComplexVector DeflatedIdentity::eigenvector_zero() const {
  ComplexVector v = ComplexVector::Zero(static_cast<Index>(window_));
  v(0) = 1.0;
  return v;
}

DiagonalNormal::DiagonalNormal(std::vector<Complex> diagonal) : diagonal_(std::move(diagonal)) {
  if (diagonal_.empty()) throw Error(ErrorCode::invalid_argument, "diagonal model needs at least one entry");
  for (Complex d : diagonal_) {
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) throw Error(ErrorCode::non_finite, "diagonal entry");
  }
}

ComplexVector DiagonalNormal::apply(const ComplexVector& x) const {
  check_length(x, diagonal_.size());
  ComplexVector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out(i) = diagonal_[static_cast<std::size_t>(i)] * x(i);
  return out;
}

ComplexVector DiagonalNormal::apply_adjoint(const ComplexVector& x) const {
  check_length(x, diagonal_.size());
  ComplexVector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out(i) = std::conj(diagonal_[static_cast<std::size_t>(i)]) * x(i);
  return out;
}

SpectralData DiagonalNormal::spectrum() const {
  SpectralData s;
  s.self_adjoint = true;
  for (Complex d : diagonal_) {
    if (d.imag() != 0.0) s.self_adjoint = false;
    bool seen = false;
    for (Complex p : s.point_spectrum) seen = seen || p == d;
    if (!seen) s.point_spectrum.push_back(d);
  }
  return s;
}

UnboundedDiagonal::UnboundedDiagonal(std::size_t window, std::function<double(double)> growth,
                                     std::string growth_name)
    : growth_name_(std::move(growth_name)) {
  if (window < 1) throw Error(ErrorCode::invalid_argument, "window must be positive");
  values_.reserve(window);
  for (std::size_t k = 1; k <= window; ++k) {
    const double v = growth(static_cast<double>(k));
    if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "growth value");
    if (!values_.empty() && !(v > values_.back())) {
      throw Error(ErrorCode::invalid_argument, "growth must be strictly increasing");
    }
    values_.push_back(v);
  }
}

ComplexVector UnboundedDiagonal::apply(const ComplexVector& x) const {
  check_length(x, values_.size());
  ComplexVector out(x.size());
  for (Index i = 0; i < x.size(); ++i) out(i) = values_[static_cast<std::size_t>(i)] * x(i);
  return out;
}

SpectralData UnboundedDiagonal::spectrum() const {
  SpectralData s;
  s.self_adjoint = true;
  s.unbounded = true;
  for (double v : values_) s.point_spectrum.emplace_back(v, 0.0);
  return s;
}

TrialSpace UnboundedDiagonal::leading_space(std::size_t n) const {
  if (n < 1 || n > values_.size()) throw Error(ErrorCode::invalid_argument, "leading space larger than window");
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  return coordinate_space(values_.size(), idx, "n=" + std::to_string(n));
}

TrialSpace UnboundedDiagonal::perturbed_space(std::size_t n, double eps) const {
  if (n < 3 || n > values_.size()) throw Error(ErrorCode::invalid_argument, "perturbed space needs 3 <= n <= W");
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::invalid_argument, "epsilon must lie in (0, 1)");
  const auto d = static_cast<Index>(n - 1);
  TrialSpace space;
  space.basis = ComplexMatrix::Zero(static_cast<Index>(values_.size()), d);
  for (Index k = 0; k + 1 < d; ++k) space.basis(k + 1, k) = 1.0;
  space.basis(0, d - 1) = std::sqrt(1.0 - eps * eps);
  space.basis(static_cast<Index>(n - 1), d - 1) = eps;
  space.label = "n=" + std::to_string(n);
  return space;
}

std::shared_ptr<const BilateralShift> make_bilateral_shift(std::size_t window) {
  return std::make_shared<const BilateralShift>(window);
}

std::shared_ptr<const DeflatedIdentity> make_deflated_identity(std::size_t window) {
  return std::make_shared<const DeflatedIdentity>(window);
}

std::shared_ptr<const DiagonalNormal> make_diagonal_normal(std::vector<Complex> diagonal) {
  return std::make_shared<const DiagonalNormal>(std::move(diagonal));
}

std::shared_ptr<const UnboundedDiagonal> make_unbounded_diagonal(std::size_t window, const std::string& growth) {
  if (growth == "linear") {
    return std::make_shared<const UnboundedDiagonal>(window, [](double k) { return k; }, growth);
  }
  if (growth == "quadratic") {
    return std::make_shared<const UnboundedDiagonal>(window, [](double k) { return k * k; }, growth);
  }
  throw Error(ErrorCode::invalid_argument, "unknown growth '" + growth + "' (expected linear or quadratic)");
}

}  // namespace spec2
