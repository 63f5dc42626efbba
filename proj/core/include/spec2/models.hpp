// SPDX-License-Identifier: Apache-2.0
//
// Sequence-space operators with exactly known spectra.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "spec2/galerkin.hpp"

namespace spec2 {

/// (A a)_k = a_{k-1} on l2(Z), truncated to the window k = -w..w (W = 2w + 1)
/// with zero boundary. Window position i holds index k = i - w.
class BilateralShift final : public OperatorModel {
 public:
  /// W must be odd and at least 3. The unit circle is sampled at circle_samples points.
  explicit BilateralShift(std::size_t window, std::size_t circle_samples = 64);

  using OperatorModel::apply;
  using OperatorModel::apply_adjoint;

  std::string name() const override { return "bilateral_shift"; }
  std::size_t working_dim() const override { return window_; }
  ComplexVector apply(const ComplexVector& x) const override;
  ComplexVector apply_adjoint(const ComplexVector& x) const override;
  SpectralData spectrum() const override;
  std::size_t margin() const override { return 1; }

  /// Window position of sequence index k.
  std::size_t position(long k) const;
  /// span{e_-n, ..., e_n}; needs n + 1 <= w so the section stays off the edge.
  TrialSpace section(std::size_t n) const;

 private:
  std::size_t window_;
  std::size_t circle_samples_;
};

/// A = I - P with P the projection onto phi_1 (window position 0). Its
/// spectrum is {0} (simple eigenvalue, eigenvector phi_1) and {1} (essential).
class DeflatedIdentity final : public OperatorModel {
 public:
  explicit DeflatedIdentity(std::size_t window);

  using OperatorModel::apply;
  using OperatorModel::apply_adjoint;

  std::string name() const override { return "deflated_identity"; }
  std::size_t working_dim() const override { return window_; }
  ComplexVector apply(const ComplexVector& x) const override;
  ComplexVector apply_adjoint(const ComplexVector& x) const override { return apply(x); }
  SpectralData spectrum() const override;

  /// span{phi_2, ..., phi_{n-1}, psi_n} with psi_n = sqrt(1 - eps^2) phi_1 + eps phi_n;
  /// dimension n - 1, needs 3 <= n <= W - 2 and 0 < eps < 1.
  TrialSpace trial_space(std::size_t n, double eps) const;
  /// phi_1 as a window vector.
  ComplexVector eigenvector_zero() const;

 private:
  std::size_t window_;
};

/// A = diag(d_1, ..., d_W).
class DiagonalNormal final : public OperatorModel {
 public:
  explicit DiagonalNormal(std::vector<Complex> diagonal);

  using OperatorModel::apply;
  using OperatorModel::apply_adjoint;

  std::string name() const override { return "diagonal_normal"; }
  std::size_t working_dim() const override { return diagonal_.size(); }
  ComplexVector apply(const ComplexVector& x) const override;
  ComplexVector apply_adjoint(const ComplexVector& x) const override;
  SpectralData spectrum() const override;

  const std::vector<Complex>& diagonal() const { return diagonal_; }

 private:
  std::vector<Complex> diagonal_;
};

/// A = diag(g(1), ..., g(W)) for an increasing growth function g; flagged
/// unbounded, so shifted (graph-norm) assembly is the intended route.
class UnboundedDiagonal final : public OperatorModel {
 public:
  UnboundedDiagonal(std::size_t window, std::function<double(double)> growth, std::string growth_name);

  using OperatorModel::apply;
  using OperatorModel::apply_adjoint;

  std::string name() const override { return "unbounded_diagonal"; }
  std::size_t working_dim() const override { return values_.size(); }
  ComplexVector apply(const ComplexVector& x) const override;
  ComplexVector apply_adjoint(const ComplexVector& x) const override { return apply(x); }
  SpectralData spectrum() const override;

  const std::string& growth_name() const { return growth_name_; }
  double value(std::size_t k) const { return values_.at(k - 1); }  // g(k), k >= 1

  /// span{e_1, ..., e_n} (invariant).
  TrialSpace leading_space(std::size_t n) const;
  /// span{e_2, ..., e_{n-1}, sqrt(1 - eps^2) e_1 + eps e_n}; needs 3 <= n <= W.
  TrialSpace perturbed_space(std::size_t n, double eps) const;

 private:
  std::vector<double> values_;
  std::string growth_name_;
};

std::shared_ptr<const BilateralShift> make_bilateral_shift(std::size_t window);
std::shared_ptr<const DeflatedIdentity> make_deflated_identity(std::size_t window);
std::shared_ptr<const DiagonalNormal> make_diagonal_normal(std::vector<Complex> diagonal);
/// growth "linear" (k) or "quadratic" (k^2).
std::shared_ptr<const UnboundedDiagonal> make_unbounded_diagonal(std::size_t window, const std::string& growth);

}  // namespace spec2
