// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spec2 {

enum class ErrorCode {
  invalid_argument,
  non_finite,
  not_positive_definite,
  no_convergence,
  empty_subspace,
  degenerate_basis,
  shift_in_spectrum,
  invalid_circle,
  boundary_eigenvalue,
  defective_cluster,
  out_of_disc,
  degenerate_triple,
  target_not_found,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for failures of the numerics (as opposed to bad input or usage).
bool is_numerical(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spec2
