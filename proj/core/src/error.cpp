// SPDX-License-Identifier: Apache-2.0

#include "spec2/error.hpp"

namespace spec2 {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_finite: return "NonFinite";
    case ErrorCode::not_positive_definite: return "NotPositiveDefinite";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::empty_subspace: return "EmptySubspace";
    case ErrorCode::degenerate_basis: return "DegenerateBasis";
    case ErrorCode::shift_in_spectrum: return "ShiftInSpectrum";
    case ErrorCode::invalid_circle: return "InvalidCircle";
    case ErrorCode::boundary_eigenvalue: return "BoundaryEigenvalue";
    case ErrorCode::defective_cluster: return "DefectiveCluster";
    case ErrorCode::out_of_disc: return "OutOfDisc";
    case ErrorCode::degenerate_triple: return "DegenerateTriple";
    case ErrorCode::target_not_found: return "TargetNotFound";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::not_positive_definite:
    case ErrorCode::no_convergence:
    case ErrorCode::degenerate_basis:
    case ErrorCode::boundary_eigenvalue:
    case ErrorCode::defective_cluster:
    case ErrorCode::target_not_found:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace spec2
