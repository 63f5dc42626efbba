// SPDX-License-Identifier: Apache-2.0
//
// The subcommands. Each writes its files under RunOptions::out_dir and also
// returns what it wrote, so callers and tests need not re-read the files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spec2/linalg.hpp"
#include "spec2cli/config.hpp"
#include "spec2cli/io.hpp"
#include "spec2cli/rates.hpp"

namespace spec2::cli {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::size_t threads = 1;
};

/// SPEC2_THREADS, else the hardware concurrency (at least 1).
std::size_t threads_from_env();

struct PointRow {
  std::size_t n = 0;
  Complex z;
  double backward_error = 0.0;
  std::optional<double> gamma;
};

struct EnclosureRow {
  std::size_t n = 0;
  Complex z;
  std::optional<double> basic_lo, basic_hi;
  std::optional<double> sharp_lo, sharp_hi;
  std::optional<double> window_a, window_b;
  std::optional<double> gamma;
  std::string verdict;
};

struct SweepRow {
  std::size_t n = 0;
  double epsilon = 0.0;           // NaN when the trial kind takes none
  double delta = 0.0;             // gap of the target eigenspace to L_n (graph norm when unbounded or shifted)
  double dist = 0.0;              // distance from the target to the nearest spec2 point
  std::optional<double> re_error;  // |Re z_n - z*| (self-adjoint models)
  double gamma = 0.0;             // residual over the cluster's minus subspace
  double subspace_gap = 0.0;      // symmetric gap of M_n^- to the target eigenspace
  std::size_t cluster_size = 0;
};

struct SweepFit {
  std::string quantity;
  std::optional<RateFit> fit;  // empty when fewer than 4 usable points
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<SweepFit> fits;
};

struct GeometryReport {
  std::vector<Complex> sample;
  std::size_t arcs = 0;
  std::size_t regions = 0;
  std::size_t grid_inside = 0;
  std::size_t grid_total = 0;
  std::vector<Complex> q_points;  // isolated members of Q (single-point samples)
};

struct GapRow {
  std::size_t n = 0;
  double epsilon = 0.0;
  double forward = 0.0;
  double backward = 0.0;
  double symmetric = 0.0;
  std::optional<double> graph_norm;
};

/// One file per level: matrices.json, or matrices_n<N>.json for a schedule.
std::vector<MatricesFile> cmd_assemble(const Config& config, const RunOptions& options);
std::vector<PointRow> cmd_spec2(const Config& config, const RunOptions& options);
std::vector<EnclosureRow> cmd_enclose(const Config& config, const RunOptions& options);
GeometryReport cmd_geometry(const Config& config, const RunOptions& options);
SweepReport cmd_sweep(const Config& config, const RunOptions& options);
std::vector<GapRow> cmd_gap(const Config& config, const RunOptions& options);

/// Parses the command line, runs one subcommand and maps failures to exit
/// codes: 0 success, 2 usage or configuration, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spec2::cli
