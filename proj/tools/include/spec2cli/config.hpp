// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration (JSON, see docs/formats.md) and the model registry.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spec2/galerkin.hpp"

namespace spec2::cli {

/// Bad configuration or usage; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSpec {
  std::string name;
  std::optional<std::size_t> working_dim;  // derived from the trial requests when absent
  std::vector<Complex> diagonal;           // diagonal_normal
  std::string growth = "linear";           // unbounded_diagonal
};

struct TrialSpec {
  std::string kind;                  // section | deflated | leading | perturbed | coordinates | full | random | basis
  std::optional<std::size_t> n;      // level (single runs)
  std::vector<std::size_t> indices;  // coordinates
  std::size_t dim = 0;               // random
  std::vector<std::vector<Complex>> basis;  // basis: one entry per column
};

struct ClusterTarget {
  Complex center;
  double radius = 0.0;
};

struct SvgOptions {
  bool enabled = false;
  bool arcs = false;  // draw gamma arcs of the essential sample
};

struct GeometryConfig {
  std::vector<Complex> sample;  // empty: use the model's spectral sample
  double grid_half_width = 0.0;  // 0: fitted to the sample
  std::size_t grid_points = 101;
  std::size_t arc_points = 64;
};

struct GapConfig {
  std::vector<std::vector<Complex>> u;  // columns
  std::vector<std::vector<Complex>> v;
};

struct Config {
  std::optional<ModelSpec> model;
  std::optional<std::filesystem::path> matrices;  // pre-assembled input for spec2 / enclose
  TrialSpec trial;
  std::vector<std::size_t> schedule;
  std::string epsilon_rule;        // "1/n" or empty
  std::vector<double> epsilons;    // one per schedule entry, or a single constant
  std::vector<ClusterTarget> clusters;
  std::optional<double> alpha;
  std::optional<Complex> target;
  std::optional<double> target_radius;
  bool gamma = false;
  bool exclude_floor = false;
  std::optional<std::pair<double, double>> window;
  std::uint64_t seed = 0;
  double tol_eig = 1e-10;
  SvgOptions svg;
  GeometryConfig geometry;
  GapConfig gap;
  std::filesystem::path base_dir;  // relative paths in the config resolve here
};

Config parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);

/// Registered model names, in registry order.
const std::vector<std::string>& model_names();

/// Instantiates the configured model; the working dimension defaults to the
/// smallest one that keeps every requested trial space off the window edge.
std::shared_ptr<const OperatorModel> make_model(const Config& config);

/// The schedule, or the single configured level.
std::vector<std::size_t> levels(const Config& config);

/// epsilon for level n (NaN when the trial kind takes none).
double epsilon_at(const Config& config, std::size_t index, std::size_t n);

TrialSpace make_trial(const OperatorModel& model, const Config& config, std::size_t index, std::size_t n);

/// The exact eigenspace of `z` (and of conj(z)) from the model's structure, as
/// working-dimension columns. Throws ConfigError when z is not an eigenvalue.
ComplexMatrix target_eigenspace(const OperatorModel& model, Complex z);

}  // namespace spec2::cli
