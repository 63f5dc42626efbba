// SPDX-License-Identifier: Apache-2.0

#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "spec2/error.hpp"
#include "spec2cli/commands.hpp"

namespace spec2::cli {
namespace {

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

void summarize(const std::string& name, const Config& config, const RunOptions& options, std::ostream& out) {
  if (name == "assemble") {
    const auto files = cmd_assemble(config, options);
    out << "wrote " << files.size() << " matrices file(s), d = " << files.front().matrices.dim() << "\n";
  } else if (name == "spec2") {
    const auto rows = cmd_spec2(config, options);
    out << "wrote " << rows.size() << " points to spec2.csv\n";
  } else if (name == "enclose") {
    const auto rows = cmd_enclose(config, options);
    out << "wrote " << rows.size() << " enclosures to enclosure.csv\n";
  } else if (name == "geometry") {
    const auto rep = cmd_geometry(config, options);
    out << "sample of " << rep.sample.size() << ": " << rep.arcs << " arcs, " << rep.regions << " regions, "
        << rep.grid_inside << "/" << rep.grid_total << " grid points in Q\n";
  } else if (name == "sweep") {
    const auto rep = cmd_sweep(config, options);
    out << "wrote " << rep.rows.size() << " levels to sweep.csv\n";
    for (const auto& f : rep.fits) {
      out << "  slope(" << f.quantity << ") = ";
      if (f.fit) {
        out << format_double(f.fit->slope) << "  r2 = " << format_double(f.fit->r2) << "\n";
      } else {
        out << "n/a\n";
      }
    }
  } else {
    const auto rows = cmd_gap(config, options);
    out << "wrote " << rows.size() << " rows to gap.csv\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order spectra of normal operators: assembly, solves, enclosures, geometry and rate sweeps."};
  app.name("spec2");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_eig;
  app.add_option("--config", config_path, "experiment configuration (JSON)")->required();
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "seed for randomized trial spaces (overrides the config)");
  app.add_option("--tol-eig", tol_eig, "accepted eigensolver backward error (overrides the config)")
      ->check(CLI::PositiveNumber);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"assemble", "write the Galerkin matrices M, N, B (and shifted blocks) as JSON"},
      {"spec2", "solve the quadratic pencil; CSV of points, optional SVG"},
      {"enclose", "interval and residual enclosures for every point"},
      {"geometry", "Q-region arcs, triple regions and a membership grid"},
      {"sweep", "per-level errors against gaps, with fitted log-log slopes"},
      {"gap", "subspace gaps between explicit bases or a target eigenspace and the trial spaces"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  std::ostringstream cli_out, cli_err;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? 0 : kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Config config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (tol_eig) config.tol_eig = *tol_eig;
    RunOptions options;
    options.out_dir = out_dir;
    options.threads = threads_from_env();
    std::filesystem::create_directories(options.out_dir);
    summarize(name, config, options, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "spec2 " << name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "spec2 " << name << ": " << e.what() << "\n";
    return is_numerical(e.code()) ? kNumerical : kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "spec2 " << name << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "spec2 " << name << ": unexpected failure: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace spec2::cli
