// SPDX-License-Identifier: Apache-2.0

#include "spec2cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <numbers>
#include <thread>

#include "spec2/enclosure.hpp"
#include "spec2/error.hpp"
#include "spec2/geometry.hpp"
#include "spec2/pencil.hpp"
#include "spec2cli/svg.hpp"

namespace spec2::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

EigOptions eig_options(const Config& c) {
  EigOptions o;
  o.tol_eig = c.tol_eig;
  return o;
}

std::string cell(std::optional<double> x) { return x ? format_double(*x) : std::string(); }
std::string cell(double x) { return std::isnan(x) ? std::string() : format_double(x); }

// Runs f(0..count-1) with at most `threads` tasks in flight. Results (and the
// first exception, by index) come back in index order whatever the timing.
template <class F>
auto parallel_map(std::size_t count, std::size_t threads, F f) -> std::vector<decltype(f(std::size_t{0}))> {
  using R = decltype(f(std::size_t{0}));
  std::vector<R> out;
  out.reserve(count);
  threads = std::max<std::size_t>(1, threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(f(i));
    return out;
  }
  for (std::size_t start = 0; start < count; start += threads) {
    std::vector<std::future<R>> batch;
    const std::size_t stop = std::min(count, start + threads);
    for (std::size_t i = start; i < stop; ++i) batch.push_back(std::async(std::launch::async, f, i));
    for (auto& fut : batch) fut.wait();
    for (auto& fut : batch) out.push_back(fut.get());
  }
  return out;
}

struct Level {
  std::size_t n = 0;
  double epsilon = kNaN;
  TrialSpace space;
  GalerkinMatrices g;
  Spec2Result result;
};

Spec2Result solve(const GalerkinMatrices& g, const Config& c) {
  return g.alpha ? spec2_shifted(g, eig_options(c)) : spec2::spec2(g, eig_options(c));
}

Level solve_level(const OperatorModel& model, const Config& c, std::size_t index, std::size_t n) {
  Level lv;
  lv.n = n;
  lv.epsilon = epsilon_at(c, index, n);
  lv.space = make_trial(model, c, index, n);
  lv.g = c.alpha ? assemble_shifted(model, lv.space, *c.alpha) : assemble(model, lv.space);
  lv.result = solve(lv.g, c);
  if (lv.n == 0) lv.n = lv.g.dim();
  return lv;
}

// Every level of the run: from the matrices file when one is given, else
// assembled from the model.
std::vector<Level> solve_levels(const Config& c, const RunOptions& options,
                                std::shared_ptr<const OperatorModel>* model_out = nullptr) {
  if (c.matrices) {
    const MatricesFile f = read_matrices(*c.matrices);
    Level lv;
    if (c.alpha) {
      if (!f.shifted) throw ConfigError("alpha is set but the matrices file has no shifted block");
      if (std::abs(*f.shifted->alpha - *c.alpha) > 0.0) throw ConfigError("alpha differs from the matrices file");
      lv.g = *f.shifted;
    } else {
      lv.g = f.matrices;
    }
    lv.result = solve(lv.g, c);
    lv.n = c.trial.n.value_or(lv.g.dim());
    if (model_out && c.model) *model_out = make_model(c);
    return {lv};
  }
  auto model = make_model(c);
  if (model_out) *model_out = model;
  const auto ns = levels(c);
  return parallel_map(ns.size(), options.threads, [&](std::size_t i) { return solve_level(*model, c, i, ns[i]); });
}

void arcs_sample_pairs(const std::vector<Complex>& sample, std::size_t k, std::vector<std::vector<Complex>>& arcs_out,
                       std::vector<std::array<std::size_t, 3>>* ids = nullptr) {
  // All pairs for small samples; neighbours in angle otherwise.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (sample.size() <= 16) {
    for (std::size_t i = 0; i < sample.size(); ++i) {
      for (std::size_t j = i + 1; j < sample.size(); ++j) pairs.emplace_back(i, j);
    }
  } else {
    std::vector<std::size_t> order(sample.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::arg(sample[a]) < std::arg(sample[b]); });
    for (std::size_t i = 0; i < order.size(); ++i) {
      pairs.emplace_back(std::min(order[i], order[(i + 1) % order.size()]),
                         std::max(order[i], order[(i + 1) % order.size()]));
    }
  }
  for (const auto& [i, j] : pairs) {
    if (sample[i] == sample[j]) continue;
    for (ArcSign s : {ArcSign::plus, ArcSign::minus}) {
      arcs_out.push_back(gamma_arc(sample[i], sample[j], s).sample(k));
      if (ids) ids->push_back({i, j, s == ArcSign::plus ? std::size_t{0} : std::size_t{1}});
    }
  }
}

std::vector<Complex> circle(Complex c, double r, std::size_t k = 96) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i <= k; ++i) out.push_back(c + std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k)));
  return out;
}

double default_radius(const OperatorModel& model, Complex z) {
  double nearest = std::numeric_limits<double>::infinity();
  for (Complex p : model.spectrum().sample()) {
    const double d = std::abs(p - z);
    if (d > 1e-12 * std::max(1.0, std::abs(z)) && std::abs(p - std::conj(z)) > 1e-12) nearest = std::min(nearest, d);
  }
  double r = std::isfinite(nearest) ? 0.5 * nearest : 0.5 * std::max(1.0, std::abs(z));
  if (z.imag() != 0.0) r = std::min(r, 0.5 * std::abs(z.imag()));
  if (z.imag() == 0.0 && std::abs(r - std::abs(z.real())) <= 1e-12 * std::max(1.0, r)) r *= 0.99;
  return r;
}

}  // namespace

std::size_t threads_from_env() {
  if (const char* env = std::getenv("SPEC2_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("SPEC2_THREADS must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<MatricesFile> cmd_assemble(const Config& c, const RunOptions& options) {
  const auto model = make_model(c);
  const auto ns = levels(c);
  auto files = parallel_map(ns.size(), options.threads, [&](std::size_t i) {
    MatricesFile f;
    const TrialSpace space = make_trial(*model, c, i, ns[i]);
    f.model = model->name();
    f.label = space.label;
    f.matrices = assemble(*model, space);
    if (c.alpha) f.shifted = assemble_shifted(*model, space, *c.alpha);
    return f;
  });
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string name = files.size() == 1 ? "matrices.json" : "matrices_n" + std::to_string(ns[i]) + ".json";
    write_matrices(options.out_dir / name, files[i]);
  }
  return files;
}

std::vector<PointRow> cmd_spec2(const Config& c, const RunOptions& options) {
  std::shared_ptr<const OperatorModel> model;
  auto lvls = solve_levels(c, options, &model);
  std::vector<PointRow> rows;
  CsvTable table("spec2-points", 1, {"n", "re", "im", "backward_error", "gamma"});
  std::vector<Complex> all;
  for (auto& lv : lvls) {
    for (const auto& target : c.clusters) cluster(lv.result, target.center, target.radius);
    for (const auto& p : lv.result.points) {
      PointRow r{lv.n, p.z, p.backward_error, std::nullopt};
      if (c.gamma) r.gamma = residual_gamma(lv.g, ComplexMatrix(p.v), p.z);
      table.add_row({std::to_string(r.n), format_double(r.z.real()), format_double(r.z.imag()),
                     format_double(r.backward_error), cell(r.gamma)});
      rows.push_back(r);
      all.push_back(p.z);
    }
  }
  table.write(options.out_dir / "spec2.csv");
  if (c.svg.enabled) {
    SvgPlot plot("second-order spectrum");
    if (model) {
      const SpectralData s = model->spectrum();
      if (c.svg.arcs && !s.essential_sample.empty()) {
        std::vector<std::vector<Complex>> arcs;
        arcs_sample_pairs(s.essential_sample, 48, arcs);
        for (std::size_t i = 0; i < arcs.size(); ++i) plot.add_polyline(arcs[i], "#bbbbbb", i == 0 ? "Q(ess) arcs" : "");
      }
      plot.add_points(s.sample(), "#1f77b4", 3.0, "known spectrum");
    }
    for (const auto& t : c.clusters) plot.add_polyline(circle(t.center, t.radius), "#2ca02c");
    plot.add_points(all, "#d62728", 2.5, "spec2 points");
    plot.write(options.out_dir / "spec2.svg");
  }
  return rows;
}

std::vector<EnclosureRow> cmd_enclose(const Config& c, const RunOptions& options) {
  std::shared_ptr<const OperatorModel> model;
  auto lvls = solve_levels(c, options, &model);
  if (!model) throw ConfigError("enclose needs a model for its spectral metadata");
  const SpectralData spectrum = model->spectrum();
  std::vector<EnclosureRow> rows;
  CsvTable table("spec2-enclosures", 1,
                 {"n", "re", "im", "basic_lo", "basic_hi", "sharp_lo", "sharp_hi", "window_a", "window_b", "gamma",
                  "verdict"});
  for (const auto& lv : lvls) {
    for (const auto& p : lv.result.points) {
      std::optional<double> gamma;
      if (c.gamma) gamma = residual_gamma(lv.g, ComplexMatrix(p.v), p.z);
      auto window = c.window;
      if (!window && spectrum.self_adjoint) window = auto_window(spectrum, p.z);
      const EnclosureReport rep = enclose(p.z, spectrum.self_adjoint, window, gamma);
      EnclosureRow r;
      r.n = lv.n;
      r.z = p.z;
      if (spectrum.self_adjoint) {
        r.basic_lo = rep.basic.lo;
        r.basic_hi = rep.basic.hi;
      }
      if (rep.sharpened) {
        r.sharp_lo = rep.sharpened->lo;
        r.sharp_hi = rep.sharpened->hi;
      }
      if (rep.window) {
        r.window_a = rep.window->first;
        r.window_b = rep.window->second;
      }
      r.gamma = rep.gamma;
      r.verdict = rep.verdict;
      table.add_row({std::to_string(r.n), format_double(p.z.real()), format_double(p.z.imag()), cell(r.basic_lo),
                     cell(r.basic_hi), cell(r.sharp_lo), cell(r.sharp_hi), cell(r.window_a), cell(r.window_b),
                     cell(r.gamma), r.verdict});
      rows.push_back(r);
    }
  }
  table.write(options.out_dir / "enclosure.csv");
  return rows;
}

GeometryReport cmd_geometry(const Config& c, const RunOptions& options) {
  GeometryReport rep;
  if (!c.geometry.sample.empty()) {
    rep.sample = SpectralSample(c.geometry.sample).points();
  } else if (c.model) {
    rep.sample = SpectralSample(make_model(c)->spectrum().sample()).points();
  } else {
    throw ConfigError("geometry needs geometry.sample or a model");
  }
  const SpectralSample sample(rep.sample);
  const std::size_t k = c.geometry.arc_points;
  SvgPlot plot("Q-region geometry");

  CsvTable points("spec2-geometry-points", 1, {"kind", "re", "im"});
  for (Complex l : rep.sample) points.add_row({"sample", format_double(l.real()), format_double(l.imag())});
  for (Complex l : rep.sample) {
    const Complex m = std::conj(l);
    if (std::none_of(rep.sample.begin(), rep.sample.end(), [&](Complex p) { return p == m; })) {
      points.add_row({"conjugate", format_double(m.real()), format_double(m.imag())});
    }
  }
  if (rep.sample.size() == 1) {
    // Q({l}) = {l, conj l}: no arcs, no regions.
    rep.q_points.push_back(rep.sample[0]);
    if (rep.sample[0].imag() != 0.0) rep.q_points.push_back(std::conj(rep.sample[0]));
  }
  points.write(options.out_dir / "geometry_points.csv");

  CsvTable arcs("spec2-geometry-arcs", 1, {"arc", "i", "j", "sign", "kind", "re", "im"});
  std::vector<std::vector<Complex>> arc_pts;
  std::vector<std::array<std::size_t, 3>> arc_ids;
  arcs_sample_pairs(rep.sample, k, arc_pts, &arc_ids);
  for (std::size_t a = 0; a < arc_pts.size(); ++a) {
    const auto [i, j, s] = arc_ids[a];
    const GammaArc arc = gamma_arc(rep.sample[i], rep.sample[j], s == 0 ? ArcSign::plus : ArcSign::minus);
    for (Complex p : arc_pts[a]) {
      arcs.add_row({std::to_string(a), std::to_string(i), std::to_string(j), s == 0 ? "+" : "-",
                    arc.kind == ArcKind::circle ? "circle" : "segment", format_double(p.real()),
                    format_double(p.imag())});
    }
  }
  rep.arcs = arc_pts.size();
  arcs.write(options.out_dir / "geometry_arcs.csv");

  CsvTable regions("spec2-geometry-regions", 1, {"region", "i", "j", "k", "sign", "re", "im"});
  std::vector<std::vector<Complex>> region_pts;
  if (rep.sample.size() >= 3 && rep.sample.size() <= 8) {
    for (std::size_t i = 0; i < rep.sample.size(); ++i) {
      for (std::size_t j = i + 1; j < rep.sample.size(); ++j) {
        for (std::size_t l = j + 1; l < rep.sample.size(); ++l) {
          for (ArcSign s : {ArcSign::plus, ArcSign::minus}) {
            std::vector<Complex> poly;
            try {
              poly = q_region_boundary(rep.sample[i], rep.sample[j], rep.sample[l], s, k);
            } catch (const Error& e) {
              if (e.code() != ErrorCode::degenerate_triple) throw;
              continue;
            }
            const std::size_t id = region_pts.size();
            for (Complex p : poly) {
              regions.add_row({std::to_string(id), std::to_string(i), std::to_string(j), std::to_string(l),
                               s == ArcSign::plus ? "+" : "-", format_double(p.real()), format_double(p.imag())});
            }
            poly.push_back(poly.front());
            region_pts.push_back(std::move(poly));
          }
        }
      }
    }
  }
  rep.regions = region_pts.size();
  regions.write(options.out_dir / "geometry_regions.csv");

  double cx = 0.0, reach = 0.0;
  for (Complex l : rep.sample) cx += l.real() / static_cast<double>(rep.sample.size());
  for (Complex l : rep.sample) reach = std::max(reach, std::abs(l - cx));
  const double h = c.geometry.grid_half_width > 0.0 ? c.geometry.grid_half_width : 1.25 * reach + 0.5;
  CsvTable grid("spec2-geometry-grid", 1, {"re", "im", "inside"});
  std::vector<Complex> inside_pts;
  const std::size_t m = c.geometry.grid_points;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const Complex z(cx - h + 2.0 * h * static_cast<double>(b) / static_cast<double>(m - 1),
                      h - 2.0 * h * static_cast<double>(a) / static_cast<double>(m - 1));
      const bool in = membership(sample, z).inside;
      grid.add_row({format_double(z.real()), format_double(z.imag()), in ? "1" : "0"});
      if (in) inside_pts.push_back(z);
      ++rep.grid_total;
    }
  }
  rep.grid_inside = inside_pts.size();
  grid.write(options.out_dir / "geometry_grid.csv");

  plot.add_points(inside_pts, "#c6dbef", 1.5, "grid points in Q");
  for (std::size_t i = 0; i < arc_pts.size(); ++i) plot.add_polyline(arc_pts[i], "#999999", i == 0 ? "gamma arcs" : "");
  for (std::size_t i = 0; i < region_pts.size(); ++i) {
    plot.add_polyline(region_pts[i], "#ff7f0e", i == 0 ? "triple regions" : "");
  }
  std::vector<Complex> conj;
  for (Complex l : rep.sample) conj.push_back(std::conj(l));
  plot.add_points(conj, "#777777", 3.0, "conjugates");
  plot.add_points(rep.sample, "#000000", 3.5, "sample");
  plot.write(options.out_dir / "geometry.svg");
  return rep;
}

SweepReport cmd_sweep(const Config& c, const RunOptions& options) {
  if (!c.model) throw ConfigError("sweep needs a model");
  if (c.schedule.size() < 4) throw ConfigError("sweep needs a schedule of at least 4 levels");
  if (!c.target) throw ConfigError("sweep needs a target eigenvalue");
  const auto model = make_model(c);
  const Complex target = *c.target;
  const ComplexMatrix eig = target_eigenspace(*model, target);
  const SpectralData spectrum = model->spectrum();
  const bool graph = spectrum.unbounded || c.alpha.has_value();
  const double radius = c.target_radius.value_or(default_radius(*model, target));

  SweepReport report;
  report.rows = parallel_map(c.schedule.size(), options.threads, [&](std::size_t i) {
    Level lv = solve_level(*model, c, i, c.schedule[i]);
    SweepRow row;
    row.n = lv.n;
    row.epsilon = lv.epsilon;
    row.delta = graph ? graph_norm_gap(*model, eig, lv.space) : subspace_gap(eig, lv.space.basis).forward;
    const Spec2Point* nearest = nullptr;
    for (const auto& p : lv.result.points) {
      if (!nearest || std::abs(p.z - target) < std::abs(nearest->z - target)) nearest = &p;
    }
    const std::size_t id = cluster(lv.result, target, radius);
    if (!nearest || lv.result.clusters[id].members.empty()) {
      throw Error(ErrorCode::target_not_found,
                  "no spec2 point within " + format_double(radius) + " of the target at n=" + std::to_string(lv.n));
    }
    row.dist = std::abs(nearest->z - target);
    if (spectrum.self_adjoint) row.re_error = std::abs(nearest->z.real() - target.real());
    const SpectralSubspace sub = subspace(lv.result, id);
    row.cluster_size = sub.count;
    row.gamma = residual_gamma(lv.g, sub.minus, nearest->z);
    row.subspace_gap = subspace_gap(lv.space.basis * sub.minus, eig).symmetric;
    return row;
  });

  CsvTable table("spec2-sweep", 1,
                 {"n", "epsilon", "delta", "dist", "re_error", "gamma", "subspace_gap", "cluster_size"});
  std::vector<double> xs, dist, re, gamma, gap;
  for (const auto& r : report.rows) {
    table.add_row({std::to_string(r.n), cell(r.epsilon), format_double(r.delta), format_double(r.dist),
                   cell(r.re_error), format_double(r.gamma), format_double(r.subspace_gap),
                   std::to_string(r.cluster_size)});
    xs.push_back(r.delta);
    dist.push_back(r.dist);
    re.push_back(r.re_error.value_or(kNaN));
    gamma.push_back(r.gamma);
    gap.push_back(r.subspace_gap);
  }
  table.write(options.out_dir / "sweep.csv");

  auto add_fit = [&](const std::string& name, const std::vector<double>& ys) {
    SweepFit f{name, std::nullopt};
    try {
      f.fit = fit_rate(xs, ys, c.exclude_floor);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::invalid_argument) throw;
    }
    report.fits.push_back(std::move(f));
  };
  add_fit("dist", dist);
  if (spectrum.self_adjoint) add_fit("re_error", re);
  add_fit("gamma", gamma);
  add_fit("subspace_gap", gap);

  CsvTable rates("spec2-sweep-rates", 1, {"quantity", "against", "slope", "intercept", "r2", "points"});
  for (const auto& f : report.fits) {
    rates.add_row({f.quantity, graph ? "graph_norm_gap" : "gap", f.fit ? format_double(f.fit->slope) : "",
                   f.fit ? format_double(f.fit->intercept) : "", f.fit ? format_double(f.fit->r2) : "",
                   f.fit ? std::to_string(f.fit->xs.size()) : "0"});
  }
  rates.write(options.out_dir / "sweep_rates.csv");

  if (c.svg.enabled) {
    SvgPlot plot("log10 error against log10 gap");
    const char* colors[] = {"#d62728", "#2ca02c", "#1f77b4", "#9467bd"};
    std::size_t ci = 0;
    for (const auto& f : report.fits) {
      if (!f.fit) continue;
      std::vector<Complex> pts, line;
      for (std::size_t i = 0; i < f.fit->xs.size(); ++i) {
        pts.emplace_back(std::log10(f.fit->xs[i]), std::log10(f.fit->ys[i]));
        line.emplace_back(std::log10(f.fit->xs[i]),
                          (f.fit->intercept + f.fit->slope * std::log(f.fit->xs[i])) / std::log(10.0));
      }
      const std::string color = colors[ci++ % 4];
      plot.add_points(pts, color, 2.5, f.quantity + " slope " + format_double(std::round(f.fit->slope * 1e4) / 1e4));
      plot.add_polyline(line, color);
    }
    plot.write(options.out_dir / "sweep.svg");
  }
  return report;
}

std::vector<GapRow> cmd_gap(const Config& c, const RunOptions& options) {
  std::vector<GapRow> rows;
  CsvTable table("spec2-gap", 1, {"n", "epsilon", "forward", "backward", "symmetric", "graph_norm"});
  auto to_matrix = [](const std::vector<std::vector<Complex>>& cols, const char* name) {
    const std::size_t r = cols.front().size();
    ComplexMatrix x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != r) throw ConfigError(std::string("gap.") + name + ": columns differ in length");
      for (std::size_t i = 0; i < r; ++i) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
    }
    return x;
  };
  if (!c.gap.u.empty() || !c.gap.v.empty()) {
    if (c.gap.u.empty() || c.gap.v.empty()) throw ConfigError("gap needs both u and v");
    const ComplexMatrix u = to_matrix(c.gap.u, "u");
    const ComplexMatrix v = to_matrix(c.gap.v, "v");
    if (u.rows() != v.rows()) throw ConfigError("gap: u and v live in different dimensions");
    const SubspaceGaps g = subspace_gap(u, v);
    rows.push_back({0, kNaN, g.forward, g.backward, g.symmetric, std::nullopt});
  } else {
    if (!c.model || !c.target) throw ConfigError("gap needs gap.u and gap.v, or a model with a target");
    const auto model = make_model(c);
    const ComplexMatrix eig = target_eigenspace(*model, *c.target);
    const bool graph = model->spectrum().unbounded;
    const auto ns = levels(c);
    rows = parallel_map(ns.size(), options.threads, [&](std::size_t i) {
      const TrialSpace space = make_trial(*model, c, i, ns[i]);
      const SubspaceGaps g = subspace_gap(eig, space.basis);
      GapRow r{ns[i], epsilon_at(c, i, ns[i]), g.forward, g.backward, g.symmetric, std::nullopt};
      if (graph) r.graph_norm = graph_norm_gap(*model, eig, space);
      return r;
    });
  }
  for (const auto& r : rows) {
    table.add_row({std::to_string(r.n), cell(r.epsilon), format_double(r.forward), format_double(r.backward),
                   format_double(r.symmetric), cell(r.graph_norm)});
  }
  table.write(options.out_dir / "gap.csv");
  return rows;
}

}  // namespace spec2::cli
