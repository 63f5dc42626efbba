// SPDX-License-Identifier: Apache-2.0

#include "spec2cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "spec2/error.hpp"
#include "spec2/models.hpp"

namespace spec2::cli {
namespace {

using nlohmann::json;

const std::vector<std::string> kTopLevel = {
    "model",   "matrices", "trial",         "schedule", "epsilon", "clusters", "alpha",    "target",
    "target_radius", "gamma", "exclude_floor", "window", "seed",   "tol_eig",  "svg",      "geometry",
    "gap"};

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

Complex to_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(where + ": expected a number or an [re, im] pair");
}

std::vector<Complex> to_complex_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected a list");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(to_complex(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<Complex>> to_columns(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected a list of columns");
  std::vector<std::vector<Complex>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(to_complex_list(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

double to_double(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + ": expected a number");
  return j.get<double>();
}

std::size_t to_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(where + ": unknown key '" + key + "'");
    }
  }
}

std::string registry_list() {
  std::string out;
  for (const auto& n : model_names()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

ModelSpec parse_model(const json& j) {
  if (!j.is_object()) fail("model: expected an object");
  check_keys(j, {"name", "working_dim", "diagonal", "growth"}, "model");
  ModelSpec m;
  if (!j.contains("name") || !j["name"].is_string()) fail("model.name is required (one of " + registry_list() + ")");
  m.name = j["name"].get<std::string>();
  const auto& names = model_names();
  if (std::find(names.begin(), names.end(), m.name) == names.end()) {
    fail("unknown model '" + m.name + "'; registered models: " + registry_list());
  }
  if (j.contains("working_dim")) m.working_dim = to_count(j["working_dim"], "model.working_dim");
  if (j.contains("diagonal")) m.diagonal = to_complex_list(j["diagonal"], "model.diagonal");
  if (j.contains("growth")) {
    if (!j["growth"].is_string()) fail("model.growth: expected a string");
    m.growth = j["growth"].get<std::string>();
  }
  if (m.name == "diagonal_normal" && m.diagonal.empty()) fail("diagonal_normal needs model.diagonal");
  return m;
}

std::string default_kind(const Config& c) {
  if (!c.model) return "full";
  const std::string& name = c.model->name;
  if (name == "bilateral_shift") return "section";
  if (name == "deflated_identity") return "deflated";
  if (name == "unbounded_diagonal") return c.epsilon_rule.empty() && c.epsilons.empty() ? "leading" : "perturbed";
  return "full";
}

}  // namespace

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"bilateral_shift", "deflated_identity", "diagonal_normal",
                                                 "unbounded_diagonal"};
  return names;
}

Config parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("config: expected a JSON object");
  check_keys(j, kTopLevel, "config");

  Config c;
  c.base_dir = base_dir;
  if (j.contains("model")) c.model = parse_model(j["model"]);
  if (j.contains("matrices")) {
    if (!j["matrices"].is_string()) fail("matrices: expected a path");
    c.matrices = base_dir / j["matrices"].get<std::string>();
  }
  if (j.contains("epsilon")) {
    const json& e = j["epsilon"];
    if (e.is_string()) {
      if (e.get<std::string>() != "1/n") fail("epsilon: the only rule is \"1/n\"");
      c.epsilon_rule = "1/n";
    } else if (e.is_number()) {
      c.epsilons = {e.get<double>()};
    } else if (e.is_array()) {
      for (std::size_t i = 0; i < e.size(); ++i) c.epsilons.push_back(to_double(e[i], "epsilon"));
    } else {
      fail("epsilon: expected a number, a list or \"1/n\"");
    }
  }
  if (j.contains("schedule")) {
    const json& s = j["schedule"];
    if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) c.schedule.push_back(to_count(s[i], "schedule"));
    } else if (s.is_object()) {
      check_keys(s, {"from", "to", "step"}, "schedule");
      if (!s.contains("from") || !s.contains("to")) fail("schedule: needs from and to");
      const std::size_t from = to_count(s["from"], "schedule.from");
      const std::size_t to = to_count(s["to"], "schedule.to");
      const std::size_t step = s.contains("step") ? to_count(s["step"], "schedule.step") : 1;
      if (step == 0) fail("schedule.step must be positive");
      for (std::size_t n = from; n <= to; n += step) c.schedule.push_back(n);
    } else {
      fail("schedule: expected a list or {from, to, step}");
    }
    for (std::size_t i = 1; i < c.schedule.size(); ++i) {
      if (c.schedule[i] <= c.schedule[i - 1]) fail("schedule must be strictly increasing");
    }
    if (c.epsilons.size() > 1 && c.epsilons.size() != c.schedule.size()) {
      fail("epsilon list needs one value per schedule entry");
    }
  }
  for (double e : c.epsilons) {
    if (!(e > 0.0 && e < 1.0)) fail("epsilon values must lie in (0, 1)");
  }

  if (j.contains("trial")) {
    const json& t = j["trial"];
    if (!t.is_object()) fail("trial: expected an object");
    check_keys(t, {"kind", "n", "indices", "dim", "basis"}, "trial");
    if (t.contains("kind")) {
      if (!t["kind"].is_string()) fail("trial.kind: expected a string");
      c.trial.kind = t["kind"].get<std::string>();
    }
    if (t.contains("n")) c.trial.n = to_count(t["n"], "trial.n");
    if (t.contains("indices")) {
      if (!t["indices"].is_array()) fail("trial.indices: expected a list");
      for (const auto& v : t["indices"]) c.trial.indices.push_back(to_count(v, "trial.indices"));
    }
    if (t.contains("dim")) c.trial.dim = to_count(t["dim"], "trial.dim");
    if (t.contains("basis")) c.trial.basis = to_columns(t["basis"], "trial.basis");
  }
  if (c.trial.kind.empty()) c.trial.kind = default_kind(c);
  static const std::vector<std::string> kinds = {"section", "deflated", "leading", "perturbed",
                                                 "coordinates", "full", "random", "basis"};
  if (std::find(kinds.begin(), kinds.end(), c.trial.kind) == kinds.end()) {
    fail("trial.kind '" + c.trial.kind + "' is not one of section, deflated, leading, perturbed, coordinates, full, "
         "random, basis");
  }

  if (j.contains("clusters")) {
    if (!j["clusters"].is_array()) fail("clusters: expected a list");
    for (const auto& e : j["clusters"]) {
      if (!e.is_object()) fail("clusters: expected objects");
      check_keys(e, {"center", "radius"}, "clusters[]");
      if (!e.contains("center") || !e.contains("radius")) fail("clusters[]: needs center and radius");
      ClusterTarget t{to_complex(e["center"], "clusters[].center"), to_double(e["radius"], "clusters[].radius")};
      if (!(t.radius > 0.0)) fail("cluster radii must be positive");
      c.clusters.push_back(t);
    }
  }
  if (j.contains("alpha")) c.alpha = to_double(j["alpha"], "alpha");
  if (j.contains("target")) c.target = to_complex(j["target"], "target");
  if (j.contains("target_radius")) {
    c.target_radius = to_double(j["target_radius"], "target_radius");
    if (!(*c.target_radius > 0.0)) fail("target_radius must be positive");
  }
  if (j.contains("gamma")) {
    if (!j["gamma"].is_boolean()) fail("gamma: expected true or false");
    c.gamma = j["gamma"].get<bool>();
  }
  if (j.contains("exclude_floor")) {
    if (!j["exclude_floor"].is_boolean()) fail("exclude_floor: expected true or false");
    c.exclude_floor = j["exclude_floor"].get<bool>();
  }
  if (j.contains("window")) {
    const json& w = j["window"];
    if (!w.is_array() || w.size() != 2) fail("window: expected [a, b]");
    c.window = std::make_pair(to_double(w[0], "window[0]"), to_double(w[1], "window[1]"));
    if (!(c.window->first < c.window->second)) fail("window needs a < b");
  }
  if (j.contains("seed")) c.seed = to_count(j["seed"], "seed");
  if (j.contains("tol_eig")) {
    c.tol_eig = to_double(j["tol_eig"], "tol_eig");
    if (!(c.tol_eig > 0.0)) fail("tol_eig must be positive");
  }
  if (j.contains("svg")) {
    const json& s = j["svg"];
    if (s.is_boolean()) {
      c.svg.enabled = s.get<bool>();
    } else if (s.is_object()) {
      check_keys(s, {"arcs"}, "svg");
      c.svg.enabled = true;
      if (s.contains("arcs")) c.svg.arcs = s["arcs"].get<bool>();
    } else {
      fail("svg: expected a boolean or an object");
    }
  }
  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    if (!g.is_object()) fail("geometry: expected an object");
    check_keys(g, {"sample", "half_width", "grid_points", "arc_points"}, "geometry");
    if (g.contains("sample")) c.geometry.sample = to_complex_list(g["sample"], "geometry.sample");
    if (g.contains("half_width")) c.geometry.grid_half_width = to_double(g["half_width"], "geometry.half_width");
    if (g.contains("grid_points")) c.geometry.grid_points = to_count(g["grid_points"], "geometry.grid_points");
    if (g.contains("arc_points")) c.geometry.arc_points = to_count(g["arc_points"], "geometry.arc_points");
    if (c.geometry.grid_points < 2 || c.geometry.arc_points < 2) fail("geometry needs at least 2 grid and arc points");
  }
  if (j.contains("gap")) {
    const json& g = j["gap"];
    if (!g.is_object()) fail("gap: expected an object");
    check_keys(g, {"u", "v"}, "gap");
    if (g.contains("u")) c.gap.u = to_columns(g["u"], "gap.u");
    if (g.contains("v")) c.gap.v = to_columns(g["v"], "gap.v");
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::vector<std::size_t> levels(const Config& config) {
  if (!config.schedule.empty()) return config.schedule;
  return {config.trial.n.value_or(0)};
}

double epsilon_at(const Config& config, std::size_t index, std::size_t n) {
  if (config.epsilon_rule == "1/n") return 1.0 / static_cast<double>(n);
  if (config.epsilons.size() == 1) return config.epsilons[0];
  if (index < config.epsilons.size()) return config.epsilons[index];
  return std::numeric_limits<double>::quiet_NaN();
}

std::shared_ptr<const OperatorModel> make_model(const Config& config) {
  if (!config.model) fail("config has no model");
  const ModelSpec& m = *config.model;
  std::size_t top = 0;
  for (std::size_t n : levels(config)) top = std::max(top, n);
  for (std::size_t i : config.trial.indices) top = std::max(top, i + 1);
  for (const auto& col : config.trial.basis) top = std::max(top, col.size());

  auto need = [&](const char* what) {
    if (top == 0) fail(std::string(what) + " needs trial.n or a schedule");
  };
  try {
    if (m.name == "bilateral_shift") {
      std::size_t w = m.working_dim.value_or(0);
      if (w == 0) {
        need("bilateral_shift");
        w = config.trial.kind == "section" ? 2 * top + 3 : top + 2;
        if (w % 2 == 0) ++w;
      }
      return make_bilateral_shift(w);
    }
    if (m.name == "deflated_identity") {
      std::size_t w = m.working_dim.value_or(0);
      if (w == 0) {
        need("deflated_identity");
        w = top + 2;
      }
      return make_deflated_identity(w);
    }
    if (m.name == "diagonal_normal") {
      if (m.working_dim && *m.working_dim != m.diagonal.size()) {
        fail("diagonal_normal: working_dim must equal the diagonal length");
      }
      return make_diagonal_normal(m.diagonal);
    }
    std::size_t w = m.working_dim.value_or(0);
    if (w == 0) {
      need("unbounded_diagonal");
      w = top + 2;
    }
    return make_unbounded_diagonal(w, m.growth);
  } catch (const spec2::Error& e) {
    fail(std::string("model: ") + e.what());
  }
}

TrialSpace make_trial(const OperatorModel& model, const Config& config, std::size_t index, std::size_t n) {
  const std::string& kind = config.trial.kind;
  const std::size_t w = model.working_dim();
  const double eps = epsilon_at(config, index, n);
  auto require_eps = [&] {
    if (std::isnan(eps)) fail("trial kind '" + kind + "' needs an epsilon");
  };
  if (kind == "section") {
    const auto* shift = dynamic_cast<const BilateralShift*>(&model);
    if (!shift) fail("trial kind 'section' needs the bilateral_shift model");
    return shift->section(n);
  }
  if (kind == "deflated") {
    const auto* d = dynamic_cast<const DeflatedIdentity*>(&model);
    if (!d) fail("trial kind 'deflated' needs the deflated_identity model");
    require_eps();
    return d->trial_space(n, eps);
  }
  if (kind == "perturbed") {
    const auto* u = dynamic_cast<const UnboundedDiagonal*>(&model);
    if (!u) fail("trial kind 'perturbed' needs the unbounded_diagonal model");
    require_eps();
    return u->perturbed_space(n, eps);
  }
  if (kind == "leading") {
    if (n > w) fail("leading space larger than the working dimension");
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < n; ++k) idx[k] = k;
    return coordinate_space(w, idx, "n=" + std::to_string(n));
  }
  if (kind == "coordinates") return coordinate_space(w, config.trial.indices, "coordinates");
  if (kind == "full") {
    std::vector<std::size_t> idx(w);
    for (std::size_t k = 0; k < w; ++k) idx[k] = k;
    return coordinate_space(w, idx, "full");
  }
  if (kind == "random") {
    const std::size_t d = config.trial.dim != 0 ? config.trial.dim : n;
    const std::size_t lo = model.margin();
    const std::size_t hi = w - std::min(w, model.margin());
    if (d == 0 || hi <= lo || d > hi - lo) fail("random trial space: dim must lie in [1, usable window]");
    std::mt19937_64 rng(config.seed + index);
    std::normal_distribution<double> gauss;
    TrialSpace space;
    space.basis = ComplexMatrix::Zero(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(d));
    for (Eigen::Index c = 0; c < space.basis.cols(); ++c) {
      for (std::size_t r = lo; r < hi; ++r) space.basis(static_cast<Eigen::Index>(r), c) = Complex(gauss(rng), gauss(rng));
    }
    space.label = "random d=" + std::to_string(d);
    return space;
  }
  // basis
  TrialSpace space;
  space.basis = ComplexMatrix::Zero(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(config.trial.basis.size()));
  for (std::size_t c = 0; c < config.trial.basis.size(); ++c) {
    const auto& col = config.trial.basis[c];
    if (col.size() != w) fail("trial.basis columns need " + std::to_string(w) + " entries");
    for (std::size_t r = 0; r < w; ++r) space.basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
  }
  space.label = "basis";
  return space;
}

ComplexMatrix target_eigenspace(const OperatorModel& model, Complex z) {
  const double tol = 1e-12 * std::max(1.0, std::abs(z));
  std::vector<std::size_t> hits;
  if (const auto* d = dynamic_cast<const DeflatedIdentity*>(&model)) {
    if (std::abs(z) > tol) fail("deflated_identity: only 0 has a finite-dimensional eigenspace");
    return d->eigenvector_zero();
  }
  if (const auto* d = dynamic_cast<const DiagonalNormal*>(&model)) {
    for (std::size_t k = 0; k < d->diagonal().size(); ++k) {
      const Complex v = d->diagonal()[k];
      if (std::abs(v - z) <= tol || std::abs(v - std::conj(z)) <= tol) hits.push_back(k);
    }
  } else if (const auto* u = dynamic_cast<const UnboundedDiagonal*>(&model)) {
    for (std::size_t k = 1; k <= u->working_dim(); ++k) {
      if (std::abs(u->value(k) - z) <= tol) hits.push_back(k - 1);
    }
  } else {
    fail(model.name() + " has no eigenvalues to target");
  }
  if (hits.empty()) fail("target is not an eigenvalue of " + model.name());
  return coordinate_space(model.working_dim(), hits).basis;
}

}  // namespace spec2::cli
