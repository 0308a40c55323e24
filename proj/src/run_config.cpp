#include "pfc/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "pfc/errors.hpp"
#include "pfc/snapshot.hpp"

namespace pfc {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Aabpg2: return "aabpg2";
    case SolverKind::Aabpg4: return "aabpg4";
    case SolverKind::Newton: return "newton";
    case SolverKind::Sis: return "sis";
    case SolverKind::Ssis1: return "ssis1";
    case SolverKind::Ssis2: return "ssis2";
    case SolverKind::Hybrid: return "hybrid";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& name) {
  for (SolverKind k : {SolverKind::Aabpg2, SolverKind::Aabpg4, SolverKind::Newton, SolverKind::Sis, SolverKind::Ssis1,
                       SolverKind::Ssis2, SolverKind::Hybrid})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown solver method '" + name + "'");
}

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&key](const char* a) { return key == a; }))
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  throw ConfigError(std::string("'") + key + "' must be a number");
}

int integer(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return obj.at(key).get<int>();
}

Eigen::MatrixXd matrix(const json& v, const char* what) {
  if (!v.is_array() || v.empty() || !v[0].is_array()) throw ConfigError(std::string(what) + " must be a nested array");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ConfigError(std::string(what) + " rows must have equal length");
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!row[static_cast<std::size_t>(j)].is_number()) throw ConfigError(std::string(what) + " entries must be numbers");
      m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
  }
  return m;
}

ModelSpec parse_model(const json& m) {
  if (!m.is_object() || !m.contains("type")) throw ConfigError("model needs a 'type'");
  const std::string type = m.at("type").get<std::string>();
  if (type == "lb" || type == "landau-brazovskii") {
    check_keys(m, "model", {"type", "xi", "tau", "gamma"});
    return ModelSpec::landau_brazovskii(number(m, "xi", 1.0), number(m, "tau", 0.0), number(m, "gamma", 0.0));
  }
  if (type == "lp" || type == "lifshitz-petrich") {
    check_keys(m, "model", {"type", "c", "q1", "q2", "epsilon", "kappa"});
    return ModelSpec::lifshitz_petrich(number(m, "c", 1.0), number(m, "q1", 1.0),
                                       number(m, "q2", 2.0 * std::cos(std::numbers::pi / 12.0)),
                                       number(m, "epsilon", 0.0), number(m, "kappa", 0.0));
  }
  throw ConfigError("unknown model type '" + type + "'");
}

LatticeSpec parse_lattice(const json& l, double& padding) {
  check_keys(l, "lattice", {"modes", "basis", "basis_scale", "domain", "projection", "padding"});
  if (!l.contains("modes") || !l.at("modes").is_array()) throw ConfigError("lattice needs a 'modes' array");
  std::vector<int> modes;
  for (const json& m : l.at("modes")) {
    if (!m.is_number_integer()) throw ConfigError("lattice modes must be integers");
    modes.push_back(m.get<int>());
  }
  const int n = static_cast<int>(modes.size());
  const int given = static_cast<int>(l.contains("basis")) + static_cast<int>(l.contains("basis_scale")) +
                    static_cast<int>(l.contains("domain"));
  if (given > 1) throw ConfigError("give only one of lattice 'basis', 'basis_scale' or 'domain'");

  LatticeSpec spec;
  if (l.contains("domain")) {
    std::vector<double> lengths;
    for (const json& v : l.at("domain")) {
      if (!v.is_number()) throw ConfigError("lattice domain lengths must be numbers");
      lengths.push_back(v.get<double>());
    }
    if (static_cast<int>(lengths.size()) != n) throw ConfigError("lattice domain needs one length per axis");
    for (double L : lengths)
      if (!(L > 0.0)) throw ConfigError("lattice domain lengths must be positive");
    spec = LatticeSpec::periodic_box(modes, lengths);
  } else if (l.contains("basis")) {
    spec = LatticeSpec::periodic(modes, 1.0);
    spec.basis = matrix(l.at("basis"), "lattice basis");
  } else {
    spec = LatticeSpec::periodic(modes, number(l, "basis_scale", 1.0));
  }
  if (l.contains("projection")) {
    spec.projection = matrix(l.at("projection"), "lattice projection");
    spec.physical_dimension = static_cast<int>(spec.projection.rows());
  }
  padding = number(l, "padding", 2.0);
  spec.validate();
  return spec;
}

std::vector<SeedEntry> seed_entries(const json& entries, int dimension) {
  std::vector<SeedEntry> out;
  if (!entries.is_array()) throw ConfigError("seed entries must be an array");
  for (const json& e : entries) {
    if (!e.is_array() || static_cast<int>(e.size()) != dimension + 2)
      throw ConfigError("each seed entry needs n indices followed by re and im");
    SeedEntry s;
    for (int j = 0; j < dimension; ++j) {
      if (!e[static_cast<std::size_t>(j)].is_number_integer()) throw ConfigError("seed indices must be integers");
      s.h.push_back(e[static_cast<std::size_t>(j)].get<int>());
    }
    s.amplitude = Complex(e[static_cast<std::size_t>(dimension)].get<double>(),
                          e[static_cast<std::size_t>(dimension + 1)].get<double>());
    out.push_back(std::move(s));
  }
  return out;
}

InitialSpec parse_initial(const json& i, int dimension) {
  if (!i.is_object() || !i.contains("type")) throw ConfigError("initial needs a 'type'");
  const std::string type = i.at("type").get<std::string>();
  InitialSpec spec;
  if (type == "seeds") {
    check_keys(i, "initial", {"type", "file", "entries"});
    if (i.contains("file") == i.contains("entries")) throw ConfigError("seed initializer needs exactly one of 'file' or 'entries'");
    spec.kind = InitialSpec::Kind::Seeds;
    spec.seeds = i.contains("file") ? read_seed_file(i.at("file").get<std::string>(), dimension)
                                    : seed_entries(i.at("entries"), dimension);
  } else if (type == "random") {
    check_keys(i, "initial", {"type", "scale"});
    spec.kind = InitialSpec::Kind::Random;
    spec.scale = number(i, "scale", 0.1);
    if (!(spec.scale >= 0.0)) throw ConfigError("random initializer scale must be non-negative");
  } else if (type == "snapshot") {
    check_keys(i, "initial", {"type", "path"});
    if (!i.contains("path")) throw ConfigError("snapshot initializer needs a 'path'");
    spec.kind = InitialSpec::Kind::Snapshot;
    spec.snapshot = i.at("path").get<std::string>();
    if (!fs::exists(spec.snapshot)) throw ConfigError("snapshot " + spec.snapshot.string() + " does not exist");
  } else {
    throw ConfigError("unknown initializer type '" + type + "'");
  }
  return spec;
}

BbVariant parse_bb(const std::string& s) {
  if (s == "long") return BbVariant::Long;
  if (s == "short") return BbVariant::Short;
  if (s == "alternating") return BbVariant::Alternating;
  throw ConfigError("unknown BB variant '" + s + "'");
}

AabpgConfig parse_aabpg(const json& a, AabpgConfig c) {
  check_keys(a, "solver.aabpg",
             {"alpha0", "alpha_min", "alpha_max", "rho", "w_max", "restart_c", "linesearch_eta", "bb", "kernel_a",
              "kernel_b"});
  c.alpha0 = number(a, "alpha0", c.alpha0);
  c.alpha_min = number(a, "alpha_min", c.alpha_min);
  c.alpha_max = number(a, "alpha_max", c.alpha_max);
  c.rho = number(a, "rho", c.rho);
  c.w_max = number(a, "w_max", c.w_max);
  c.restart_c = number(a, "restart_c", c.restart_c);
  c.linesearch_eta = number(a, "linesearch_eta", c.linesearch_eta);
  if (a.contains("bb")) c.bb = parse_bb(a.at("bb").get<std::string>());
  if (a.contains("kernel_a") || a.contains("kernel_b"))
    c.kernel = BregmanKernel::p4(number(a, "kernel_a", c.kernel.a), number(a, "kernel_b", c.kernel.b));
  return c;
}

BaselineConfig parse_baseline(const json& b, BaselineConfig c) {
  // Common alpha/stabilization, then an optional block named after the scheme.
  check_keys(b, "solver.baseline", {"alpha", "stabilization", "sis", "ssis1", "ssis2"});
  c.alpha = number(b, "alpha", c.alpha);
  c.stabilization = number(b, "stabilization", c.stabilization);
  const std::string name = to_string(c.scheme);
  if (b.contains(name)) {
    const json& o = b.at(name);
    check_keys(o, "solver.baseline." + name, {"alpha", "stabilization"});
    c.alpha = number(o, "alpha", c.alpha);
    c.stabilization = number(o, "stabilization", c.stabilization);
  }
  return c;
}

NewtonConfig parse_newton(const json& n, NewtonConfig c) {
  check_keys(n, "solver.newton",
             {"c1", "c2", "mu_max", "tau", "rho", "nu", "delta_factor", "precondition", "lanczos_steps",
              "lanczos_slack", "mu_retries", "max_backtracks", "pcg_max_iterations"});
  c.c1 = number(n, "c1", c.c1);
  c.c2 = number(n, "c2", c.c2);
  c.mu_max = number(n, "mu_max", c.mu_max);
  c.tau = number(n, "tau", c.tau);
  c.rho = number(n, "rho", c.rho);
  c.nu = number(n, "nu", c.nu);
  c.delta_factor = number(n, "delta_factor", c.delta_factor);
  if (n.contains("precondition")) c.precondition = n.at("precondition").get<bool>();
  c.lanczos_steps = integer(n, "lanczos_steps", c.lanczos_steps);
  c.lanczos_slack = number(n, "lanczos_slack", c.lanczos_slack);
  c.mu_retries = integer(n, "mu_retries", c.mu_retries);
  c.max_backtracks = integer(n, "max_backtracks", c.max_backtracks);
  c.pcg_max_iterations = integer(n, "pcg_max_iterations", c.pcg_max_iterations);
  return c;
}

SolverSpec parse_solver(const json& s, const ModelSpec& model) {
  check_keys(s, "solver", {"method", "tolerance", "max_iterations", "aabpg", "baseline", "newton", "hybrid"});
  SolverSpec spec;
  spec.kind = parse_solver_kind(s.value("method", std::string("aabpg2")));
  const double tol = number(s, "tolerance", 1e-9);
  const int max_it = integer(s, "max_iterations", 10000);

  AabpgConfig a;
  a.tolerance = tol;
  a.max_iterations = max_it;
  if (spec.kind == SolverKind::Aabpg4) a.kernel = default_p4_kernel(bulk_polynomial(model).c4);
  spec.aabpg = parse_aabpg(s.value("aabpg", json::object()), a);
  if (spec.kind == SolverKind::Aabpg2) spec.aabpg.kernel = BregmanKernel::p2();

  BaselineConfig b;
  b.tolerance = tol;
  b.max_iterations = max_it;
  if (spec.kind == SolverKind::Ssis1) b.scheme = BaselineScheme::SSIS1;
  if (spec.kind == SolverKind::Ssis2) b.scheme = BaselineScheme::SSIS2;
  spec.baseline = parse_baseline(s.value("baseline", json::object()), b);

  NewtonConfig n;
  n.tolerance = tol;
  n.max_iterations = max_it;
  spec.newton = parse_newton(s.value("newton", json::object()), n);

  HybridConfig h;
  h.tolerance = tol;
  h.max_iterations = max_it;
  h.newton = spec.newton;
  const json hj = s.value("hybrid", json::object());
  check_keys(hj, "solver.hybrid", {"first", "energy_threshold", "gradient_threshold"});
  const std::string first = hj.value("first", std::string("aabpg2"));
  h.aabpg = spec.aabpg;
  if (first == "aabpg2") {
    h.first = FirstStage::AabpgP2;
    h.aabpg.kernel = BregmanKernel::p2();
  } else if (first == "aabpg4") {
    h.first = FirstStage::AabpgP4;
    if (h.aabpg.kernel.kind != BregmanKernel::Kind::P4) h.aabpg.kernel = default_p4_kernel(bulk_polynomial(model).c4);
  } else {
    h.first = FirstStage::Baseline;
    b.scheme = parse_baseline_scheme(first);
    h.baseline = parse_baseline(s.value("baseline", json::object()), b);
  }
  h.rule.energy = number(hj, "energy_threshold", 0.0);
  h.rule.gradient = number(hj, "gradient_threshold", 1e-3);
  spec.hybrid = h;
  return spec;
}

void resolve_paths(json& doc, const fs::path& base) {
  if (!doc.contains("initial") || !doc["initial"].is_object()) return;
  json& init = doc["initial"];
  for (const char* key : {"file", "path"}) {
    if (init.contains(key) && init[key].is_string()) {
      fs::path p = init[key].get<std::string>();
      if (p.is_relative()) init[key] = (base / p).lexically_normal().string();
    }
  }
}

json read_json_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  lattice.validate();
  if (!(padding >= 1.0)) throw ConfigError("padding must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (initial.kind == InitialSpec::Kind::Snapshot && !fs::exists(initial.snapshot))
    throw ConfigError("snapshot " + initial.snapshot.string() + " does not exist");
  switch (solver.kind) {
    case SolverKind::Aabpg2:
    case SolverKind::Aabpg4: solver.aabpg.validate(); break;
    case SolverKind::Newton: solver.newton.validate(); break;
    case SolverKind::Sis:
    case SolverKind::Ssis1:
    case SolverKind::Ssis2: solver.baseline.validate(); break;
    case SolverKind::Hybrid: solver.hybrid.validate(); break;
  }
}

fs::path data_directory() { return PFC_DATA_DIR; }

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  const fs::path dir = data_directory() / "presets";
  if (fs::is_directory(dir))
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".json") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

namespace {

json preset_json(const std::string& name, int depth) {
  if (depth > 8) throw ConfigError("preset chain too deep at '" + name + "'");
  const fs::path path = data_directory() / "presets" / (name + ".json");
  if (!fs::exists(path)) throw ConfigError("unknown preset '" + name + "'");
  json doc = read_json_file(path);
  resolve_paths(doc, data_directory());
  if (doc.contains("preset")) {
    json base = preset_json(doc.at("preset").get<std::string>(), depth + 1);
    doc.erase("preset");
    doc = compose(std::move(base), doc);
  }
  return doc;
}

}  // namespace

json preset_json(const std::string& name) { return preset_json(name, 0); }

json config_file_json(const fs::path& path) {
  json doc = read_json_file(path);
  if (!doc.is_object()) throw ConfigError("config " + path.string() + " must hold a JSON object");
  resolve_paths(doc, path.parent_path());
  return doc;
}

json compose(json base, const json& patch) {
  base.merge_patch(patch);
  return base;
}

RunConfig parse_run_config(const json& input) {
  json doc = input;
  RunConfig config;
  if (doc.contains("preset")) {
    config.preset = doc.at("preset").get<std::string>();
    json base = preset_json(config.preset);
    base.erase("preset");
    doc = compose(std::move(base), doc);
  }
  try {
    check_keys(doc, "config", {"preset", "description", "model", "lattice", "initial", "solver", "output", "seed", "threads"});
    if (!doc.contains("model")) throw ConfigError("config needs a 'model'");
    if (!doc.contains("lattice")) throw ConfigError("config needs a 'lattice'");
    config.model = parse_model(doc.at("model"));
    config.lattice = parse_lattice(doc.at("lattice"), config.padding);
    config.initial = parse_initial(doc.value("initial", json{{"type", "random"}}), config.lattice.dimension);
    config.solver = parse_solver(doc.value("solver", json::object()), config.model);
    config.output = doc.value("output", std::string("out"));
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    config.threads = integer(doc, "threads", 1);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  config.source = doc;
  config.validate();
  return config;
}

RunConfig load_run_config(const std::optional<fs::path>& file, const std::optional<std::string>& preset) {
  json doc = file ? config_file_json(*file) : json::object();
  if (preset) doc["preset"] = *preset;
  if (doc.empty()) throw ConfigError("give a config file or a preset");
  return parse_run_config(doc);
}

std::vector<SeedEntry> read_seed_file(const fs::path& path, int dimension) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open seed file " + path.string());
  std::vector<SeedEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    std::istringstream ss(line);
    std::vector<double> values;
    for (double v; ss >> v;) values.push_back(v);
    if (!ss.eof()) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": not a number");
    if (values.empty()) continue;
    if (static_cast<int>(values.size()) != dimension + 2)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(dimension + 2) +
                        " values");
    SeedEntry s;
    for (int j = 0; j < dimension; ++j) {
      const double h = values[static_cast<std::size_t>(j)];
      if (h != std::round(h)) throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": non-integer index");
      s.h.push_back(static_cast<int>(h));
    }
    s.amplitude = Complex(values[static_cast<std::size_t>(dimension)], values[static_cast<std::size_t>(dimension + 1)]);
    out.push_back(std::move(s));
  }
  return out;
}

FourierField place_seeds(const IndexGrid& grid, const std::vector<SeedEntry>& seeds) {
  FourierField x = FourierField::Zero(grid.size());
  std::vector<std::uint8_t> given(static_cast<std::size_t>(grid.size()), 0);
  for (const SeedEntry& s : seeds) {
    if (static_cast<int>(s.h.size()) != grid.dimension()) throw ConfigError("seed index has the wrong dimension");
    const Eigen::Index i = grid.find(s.h);
    if (i < 0) throw ConfigError("seed index outside the truncation box");
    if (given[static_cast<std::size_t>(i)] && std::abs(x(i) - s.amplitude) > 1e-12)
      throw ConfigError("seed index given twice with different amplitudes");
    x(i) = s.amplitude;
    given[static_cast<std::size_t>(i)] = 1;
  }
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!given[static_cast<std::size_t>(i)]) continue;
    const Eigen::Index j = grid.negated(i);
    if (given[static_cast<std::size_t>(j)]) {
      if (std::abs(x(j) - std::conj(x(i))) > 1e-12) throw ConfigError("seed pair h, -h is not conjugate-symmetric");
    } else {
      x(j) = std::conj(x(i));
    }
  }
  return x;
}

FourierField build_initial(const RunConfig& config, const IndexGrid& grid) {
  switch (config.initial.kind) {
    case InitialSpec::Kind::Seeds: return project_mass_zero(place_seeds(grid, config.initial.seeds));
    case InitialSpec::Kind::Random: {
      std::mt19937_64 rng(config.seed);
      std::uniform_real_distribution<double> u(-config.initial.scale, config.initial.scale);
      FourierField x(grid.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double re = u(rng);
        const double im = u(rng);
        x(i) = Complex(re, im);
      }
      return project_mass_zero(hermitian_symmetrize(grid, x));
    }
    case InitialSpec::Kind::Snapshot: {
      Snapshot snap = read_snapshot(config.initial.snapshot, grid.spec());
      return project_mass_zero(std::move(snap.field));
    }
  }
  throw ConfigError("unknown initializer");
}

}  // namespace pfc
