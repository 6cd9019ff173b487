#pragma once

// Config-driven front end: JSON config -> scene -> CSV table.
// Needs json.hpp and CLI11.hpp on the include path.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nanoforce/casimir_polder.hpp"
#include "nanoforce/friction.hpp"
#include "nanoforce/parallel.hpp"
#include "nanoforce/validation.hpp"

#ifndef NANOFORCE_VERSION
#define NANOFORCE_VERSION "0.0.0"
#endif

namespace nanoforce::cli {

using json = nlohmann::json;

enum ExitCode : int { ok = 0, validation_failed = 1, config_error = 2, not_converged = 3 };

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key(key) {}
  std::string key;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct SweepSpec {
  std::string axis;  // z | T | v | zeta
  double min = 0.0;
  double max = 0.0;
  int points = 1;
  bool log = true;

  std::vector<double> values() const {
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
      const double t = points == 1 ? 0.0 : i / double(points - 1);
      out.push_back(log ? min * std::pow(max / min, t) : min + (max - min) * t);
    }
    if (!out.empty()) out.back() = points == 1 ? min : max;
    return out;
  }
};

struct RunConfig {
  std::optional<double> temperature;
  std::optional<double> distance;
  std::optional<double> speed;
  Vec3 direction{0.0, 0.0, 1.0};
  std::optional<PermittivityModel> wall;
  std::optional<PolarizabilityModel> particle;
  NumericsPolicy policy;
  CpOptions cp;
  std::optional<SweepSpec> sweep;
  std::uint64_t digest = 0;
};

namespace detail {

//! Walks one JSON object, rejecting keys that were never asked for.
class Object {
 public:
  Object(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) {
    allowed_.insert(k);
    return j_.contains(k);
  }

  double number(const std::string& k) {
    if (!has(k)) throw ConfigError(key(k), "required");
    const json& v = j_.at(k);
    if (!v.is_number()) throw ConfigError(key(k), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key(k), "must be finite");
    return x;
  }
  std::optional<double> maybe_number(const std::string& k) {
    if (!has(k)) return std::nullopt;
    return number(k);
  }
  std::size_t count(const std::string& k) {
    if (!has(k)) throw ConfigError(key(k), "required");
    const json& v = j_.at(k);
    if (!v.is_number_integer() || v.get<long long>() < 1) throw ConfigError(key(k), "expected a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
  }
  std::string text(const std::string& k) {
    if (!has(k)) throw ConfigError(key(k), "required");
    const json& v = j_.at(k);
    if (!v.is_string()) throw ConfigError(key(k), "expected a string");
    return v.get<std::string>();
  }
  std::string choice(const std::string& k, std::initializer_list<const char*> options) {
    const std::string v = text(k);
    std::string list;
    for (const char* o : options) {
      if (v == o) return v;
      list += list.empty() ? o : std::string(" | ") + o;
    }
    throw ConfigError(key(k), "'" + v + "' is not one of " + list);
  }
  Object child(const std::string& k) {
    if (!has(k)) throw ConfigError(key(k), "required");
    return Object(j_.at(k), key(k));
  }
  const json& raw(const std::string& k) {
    allowed_.insert(k);
    return j_.at(k);
  }

  //! Call after all reads.
  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!allowed_.count(k)) throw ConfigError(key(k), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> allowed_;
};

inline double positive(Object& o, const std::string& k) {
  const double x = o.number(k);
  if (!(x > 0.0)) throw ConfigError(o.key(k), "must be positive");
  return x;
}

inline Oscillator parse_oscillator(Object o) {
  Oscillator osc;
  osc.alpha0 = o.number("alpha0");
  if (osc.alpha0 < 0.0) throw ConfigError(o.key("alpha0"), "must be >= 0");
  if (o.has("omega0")) {
    osc.omega0 = positive(o, "omega0");
    osc.gamma = o.maybe_number("gamma").value_or(0.0);
    if (osc.gamma < 0.0) throw ConfigError(o.key("gamma"), "must be >= 0");
  } else {
    osc.omega0 = std::numeric_limits<double>::infinity();
    if (o.has("gamma")) throw ConfigError(o.key("gamma"), "only meaningful together with omega0");
  }
  o.finish();
  return osc;
}

inline PolarizabilityModel parse_particle(Object o) {
  const std::string type = o.choice("type", {"isotropic", "static", "diagonal", "tensor"});
  PolarizabilityModel m;
  if (type == "isotropic") {
    const double a = o.number("alpha0"), w = positive(o, "omega0");
    const double g = o.maybe_number("gamma").value_or(0.0);
    if (a < 0.0) throw ConfigError(o.key("alpha0"), "must be >= 0");
    if (g < 0.0) throw ConfigError(o.key("gamma"), "must be >= 0");
    m = PolarizabilityModel::isotropic(a, w, g);
  } else if (type == "static") {
    const double a = o.number("alpha0");
    if (a < 0.0) throw ConfigError(o.key("alpha0"), "must be >= 0");
    m = PolarizabilityModel::static_isotropic(a);
  } else if (type == "diagonal") {
    m = PolarizabilityModel::diagonal(parse_oscillator(o.child("xx")), parse_oscillator(o.child("yy")),
                                      parse_oscillator(o.child("zz")));
  } else {
    static const std::pair<const char*, std::array<Axis, 2>> slots[] = {
        {"xx", {X, X}}, {"yy", {Y, Y}}, {"zz", {Z, Z}}, {"xy", {X, Y}}, {"xz", {X, Z}}, {"yz", {Y, Z}}};
    for (const auto& [name, ij] : slots)
      if (o.has(name)) m.set(ij[0], ij[1], parse_oscillator(o.child(name)));
  }
  o.finish();
  return m;
}

inline PermittivityModel parse_wall(Object o) {
  const std::string type = o.choice("type", {"vacuum", "constant", "drude", "lorentz"});
  PermittivityModel m = PermittivityModel::vacuum();
  if (type == "constant") {
    const double e = o.number("eps0");
    if (e < 1.0) throw ConfigError(o.key("eps0"), "must be >= 1");
    m = PermittivityModel::constant(e);
  } else if (type == "drude") {
    m = PermittivityModel::drude(positive(o, "omega_p"), positive(o, "gamma"));
  } else if (type == "lorentz") {
    const double einf = o.number("eps_inf"), f = o.number("strength");
    if (einf < 1.0) throw ConfigError(o.key("eps_inf"), "must be >= 1");
    if (f < 0.0) throw ConfigError(o.key("strength"), "must be >= 0");
    m = PermittivityModel::lorentz(einf, f, positive(o, "omega0"), positive(o, "gamma"));
  }
  o.finish();
  return m;
}

inline SweepSpec parse_sweep(Object o) {
  SweepSpec s;
  s.axis = o.choice("axis", {"z", "T", "v", "zeta"});
  s.min = o.number("min");
  s.max = o.number("max");
  s.points = static_cast<int>(o.count("points"));
  s.log = (o.has("spacing") ? o.choice("spacing", {"log", "linear"}) : std::string("log")) == "log";
  if (s.log && !(s.min > 0.0)) throw ConfigError(o.key("min"), "must be positive for log spacing");
  if (s.axis != "v" && !(s.min > 0.0)) throw ConfigError(o.key("min"), "must be positive");
  if (s.axis == "v" && s.min < 0.0) throw ConfigError(o.key("min"), "must be >= 0");
  if (s.points > 1 && !(s.max > s.min)) throw ConfigError(o.key("max"), "must exceed min");
  if (s.axis == "v" && !(s.max < 1.0)) throw ConfigError(o.key("max"), "speed must stay below c = 1");
  o.finish();
  return s;
}

inline void parse_numerics(Object o, RunConfig& cfg) {
  if (o.has("rel_tol")) {
    cfg.policy.rel_tol = o.number("rel_tol");
    if (!(cfg.policy.rel_tol > 0.0 && cfg.policy.rel_tol < 1.0)) throw ConfigError(o.key("rel_tol"), "must lie in (0, 1)");
  }
  if (o.has("abs_tol")) cfg.policy.abs_tol = positive(o, "abs_tol");
  if (o.has("max_subdivisions")) cfg.policy.max_subdivisions = o.count("max_subdivisions");
  if (o.has("matsubara_max_terms")) cfg.policy.matsubara_max_terms = o.count("matsubara_max_terms");
  if (o.has("tail_consecutive")) cfg.policy.tail_consecutive = o.count("tail_consecutive");
  if (o.has("tm_coefficient"))
    cfg.cp.variant = o.choice("tm_coefficient", {"w0_squared", "w_squared"}) == "w_squared"
                         ? TmCoefficient::w_squared
                         : TmCoefficient::w0_squared;
  if (o.has("s0"))
    cfg.cp.s0 = o.choice("s0", {"limit", "quasistatic"}) == "limit" ? StaticTermRule::limit
                                                                    : StaticTermRule::quasistatic;
  o.finish();
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);  // comments allowed
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  cfg.digest = fnv1a64(text);
  detail::Object root(j, "");
  if (root.has("units") && root.choice("units", {"natural"}) != "natural") throw ConfigError("units", "unsupported");
  if (root.has("temperature")) cfg.temperature = detail::positive(root, "temperature");
  if (root.has("distance")) cfg.distance = detail::positive(root, "distance");
  if (root.has("speed")) {
    cfg.speed = root.number("speed");
    if (!(*cfg.speed >= 0.0 && *cfg.speed < 1.0)) throw ConfigError("speed", "must satisfy 0 <= v < c = 1");
  }
  if (root.has("direction")) {
    const json& d = root.raw("direction");
    if (!d.is_array() || d.size() != 3 || !std::all_of(d.begin(), d.end(), [](const json& x) { return x.is_number(); }))
      throw ConfigError("direction", "expected an array of three numbers");
    cfg.direction = {d[0].get<double>(), d[1].get<double>(), d[2].get<double>()};
    if (!(norm(cfg.direction) > 0.0)) throw ConfigError("direction", "must be non-zero");
  }
  try {
    if (root.has("wall")) cfg.wall = detail::parse_wall(root.child("wall"));
    if (root.has("particle")) cfg.particle = detail::parse_particle(root.child("particle"));
  } catch (const std::invalid_argument& e) {
    if (auto* ce = dynamic_cast<const ConfigError*>(&e)) throw *ce;
    throw ConfigError(root.has("particle") ? "particle" : "wall", e.what());
  }
  if (root.has("numerics")) detail::parse_numerics(root.child("numerics"), cfg);
  if (root.has("sweep")) cfg.sweep = detail::parse_sweep(root.child("sweep"));
  root.finish();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// --- tables -------------------------------------------------------------------

struct Table {
  std::vector<std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool converged = true;

  void write(std::ostream& out) const {
    for (const auto& m : meta) out << "# " << m << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    }
  }
};

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

inline std::string flag(bool b) { return b ? "1" : "0"; }

namespace detail {

inline std::vector<std::string> metadata(const char* command, const RunConfig& cfg) {
  char digest[40];
  std::snprintf(digest, sizeof digest, "fnv1a64:%016" PRIx64, cfg.digest);
  return {std::string("nanoforce ") + NANOFORCE_VERSION,
          std::string("command: ") + command,
          std::string("config_digest: ") + digest,
          "units: natural (hbar = k_B = c = 1)",
          "numerics: rel_tol=" + num(cfg.policy.rel_tol) + " abs_tol=" + num(cfg.policy.abs_tol) +
              " max_subdivisions=" + std::to_string(cfg.policy.max_subdivisions) +
              " matsubara_max_terms=" + std::to_string(cfg.policy.matsubara_max_terms) +
              " tail_consecutive=" + std::to_string(cfg.policy.tail_consecutive)};
}

template <class T>
const T& need(const std::optional<T>& v, const char* key, const char* why) {
  if (!v) throw ConfigError(key, std::string("required ") + why);
  return *v;
}

}  // namespace detail

inline Table run_cp(const RunConfig& cfg, std::size_t threads = 1) {
  HalfSpaceScene scene;
  scene.temperature = detail::need(cfg.temperature, "temperature", "for cp");
  scene.wall = detail::need(cfg.wall, "wall", "for cp");
  scene.particle = detail::need(cfg.particle, "particle", "for cp");
  std::vector<double> grid;
  if (cfg.sweep) {
    if (cfg.sweep->axis != "z") throw ConfigError("sweep.axis", "cp sweeps only along z");
    grid = cfg.sweep->values();
  } else {
    grid = {detail::need(cfg.distance, "distance", "for cp without a z sweep")};
  }
  scene.distance = grid.front();

  Table t;
  t.meta = detail::metadata("cp", cfg);
  t.meta.push_back(std::string("tm_coefficient: ") +
                   (cfg.cp.variant == TmCoefficient::w0_squared ? "w0_squared" : "w_squared") +
                   "; s0: " + (cfg.cp.s0 == StaticTermRule::limit ? "limit" : "quasistatic"));
  t.meta.push_back("sign: F_z < 0 is attraction towards the wall");
  t.columns = {"z_A", "F_z", "error_estimate", "s_terms", "converged"};
  for (const auto& row : cp_sweep(scene, grid, cfg.cp, cfg.policy, threads)) {
    t.rows.push_back({num(row.distance), num(row.force), num(row.error_estimate), std::to_string(row.s_terms),
                      flag(row.converged)});
    t.converged = t.converged && row.converged;
  }
  return t;
}

inline Table run_friction(const RunConfig& cfg, std::size_t threads = 1) {
  FrictionScene scene;
  scene.particle = detail::need(cfg.particle, "particle", "for friction");
  scene.direction = cfg.direction;
  FrictionAxis axis = FrictionAxis::temperature;
  std::vector<double> grid;
  std::string column = "T";
  if (cfg.sweep) {
    if (cfg.sweep->axis == "T") {
      scene.speed = detail::need(cfg.speed, "speed", "for friction");
      scene.temperature = cfg.sweep->values().front();
    } else if (cfg.sweep->axis == "v") {
      axis = FrictionAxis::speed;
      column = "v";
      scene.temperature = detail::need(cfg.temperature, "temperature", "for friction");
    } else {
      throw ConfigError("sweep.axis", "friction sweeps along T or v");
    }
    grid = cfg.sweep->values();
  } else {
    scene.speed = detail::need(cfg.speed, "speed", "for friction");
    scene.temperature = detail::need(cfg.temperature, "temperature", "for friction");
    grid = {scene.temperature};
  }

  Table t;
  t.meta = detail::metadata("friction", cfg);
  t.meta.push_back(std::string("convention: ") + std::string(kFrictionConvention));
  t.meta.push_back(column == "T" ? "sweep: T at fixed v = " + num(scene.speed)
                                 : "sweep: v at fixed T = " + num(scene.temperature));
  t.columns = {column, "F_x", "F_y", "F_z", "drag", "error_estimate", "converged"};
  for (const auto& row : friction_sweep(scene, axis, grid, cfg.policy, threads)) {
    t.rows.push_back({num(row.value), num(row.force[0]), num(row.force[1]), num(row.force[2]), num(row.drag),
                      num(row.error_estimate), flag(row.converged)});
    t.converged = t.converged && row.converged;
  }
  return t;
}

inline Table material_show(const RunConfig& cfg) {
  if (!cfg.wall && !cfg.particle) throw ConfigError("wall", "material needs a wall or a particle");
  SweepSpec grid{"zeta", 1e-3, 1e3, 61, true};
  if (cfg.sweep) {
    if (cfg.sweep->axis != "zeta") throw ConfigError("sweep.axis", "material sweeps along zeta");
    grid = *cfg.sweep;
  }
  Table t;
  t.meta = detail::metadata("material", cfg);
  t.meta.push_back("imaginary-axis response: eps(i zeta), alpha_ii(i zeta)");
  t.columns = {"zeta"};
  if (cfg.wall) t.columns.push_back("eps");
  if (cfg.particle) t.columns.insert(t.columns.end(), {"alpha_xx", "alpha_yy", "alpha_zz"});
  for (double zeta : grid.values()) {
    std::vector<std::string> row{num(zeta)};
    if (cfg.wall) row.push_back(num(eps_imag_axis(*cfg.wall, zeta)));
    if (cfg.particle) {
      const Tensor3C a = alpha_imag_axis(*cfg.particle, zeta);
      for (std::size_t i = 0; i < 3; ++i) row.push_back(num(a(i, i).real()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

// --- entry point ----------------------------------------------------------------

inline int emit(const Table& t, const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (out_path.empty()) {
    t.write(out);
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << out_path << "'\n";
      return config_error;
    }
    t.write(f);
  }
  if (!t.converged) {
    err << "warning: some rows did not converge (see the converged column)\n";
    return not_converged;
  }
  return ok;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Fluctuation-induced forces on a small particle: Casimir-Polder and blackbody friction"};
  app.set_version_flag("--version", NANOFORCE_VERSION);
  app.require_subcommand(1);

  std::string config, out_path, suite = "all";
  auto* cp = app.add_subcommand("cp", "Casimir-Polder force above a half-space");
  cp->add_option("--config", config, "JSON config file")->required();
  cp->add_option("--out", out_path, "CSV output (default stdout)");
  auto* fr = app.add_subcommand("friction", "Blackbody friction on a moving particle");
  fr->add_option("--config", config, "JSON config file")->required();
  fr->add_option("--out", out_path, "CSV output (default stdout)");
  auto* val = app.add_subcommand("validate", "Run the acceptance checks");
  val->add_option("--suite", suite, "all | wick | cp | friction | keldysh")
      ->check(CLI::IsMember(validation::suite_names()));
  auto* mat = app.add_subcommand("material", "Tabulate eps and alpha on the imaginary axis");
  mat->add_option("--config", config, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }

  const std::size_t threads = thread_count_from_env();
  try {
    if (val->parsed()) {
      validation::Context ctx;
      ctx.threads = threads;
      int failed = 0;
      const auto ids = validation::suite_criteria(suite);
      for (int id : ids) {
        const auto r = validation::run_check(id, ctx);
        out << r.line() << std::endl;
        failed += !r.passed;
      }
      out << "summary: suite=" << suite << " passed=" << ids.size() - failed << " failed=" << failed << '\n';
      return failed ? validation_failed : ok;
    }
    const RunConfig cfg = load_config(config);
    if (cp->parsed()) return emit(run_cp(cfg, threads), out_path, out, err);
    if (fr->parsed()) return emit(run_friction(cfg, threads), out_path, out, err);
    return emit(material_show(cfg), "", out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  }
}

}  // namespace nanoforce::cli
