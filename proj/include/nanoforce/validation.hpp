#pragma once

// Acceptance checks shared by `nanoforce validate` and the acceptance test
// binary. Each check returns one line of verdict plus the worst metric seen.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nanoforce/casimir_polder.hpp"
#include "nanoforce/friction.hpp"
#include "nanoforce/keldysh.hpp"
#include "nanoforce/parallel.hpp"
#include "nanoforce/wick_check.hpp"

namespace nanoforce::validation {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;

  std::string line() const {
    char head[64];
    std::snprintf(head, sizeof head, "[%s] C%d %s", passed ? "PASS" : "FAIL", id, name.c_str());
    char tail[32];
    std::snprintf(tail, sizeof tail, " (%.2fs)", seconds);
    return std::string(head) + " | " + detail + tail;
  }
};

struct Context {
  std::size_t threads = 1;
  NumericsPolicy policy{};
};

namespace detail {

// Portable uniform draws: the standard distributions are not reproducible
// across library implementations, the raw engine output is.
struct Draws {
  std::mt19937_64 engine;
  explicit Draws(std::uint64_t seed) : engine(seed) {}
  double unit() { return double(engine() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  double log_uniform(double a, double b) { return a * std::pow(b / a, unit()); }
};

inline std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

inline double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, i / double(n - 1)));
  return g;
}

struct CpCase {
  std::string label;
  HalfSpaceScene scene;
};

//! Walls {Constant(3), Drude(5, 0.1)} x particles {static, Lorentz}, T = 1.
inline std::vector<CpCase> cp_cases() {
  std::vector<CpCase> out;
  const std::pair<const char*, PermittivityModel> walls[] = {
      {"constant3", PermittivityModel::constant(3.0)}, {"drude5", PermittivityModel::drude(5.0, 0.1)}};
  const std::pair<const char*, PolarizabilityModel> particles[] = {
      {"static", PolarizabilityModel::static_isotropic(1.0)},
      {"lorentz", PolarizabilityModel::isotropic(1.0, 1.0, 0.1)}};
  for (const auto& [wn, wall] : walls)
    for (const auto& [pn, particle] : particles) {
      HalfSpaceScene s;
      s.temperature = 1.0;
      s.wall = wall;
      s.particle = particle;
      out.push_back({std::string(wn) + "/" + pn, s});
    }
  return out;
}

inline std::vector<double> cp_grid() { return log_grid(0.1, 10.0, 10); }

struct FrictionCase {
  std::string label;
  FrictionScene scene;
};

//! Five particles (the last with alpha_xz != 0) at three temperatures.
inline std::vector<FrictionCase> friction_cases() {
  Draws d(20260101);
  auto osc = [&d] {
    const double w0 = d.uniform(0.5, 2.0);
    return Oscillator{d.uniform(0.2, 1.5), w0, w0 * d.uniform(0.05, 0.5)};
  };
  std::vector<PolarizabilityModel> particles;
  {
    const Oscillator o = osc();
    particles.push_back(PolarizabilityModel::isotropic(o.alpha0, o.omega0, o.gamma));
  }
  particles.push_back(PolarizabilityModel::diagonal(osc(), osc(), osc()));
  particles.push_back(PolarizabilityModel::diagonal(osc(), osc(), osc()));
  {
    auto p = PolarizabilityModel::diagonal(osc(), osc(), osc());
    p.set(X, Y, osc());
    particles.push_back(p);
  }
  {
    auto p = PolarizabilityModel::diagonal(osc(), osc(), osc());
    Oscillator xz = osc();
    xz.alpha0 *= 0.5;
    p.set(X, Z, xz);
    particles.push_back(p);
  }
  std::vector<FrictionCase> out;
  for (std::size_t i = 0; i < particles.size(); ++i)
    for (double T : {0.2, 0.5, 2.0}) {
      FrictionScene s;
      s.speed = 1e-4;
      s.temperature = T;
      s.particle = particles[i];
      out.push_back({"particle" + std::to_string(i) + "/T=" + fmt("%g", T), s});
    }
  return out;
}

struct WickCase {
  RationalResponse f;
  double temperature;
};

inline std::vector<WickCase> wick_cases() {
  Draws d(314159);
  std::vector<WickCase> out;
  for (int n = 0; n < 20; ++n) {
    RationalResponse f;
    for (int j = 0; j < 3; ++j) {
      const double w0 = d.log_uniform(0.5, 2.0);
      f.terms.push_back({d.uniform(0.2, 1.0), w0, d.log_uniform(0.05, 1.0)});
    }
    out.push_back({f, d.log_uniform(0.01, 10.0)});
  }
  return out;
}

inline RationalResponse wick_negative_control() {
  return RationalResponse{{{1.0, 1.0, 0.5}, {1.0, 1.5, -0.3}}};
}

//! |a_i - b_i| against the larger of |b_i| and a floor tied to |b|.
inline double component_rel(const Vec3& a, const Vec3& b) {
  const double scale = std::max({std::abs(b[0]), std::abs(b[1]), std::abs(b[2])});
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double ref = std::max(std::abs(b[i]), 1e-3 * scale);
    if (ref == 0.0) continue;
    worst = std::max(worst, std::abs(a[i] - b[i]) / ref);
  }
  return worst;
}

}  // namespace detail

// --- criteria ---------------------------------------------------------------

inline CheckResult representation_equivalence(const Context& ctx) {
  CheckResult r{1, "representation_equivalence"};
  double worst = 0.0;
  bool converged = true;
  for (const auto& c : detail::cp_cases()) {
    const auto grid = detail::cp_grid();
    const auto rows = parallel_map<std::array<double, 2>>(grid.size(), ctx.threads, [&](std::size_t i) {
      HalfSpaceScene s = c.scene;
      s.distance = grid[i];
      const auto a = cp_force(s, {}, ctx.policy);
      const auto b = cp_force_isotropic(s, StaticTermRule::limit, ctx.policy);
      return std::array<double, 2>{detail::rel(a.force, b.force), a.converged && b.converged ? 1.0 : 0.0};
    });
    for (const auto& row : rows) {
      worst = std::max(worst, row[0]);
      converged = converged && row[1] == 1.0;
    }
  }
  r.passed = converged && worst <= 1e-6;
  r.detail = detail::fmt("max_rel_diff=%.3e tol=1e-06", worst) + (converged ? "" : " non-converged");
  return r;
}

inline CheckResult static_term_oracle(const Context& ctx) {
  CheckResult r{2, "static_term_oracle"};
  double worst_term = 0.0, worst_full = 0.0;
  for (double eps0 : {1.5, 3.0, 10.0})
    for (double z : {0.1, 0.5, 2.0}) {
      HalfSpaceScene s;
      s.distance = z;
      s.temperature = 1.0;
      s.wall = PermittivityModel::constant(eps0);
      s.particle = PolarizabilityModel::static_isotropic(1.0);
      const double closed = -(3.0 / (4.0 * std::pow(z, 4))) * (eps0 - 1) / (eps0 + 1);
      worst_term = std::max(worst_term, detail::rel(cp_force(s, {}, ctx.policy).terms.at(0).value, closed));
    }
  for (double x : {10.0, 15.0, 25.0}) {
    HalfSpaceScene s;
    s.temperature = 1.0;
    s.distance = x / (2.0 * std::numbers::pi);
    s.wall = PermittivityModel::constant(3.0);
    s.particle = PolarizabilityModel::static_isotropic(1.0);
    const double closed = -(3.0 / (4.0 * std::pow(s.distance, 4))) * 0.5;
    worst_full = std::max(worst_full, detail::rel(cp_force(s, {}, ctx.policy).force, closed));
  }
  r.passed = worst_term <= 1e-8 && worst_full <= 1e-2;
  r.detail = detail::fmt("s0_max_rel=%.3e (tol 1e-08) full_max_rel=%.3e (tol 1e-02)", worst_term, worst_full);
  return r;
}

inline CheckResult vacuum_null(const Context& ctx) {
  CheckResult r{3, "vacuum_null"};
  bool ok = true;
  for (const auto& c : detail::cp_cases()) {
    HalfSpaceScene s = c.scene;
    s.wall = PermittivityModel::vacuum();
    for (double z : detail::cp_grid()) {
      s.distance = z;
      ok = ok && cp_force(s, {}, ctx.policy).force == 0.0;
      ok = ok && cp_force(s, {TmCoefficient::w_squared, StaticTermRule::limit}, ctx.policy).force == 0.0;
      ok = ok && cp_force_isotropic(s, StaticTermRule::limit, ctx.policy).force == 0.0;
    }
  }
  for (const auto& c : detail::friction_cases()) {
    FrictionScene s = c.scene;
    s.speed = 0.0;
    const Vec3 zero{};
    ok = ok && friction_force(s, ctx.policy).force == zero && friction_oracle(s, ctx.policy).force == zero;
  }
  r.passed = ok;
  r.detail = ok ? "all forces exactly 0" : "non-zero force found";
  return r;
}

inline CheckResult variant_discrimination(const Context& ctx) {
  CheckResult r{4, "variant_discrimination"};
  double best = 0.0;
  for (const auto& c : detail::cp_cases())
    for (double z : detail::cp_grid()) {
      HalfSpaceScene s = c.scene;
      s.distance = z;
      const double alt = cp_force(s, {TmCoefficient::w_squared, StaticTermRule::limit}, ctx.policy).force;
      const double iso = cp_force_isotropic(s, StaticTermRule::limit, ctx.policy).force;
      best = std::max(best, detail::rel(alt, iso));
    }
  const double threshold = 10.0 * ctx.policy.rel_tol;
  r.passed = best > threshold;
  r.detail = detail::fmt("max_rel_diff=%.3e threshold=%.1e", best, threshold);
  return r;
}

inline CheckResult isotropic_friction_coefficient(const Context& ctx) {
  CheckResult r{5, "isotropic_friction_coefficient"};
  const Vec3 f = f_vector(Tensor3C::identity() * Complex(0.0, 1.0));
  const bool exact = f[0] == 0.0 && f[1] == 0.0 && f[2] == 2.0 / 3.0;
  double worst = 0.0;
  for (double T : {0.1, 0.5, 2.0})
    for (const auto& o : {Oscillator{1.0, 1.0, 0.1}, Oscillator{0.5, 2.0, 1.0}, Oscillator{2.0, 0.7, 0.01}}) {
      FrictionScene s;
      s.speed = 1e-3;
      s.temperature = T;
      s.particle = PolarizabilityModel::isotropic(o.alpha0, o.omega0, o.gamma);
      worst = std::max(worst, detail::rel(friction_force(s, ctx.policy).force[2],
                                          friction_isotropic_display(s, ctx.policy).value));
    }
  r.passed = exact && worst <= 1e-12;
  r.detail = std::string(exact ? "f(i*I)=(0,0,2/3) exact; " : "f(i*I) wrong; ") +
             detail::fmt("display_max_rel=%.3e tol=1e-12", worst);
  return r;
}

inline CheckResult friction_oracle_agreement(const Context& ctx) {
  CheckResult r{6, "friction_momentum_oracle"};
  const auto start = std::chrono::steady_clock::now();
  const auto cases = detail::friction_cases();
  const auto rows = parallel_map<std::array<double, 2>>(cases.size(), ctx.threads, [&](std::size_t i) {
    const auto o = friction_oracle(cases[i].scene, ctx.policy);
    const auto f = friction_force(cases[i].scene, ctx.policy);
    return std::array<double, 2>{detail::component_rel(o.force, f.force),
                                 o.converged && f.converged ? 1.0 : 0.0};
  });
  double worst = 0.0;
  bool converged = true;
  for (const auto& row : rows) {
    worst = std::max(worst, row[0]);
    converged = converged && row[1] == 1.0;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = converged && worst <= 1e-6 && secs <= 300.0;
  r.detail = detail::fmt("max_component_rel=%.3e tol=1e-06 ", worst) +
             detail::fmt("cases=%g runtime=%.1fs", double(cases.size()), secs);
  return r;
}

inline CheckResult narrow_line_friction(const Context& ctx) {
  CheckResult r{7, "narrow_line_friction"};
  double worst = 0.0;
  for (double T : {0.25, 0.5, 1.0}) {
    const double a0 = 1.0, w0 = 1.0, v = 1e-3;
    FrictionScene s;
    s.speed = v;
    s.temperature = T;
    s.particle = PolarizabilityModel::isotropic(a0, w0, 1e-3 * w0);
    const double sh = std::sinh(w0 / (2 * T));
    const double oracle = v * a0 * std::pow(w0, 6) / (6 * T * sh * sh);
    worst = std::max(worst, detail::rel(friction_force(s, ctx.policy).force[2], oracle));
  }
  r.passed = worst <= 0.02;
  r.detail = detail::fmt("max_rel=%.3e tol=2e-02", worst);
  return r;
}

inline CheckResult wick_identity(const Context& ctx) {
  CheckResult r{8, "wick_identity"};
  const auto cases = detail::wick_cases();
  const auto reps = parallel_map<WickReport>(cases.size(), ctx.threads, [&](std::size_t i) {
    return verify_wick(cases[i].f, cases[i].temperature, 1e-6, ctx.policy);
  });
  double worst = 0.0;
  int passed = 0;
  for (const auto& rep : reps) {
    worst = std::max(worst, rep.rel_diff);
    passed += rep.verdict == Verdict::pass;
  }
  const auto control = verify_wick(detail::wick_negative_control(), 0.3, 1e-6, ctx.policy);
  const bool control_fails = control.verdict == Verdict::fail;
  r.passed = passed == int(cases.size()) && control_fails;
  r.detail = detail::fmt("passed=%g/20 max_rel_diff=%.3e tol=1e-06 ", passed, worst) +
             detail::fmt("negative_control_rel=%.3e verdict=", control.rel_diff) +
             (control_fails ? "fail(expected)" : "not-fail");
  return r;
}

inline CheckResult keldysh_algebra(const Context&) {
  CheckResult r{9, "keldysh_algebra"};
  constexpr double eps = std::numeric_limits<double>::epsilon();
  detail::Draws d(42);
  auto cplx = [&d] { return Complex(d.uniform(-1, 1), d.uniform(-1, 1)) * std::pow(10.0, d.uniform(-3, 3)); };
  double worst_trip = 0.0, worst_sum = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const KeldyshTriple<Complex> t{cplx(), cplx(), cplx()};
    const Complex g11 = contour_component(t, Branch::forward, Branch::forward);
    const Complex g12 = contour_component(t, Branch::forward, Branch::backward);
    const Complex g21 = contour_component(t, Branch::backward, Branch::forward);
    const Complex g22 = contour_component(t, Branch::backward, Branch::backward);
    const double scale = std::max({std::abs(t.retarded), std::abs(t.advanced), std::abs(t.keldysh)});
    worst_sum = std::max(worst_sum, std::abs(g11 + g22 - g12 - g21) / scale);
    const auto back = triple_from_components(g11, g12, g21, g22, 8 * eps);
    worst_trip = std::max({worst_trip, std::abs(back.retarded - t.retarded) / scale,
                           std::abs(back.advanced - t.advanced) / scale,
                           std::abs(back.keldysh - t.keldysh) / scale});
  }
  const auto particle = PolarizabilityModel::diagonal({1.0, 1.0, 0.2}, {0.5, 2.0, 0.1}, {2.0, 0.7, 1.0});
  double worst_fdt = 0.0;
  for (int n = 0; n < 1000; ++n) {
    double omega = d.uniform(-5, 5);
    if (omega == 0.0) omega = 1.0;
    const double T = d.log_uniform(0.05, 20);
    const Tensor3C R = alpha_real_axis(particle, omega);
    const Tensor3C K = alpha_keldysh(particle, omega, T);
    const double h = 1.0 / std::tanh(omega / (2 * T));
    for (std::size_t i = 0; i < 3; ++i) {
      const Complex expected(0.0, 2.0 * h * R(i, i).imag());
      if (expected != 0.0) worst_fdt = std::max(worst_fdt, std::abs(K(i, i) - expected) / std::abs(expected));
    }
  }
  r.passed = worst_trip <= 2 * eps && worst_sum <= 2 * eps && worst_fdt <= 2 * eps;
  r.detail = detail::fmt("round_trip=%.2e eps  sum_rule=%.2e eps  ", worst_trip / eps, worst_sum / eps) +
             detail::fmt("fdt=%.2e eps (tol 2 eps)", worst_fdt / eps);
  return r;
}

inline CheckResult numerics_self_consistency(const Context& ctx) {
  CheckResult r{10, "numerics_self_consistency"};
  const NumericsPolicy base = ctx.policy;
  const NumericsPolicy half = base.tightened(0.5);
  struct Probe {
    std::string label;
    std::function<std::pair<double, double>(const NumericsPolicy&)> eval;  // value, error; NaN if not converged
  };
  std::vector<Probe> probes;
  for (const auto& c : detail::cp_cases())
    for (double z : detail::cp_grid()) {
      HalfSpaceScene s = c.scene;
      s.distance = z;
      probes.push_back({c.label, [s](const NumericsPolicy& p) {
                          const auto a = cp_force(s, {}, p);
                          return std::pair{a.converged ? a.force : NAN, a.error_estimate};
                        }});
      probes.push_back({c.label + "/iso", [s](const NumericsPolicy& p) {
                          const auto a = cp_force_isotropic(s, StaticTermRule::limit, p);
                          return std::pair{a.converged ? a.force : NAN, a.error_estimate};
                        }});
    }
  for (const auto& c : detail::friction_cases()) {
    probes.push_back({c.label, [s = c.scene](const NumericsPolicy& p) {
                        const auto a = friction_force(s, p);
                        const double err = std::max({a.error_estimate[0], a.error_estimate[1], a.error_estimate[2]});
                        return std::pair{a.converged ? a.force[2] : NAN, err};
                      }});
    probes.push_back({c.label + "/oracle", [s = c.scene](const NumericsPolicy& p) {
                        const auto a = friction_oracle(s, p);
                        return std::pair{a.converged ? a.force[2] : NAN, a.error_estimate};
                      }});
  }
  for (const auto& c : detail::wick_cases()) {
    probes.push_back({"wick_real", [c](const NumericsPolicy& p) {
                        const auto a = real_axis_side(c.f, c.temperature, p);
                        return std::pair{a.converged ? a.value : NAN, a.error_estimate};
                      }});
    probes.push_back({"wick_matsubara", [c](const NumericsPolicy& p) {
                        const auto a = matsubara_side(c.f, c.temperature, p);
                        return std::pair{a.converged ? a.value : NAN, a.error_estimate};
                      }});
  }
  const auto outcome = parallel_map<std::array<double, 3>>(probes.size(), ctx.threads, [&](std::size_t i) {
    const auto [v0, e0] = probes[i].eval(base);
    const auto [v1, e1] = probes[i].eval(half);
    (void)e1;
    if (std::isnan(v0)) return std::array<double, 3>{0.0, 0.0, 0.0};  // not converged: out of scope
    return std::array<double, 3>{std::abs(v1 - v0), e0, 1.0};
  });
  int checked = 0, violations = 0;
  double worst_ratio = 0.0;
  for (const auto& o : outcome) {
    if (o[2] == 0.0) continue;
    ++checked;
    if (!(o[0] < o[1]) && !(o[0] == 0.0 && o[1] == 0.0)) ++violations;
    if (o[1] > 0.0) worst_ratio = std::max(worst_ratio, o[0] / o[1]);
  }

  // thread-count independence on the sweeps
  bool identical = true;
  for (const auto& c : detail::cp_cases()) {
    const auto a = cp_sweep(c.scene, detail::cp_grid(), {}, base, 1);
    const auto b = cp_sweep(c.scene, detail::cp_grid(), {}, base, 4);
    for (std::size_t i = 0; i < a.size(); ++i)
      identical = identical && a[i].force == b[i].force && a[i].error_estimate == b[i].error_estimate;
  }
  {
    const auto cases = detail::friction_cases();
    const auto grid = detail::log_grid(0.05, 5.0, 8);
    const auto a = friction_sweep(cases[1].scene, FrictionAxis::temperature, grid, base, 1);
    const auto b = friction_sweep(cases[1].scene, FrictionAxis::temperature, grid, base, 4);
    for (std::size_t i = 0; i < a.size(); ++i) identical = identical && a[i].force == b[i].force;
  }
  r.passed = violations == 0 && identical && checked > 0;
  r.detail = detail::fmt("checked=%g violations=%g ", checked, violations) +
             detail::fmt("max_change/err=%.3f threads_bit_identical=", worst_ratio) + (identical ? "yes" : "no");
  return r;
}

inline CheckResult physical_signs(const Context& ctx) {
  CheckResult r{11, "physical_signs"};
  int attraction_violations = 0, monotone_violations = 0, drag_violations = 0;
  for (const auto& c : detail::cp_cases()) {
    const auto rows = cp_sweep(c.scene, detail::cp_grid(), {}, ctx.policy, ctx.threads);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      attraction_violations += !(rows[i].force < 0.0);
      if (i > 0) monotone_violations += !(std::abs(rows[i].force) < std::abs(rows[i - 1].force));
    }
  }
  for (const auto& c : detail::friction_cases()) drag_violations += !(friction_force(c.scene, ctx.policy).drag >= 0.0);
  r.passed = attraction_violations == 0 && monotone_violations == 0 && drag_violations == 0;
  r.detail = detail::fmt("attraction_violations=%g monotone_violations=%g ", attraction_violations,
                         monotone_violations) +
             detail::fmt("negative_drag=%g", drag_violations);
  return r;
}

// --- suites -----------------------------------------------------------------

using Check = CheckResult (*)(const Context&);

inline Check check_by_id(int id) {
  static constexpr Check table[] = {representation_equivalence, static_term_oracle, vacuum_null,
                                    variant_discrimination,     isotropic_friction_coefficient,
                                    friction_oracle_agreement,  narrow_line_friction,
                                    wick_identity,              keldysh_algebra,
                                    numerics_self_consistency,  physical_signs};
  if (id < 1 || id > 11) throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  return table[id - 1];
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"all", "wick", "cp", "friction", "keldysh"};
  return names;
}

inline std::vector<int> suite_criteria(std::string_view suite) {
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  if (suite == "wick") return {8};
  if (suite == "cp") return {1, 2, 3, 4, 11};
  if (suite == "friction") return {3, 5, 6, 7, 11};
  if (suite == "keldysh") return {9};
  throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
}

inline CheckResult run_check(int id, const Context& ctx) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = check_by_id(id)(ctx);
  } catch (const std::exception& e) {
    r = CheckResult{id, "criterion", false, std::string("exception: ") + e.what()};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace nanoforce::validation
