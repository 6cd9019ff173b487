#pragma once

// Equilibrium force on a polarizable particle at height z_A above a
// dielectric half-space z < 0, as a Matsubara sum over imaginary frequencies.
//
// Two independent representations are provided:
//   cp_force            in-plane wave vector k_perp, general diagonal tensor
//   cp_force_isotropic  normalized variable p = w0 / k_s, isotropic particle
// They agree term by term for s >= 1 when the TM bracket uses W^2 = w0^2.
//
// Natural units (c = 1): k_s = zeta_s.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nanoforce/numerics.hpp"
#include "nanoforce/parallel.hpp"
#include "nanoforce/response_models.hpp"

namespace nanoforce {

//! Coefficient of the in-plane alpha entries in the TM bracket: w^2, or
//! w0^2 (default; the choice consistent with the isotropic p-form).
enum class TmCoefficient { w_squared, w0_squared };

//! How eps(i zeta) k_s^2 is taken in the s = 0 term.
//!   limit:        lim_{zeta->0+} eps(i zeta) zeta^2 (omega_p^2 for Drude, else 0)
//!   quasistatic:  0 for every wall
enum class StaticTermRule { limit, quasistatic };

struct CpOptions {
  TmCoefficient variant = TmCoefficient::w0_squared;
  StaticTermRule s0 = StaticTermRule::limit;
};

struct HalfSpaceScene {
  double distance = 1.0;  // z_A > 0
  double temperature = 1.0;
  PermittivityModel wall;
  PolarizabilityModel particle;

  void validate() const {
    if (!(distance > 0.0)) throw std::invalid_argument("distance must be positive");
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  }
};

struct CpForceResult {
  double force = 0.0;  // F_z; negative is attraction towards the wall
  double error_estimate = 0.0;
  std::vector<MatsubaraTerm> terms;
  double tail = 0.0;  // remainder beyond the last listed term
  std::size_t s_terms_used = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

inline double w0(double ks, double kp) { return std::hypot(ks, kp); }

inline double w(double ks, double kp, double eps) { return std::sqrt(eps * ks * ks + kp * kp); }

namespace detail {

//! One imaginary frequency as seen by the reflection coefficients. eps may be
//! +inf (conductor at zeta = 0); eps_ks2 stands for eps * k_s^2.
struct ImagPoint {
  double ks = 0.0;
  double eps = 1.0;
  double eps_ks2 = 0.0;
};

struct Reflection {
  double w0 = 0.0;
  double w = 0.0;
  double rs = 0.0;
  double rp = 0.0;
};

inline Reflection reflect(const ImagPoint& pt, double kp) {
  Reflection r;
  r.w0 = std::hypot(pt.ks, kp);
  r.w = std::sqrt(pt.eps_ks2 + kp * kp);
  const double sum = r.w0 + r.w;
  // (w0 - w)/(w0 + w) = (w0^2 - w^2)/(w0 + w)^2
  r.rs = sum > 0.0 ? (pt.ks * pt.ks - pt.eps_ks2) / (sum * sum) : 0.0;
  if (std::isinf(pt.eps)) {
    r.rp = 1.0;
  } else {
    const double den = pt.eps * r.w0 + r.w;
    r.rp = den > 0.0 ? (pt.eps - 1.0) * (pt.eps_ks2 + (pt.eps + 1.0) * kp * kp) / (den * den) : 0.0;
  }
  return r;
}

//! int_0^{2 pi} dphi [R - Rbar] for a diagonal tensor.
inline double phi_integrated(const ImagPoint& pt, double kp, const std::array<double, 3>& a,
                             TmCoefficient variant) {
  const Reflection r = reflect(pt, kp);
  const double w2 = variant == TmCoefficient::w0_squared ? r.w0 * r.w0 : r.w * r.w;
  const double inplane = a[0] + a[1];
  constexpr double pi = std::numbers::pi;
  return pi * r.rs * pt.ks * pt.ks * inplane - r.rp * (2.0 * pi * kp * kp * a[2] + pi * w2 * inplane);
}

//! Same integral by an 8-point trapezoid in phi; exact because R - Rbar is a
//! quadratic form in (n_x, n_y). Only the diagonal entries enter.
inline double phi_trapezoid(const ImagPoint& pt, double kp, const Tensor3C& alpha,
                            TmCoefficient variant) {
  const Reflection r = reflect(pt, kp);
  const double w2 = variant == TmCoefficient::w0_squared ? r.w0 * r.w0 : r.w * r.w;
  const double axx = alpha(X, X).real(), ayy = alpha(Y, Y).real(), azz = alpha(Z, Z).real();
  constexpr int nodes = 8;
  double sum = 0.0;
  for (int m = 0; m < nodes; ++m) {
    const double phi = 2.0 * std::numbers::pi * m / nodes;
    const double nx = std::cos(phi), ny = std::sin(phi);
    const double te = r.rs * pt.ks * pt.ks * (ny * ny * axx + nx * nx * ayy);
    const double tm = r.rp * (kp * kp * azz + w2 * (nx * nx * axx + ny * ny * ayy));
    sum += te - tm;
  }
  return sum * 2.0 * std::numbers::pi / nodes;
}

inline ImagPoint matsubara_point(const PermittivityModel& wall, double zeta, StaticTermRule rule) {
  if (zeta > 0.0) {
    const double eps = eps_imag_axis(wall, zeta);
    return {zeta, eps, eps * zeta * zeta};
  }
  const StaticPermittivity st = static_permittivity(wall);
  return {0.0, st.eps, rule == StaticTermRule::limit ? st.eps_zeta2 : 0.0};
}

inline NumericsPolicy inner_policy(const NumericsPolicy& policy) { return policy.tightened(0.25); }

//! (1/2pi) int_0^inf k dk int dphi [R - Rbar] exp(-2 w0 z) at one frequency.
inline IntegralResult kperp_term(const HalfSpaceScene& scene, double zeta, const CpOptions& opt,
                                 const NumericsPolicy& policy) {
  const ImagPoint pt = matsubara_point(scene.wall, zeta, opt.s0);
  const Tensor3C alpha = alpha_imag_axis(scene.particle, zeta);
  const double z = scene.distance;
  const bool diagonal = scene.particle.is_diagonal();
  const std::array<double, 3> diag{alpha(X, X).real(), alpha(Y, Y).real(), alpha(Z, Z).real()};
  const double ks = pt.ks;
  auto integrand = [&](double kp) {
    const double phi = diagonal ? phi_integrated(pt, kp, diag, opt.variant)
                                : phi_trapezoid(pt, kp, alpha, opt.variant);
    // exp(-2 z (w0 - ks)); w0 - ks written to avoid cancellation
    const double excess = kp * kp / (std::hypot(ks, kp) + ks);
    return kp * phi * std::exp(-2.0 * z * excess);
  };
  const double scale = std::sqrt(ks / z + 0.25 / (z * z));
  IntegralResult r = integrate_semi_infinite(integrand, 0.0, inner_policy(policy), {.scale = scale});
  const double factor = std::exp(-2.0 * ks * z) / (2.0 * std::numbers::pi);
  r.value *= factor;
  r.error_estimate *= factor;
  return r;
}

//! k_s^4 alpha int_1^inf p dp exp(-2 k_s p z) [r + (1 - 2p^2) rbar], s >= 1.
inline IntegralResult p_form_term(const HalfSpaceScene& scene, double zeta,
                                  const NumericsPolicy& policy) {
  const double eps = eps_imag_axis(scene.wall, zeta);
  const double alpha = scene.particle.entry(Z, Z) ? scene.particle.entry(Z, Z)->imag_axis(zeta) : 0.0;
  const double ks = zeta;
  const double z = scene.distance;
  auto integrand = [&](double p) {
    const double s = std::sqrt(eps - 1.0 + p * p);
    // r = (p - s)/(p + s), rbar = (eps p - s)/(eps p + s), rationalized
    const double r = (1.0 - eps) / ((p + s) * (p + s));
    const double rbar = (eps - 1.0) * ((eps + 1.0) * p * p - 1.0) / ((eps * p + s) * (eps * p + s));
    return p * (r + (1.0 - 2.0 * p * p) * rbar) * std::exp(-2.0 * ks * z * (p - 1.0));
  };
  IntegralResult r =
      integrate_semi_infinite(integrand, 1.0, inner_policy(policy), {.scale = 1.0 / (2.0 * ks * z)});
  const double factor = std::pow(ks, 4) * alpha * std::exp(-2.0 * ks * z);
  r.value *= factor;
  r.error_estimate *= std::abs(factor);
  return r;
}

inline CpForceResult to_cp_result(MatsubaraResult&& m) {
  CpForceResult r;
  r.force = m.value;
  r.error_estimate = m.error_estimate;
  r.tail = m.tail;
  r.s_terms_used = m.terms.size();
  r.evaluations = m.evaluations;
  r.converged = m.converged;
  r.terms = std::move(m.terms);
  return r;
}

}  // namespace detail

inline double reflection_s(double ks, double kp, double eps) {
  return detail::reflect({ks, eps, eps * ks * ks}, kp).rs;
}

inline double reflection_p(double ks, double kp, double eps) {
  return detail::reflect({ks, eps, eps * ks * ks}, kp).rp;
}

//! int_0^{2pi} dphi [R - Rbar] for diagonal alpha(i zeta) = (xx, yy, zz).
inline double phi_averaged_integrand(double ks, double kp, double eps,
                                     const std::array<double, 3>& alpha_diag,
                                     TmCoefficient variant = TmCoefficient::w0_squared) {
  return detail::phi_integrated({ks, eps, eps * ks * ks}, kp, alpha_diag, variant);
}

//! Same quantity for a general tensor via the phi trapezoid.
inline double phi_quadrature_integrand(double ks, double kp, double eps, const Tensor3C& alpha,
                                       TmCoefficient variant = TmCoefficient::w0_squared) {
  return detail::phi_trapezoid({ks, eps, eps * ks * ks}, kp, alpha, variant);
}

//! F_z = (T/pi) sum_s (1 - delta_s0/2) int d^2k_perp [R - Rbar] exp(-2 w0 z_A).
inline CpForceResult cp_force(const HalfSpaceScene& scene, const CpOptions& options = {},
                              const NumericsPolicy& policy = {}) {
  scene.validate();
  auto term = [&](double zeta) { return detail::kperp_term(scene, zeta, options, policy); };
  return detail::to_cp_result(matsubara_sum(term, MatsubaraGrid(scene.temperature), policy));
}

//! F_z = T sum_s (2 - delta_s0) k_s^4 alpha(i zeta_s) int_1^inf p dp e^{-2 k_s p z}
//!       [r + (1 - 2p^2) rbar]; the s = 0 term uses the k_perp form.
inline CpForceResult cp_force_isotropic(const HalfSpaceScene& scene,
                                        StaticTermRule s0 = StaticTermRule::limit,
                                        const NumericsPolicy& policy = {}) {
  scene.validate();
  if (!scene.particle.is_isotropic())
    throw std::invalid_argument("cp_force_isotropic requires an isotropic particle");
  const CpOptions static_opts{TmCoefficient::w0_squared, s0};
  auto term = [&](double zeta) {
    if (zeta == 0.0) return detail::kperp_term(scene, 0.0, static_opts, policy);
    return detail::p_form_term(scene, zeta, policy);
  };
  return detail::to_cp_result(matsubara_sum(term, MatsubaraGrid(scene.temperature), policy));
}

struct CpSweepRow {
  double distance = 0.0;
  double force = 0.0;
  double error_estimate = 0.0;
  std::size_t s_terms = 0;
  bool converged = false;
};

//! cp_force at each distance of a strictly increasing positive grid.
inline std::vector<CpSweepRow> cp_sweep(const HalfSpaceScene& scene, const std::vector<double>& grid,
                                        const CpOptions& options = {},
                                        const NumericsPolicy& policy = {}, std::size_t threads = 1) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("sweep distances must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sweep grid must be strictly increasing");
  }
  return parallel_map<CpSweepRow>(grid.size(), threads, [&](std::size_t i) {
    HalfSpaceScene s = scene;
    s.distance = grid[i];
    const CpForceResult r = cp_force(s, options, policy);
    return CpSweepRow{grid[i], r.force, r.error_estimate, r.s_terms_used, r.converged};
  });
}

}  // namespace nanoforce
