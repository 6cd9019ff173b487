#pragma once

// Velocity-linear force on a particle moving uniformly through isotropic
// thermal radiation, evaluated in the particle frame:
//
//   F_i = v / (2 pi c^5 T) int_0^inf w^5 / sinh^2(w/2T) f_i(w) dw
//   f_i = (2/15) Im{ 2 delta_iz Tr alpha - [delta_ix a_xz + delta_iy a_yz + delta_iz a_zz] }
//
// with v along +z. Other directions rotate alpha into the velocity frame and
// rotate the force back.
//
// Sign convention: the formula above is evaluated as written, with no sign
// inserted by hand. `drag` is the component of F along +v per unit speed, so
// a positive drag means the formula's force points along the motion.
//
// friction_oracle() is an independent route: it rebuilds the force from the
// general first-order expression in momentum space, collapsing the frequency
// integral on the light shell and doing the remaining (|k|, polar angle,
// azimuth) integrals numerically.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "nanoforce/keldysh.hpp"
#include "nanoforce/numerics.hpp"
#include "nanoforce/parallel.hpp"
#include "nanoforce/response_models.hpp"

namespace nanoforce {

inline constexpr std::string_view kFrictionConvention =
    "F evaluated from the velocity-linear formula as written (no sign inserted); "
    "drag = (F . v_hat) / v; a dissipative drag opposes motion";

struct FrictionScene {
  double speed = 0.0;  // |v|, 0 <= v < c
  double temperature = 1.0;
  PolarizabilityModel particle;
  double c = 1.0;
  Vec3 direction{0.0, 0.0, 1.0};

  void validate() const {
    if (!(c > 0.0)) throw std::invalid_argument("speed of light must be positive");
    if (!(speed >= 0.0) || !(speed < c)) throw std::invalid_argument("speed must satisfy 0 <= v < c");
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (!(norm(direction) > 0.0)) throw std::invalid_argument("velocity direction must be non-zero");
  }
};

struct SpectralSample {
  double omega = 0.0;
  Vec3 integrand{};  // w^5 / sinh^2(w/2T) f(w), velocity frame
};

struct FrictionResult {
  Vec3 force{};
  double drag = 0.0;
  Vec3 error_estimate{};
  bool converged = true;
  std::vector<SpectralSample> spectral_table;
  std::string_view convention = kFrictionConvention;
};

//! (2/15) Im{2 delta_iz Tr alpha - alpha_iz}
inline Vec3 f_vector(const Tensor3C& alpha) {
  const double trace = alpha.trace().imag();
  return {-2.0 * alpha(X, Z).imag() / 15.0, -2.0 * alpha(Y, Z).imag() / 15.0,
          2.0 * (2.0 * trace - alpha(Z, Z).imag()) / 15.0};
}

namespace detail {

//! w^5 / sinh^2(w/2T), finite at both ends.
inline double thermal_weight(double omega, double temperature) {
  const double x = omega / (2.0 * temperature);
  if (x > 700.0) return 0.0;
  const double ratio = x == 0.0 ? 1.0 : x / std::sinh(x);
  const double two_t = 2.0 * temperature;
  return omega * omega * omega * two_t * two_t * ratio * ratio;
}

//! Resonances of every oscillator entry, bracketed more tightly when narrow.
inline std::vector<double> resonance_breakpoints(const PolarizabilityModel& m, double scale = 1.0) {
  std::vector<double> pts;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) {
      const auto& e = m.entry(i, j);
      if (!e || e->is_static()) continue;
      pts.push_back(e->omega0 * scale);
      if (e->gamma < 0.1 * e->omega0)
        for (double k : {1.0, 10.0})
          for (double sgn : {-1.0, 1.0}) pts.push_back((e->omega0 + sgn * k * e->gamma) * scale);
    }
  std::erase_if(pts, [](double x) { return !(x > 0.0); });
  std::sort(pts.begin(), pts.end());
  return pts;
}

inline Mat3 velocity_frame(const FrictionScene& scene) { return rotation_onto_z(scene.direction); }

}  // namespace detail

//! Spectral integrand w^5 / sinh^2(w/2T) f(w) with alpha already in the
//! velocity frame.
inline Vec3 friction_spectral_integrand(const PolarizabilityModel& particle, const Mat3& frame,
                                        double omega, double temperature) {
  const Tensor3C alpha = rotate(frame, alpha_real_axis(particle, omega));
  const Vec3 f = f_vector(alpha);
  const double w = detail::thermal_weight(omega, temperature);
  return {w * f[0], w * f[1], w * f[2]};
}

inline FrictionResult friction_force(const FrictionScene& scene, const NumericsPolicy& policy = {},
                                     bool with_spectral_table = false) {
  scene.validate();
  FrictionResult out;
  if (scene.speed == 0.0) return out;

  const Mat3 frame = detail::velocity_frame(scene);
  const double T = scene.temperature;
  auto integrand = [&](double omega) {
    return friction_spectral_integrand(scene.particle, frame, omega, T);
  };
  const SemiInfiniteHints hints{T, detail::resonance_breakpoints(scene.particle)};
  const double prefactor = scene.speed / (2.0 * std::numbers::pi * std::pow(scene.c, 5) * T);

  Vec3 local{};
  for (std::size_t i = 0; i < 3; ++i) {
    const IntegralResult r = integrate_semi_infinite(
        [&](double omega) { return integrand(omega)[i]; }, 0.0, policy, hints);
    local[i] = prefactor * r.value;
    out.error_estimate[i] = prefactor * r.error_estimate;
    out.converged = out.converged && r.converged;
  }
  out.force = nanoforce::apply(transpose(frame), local);
  out.drag = local[Z] / scene.speed;

  if (with_spectral_table) {
    constexpr int samples = 64;
    for (int n = 0; n < samples; ++n) {
      const double omega = T * 1e-2 * std::pow(5e3, n / double(samples - 1));
      out.spectral_table.push_back({omega, integrand(omega)});
    }
  }
  return out;
}

//! v / (3 pi c^5 T) int_0^inf w^5 Im alpha(w) / sinh^2(w/2T) dw for an
//! isotropic particle; the force points along v.
inline IntegralResult friction_isotropic_display(const FrictionScene& scene,
                                                 const NumericsPolicy& policy = {}) {
  scene.validate();
  if (!scene.particle.is_isotropic())
    throw std::invalid_argument("isotropic friction formula needs an isotropic particle");
  const double T = scene.temperature;
  const auto& entry = scene.particle.entry(Z, Z);
  auto integrand = [&](double omega) {
    const double im = entry ? entry->real_axis(omega).imag() : 0.0;
    return detail::thermal_weight(omega, T) * im;
  };
  IntegralResult r = integrate_semi_infinite(
      integrand, 0.0, policy, {T, detail::resonance_breakpoints(scene.particle)});
  const double prefactor = scene.speed / (3.0 * std::numbers::pi * std::pow(scene.c, 5) * T);
  r.value *= prefactor;
  r.error_estimate *= prefactor;
  return r;
}

//! Scalar normalization of the light-shell weight used by the oracle.
//!   consistent: (2 pi^2 c / k)(delta - k k / k^2), which reproduces the
//!               closed-form friction prefactor v / (2 pi c^5 T)
//!   literal:    transverse_projector() as is, (2 pi c^2 / k)(...); the
//!               resulting force is smaller by the factor c / pi
enum class ShellNormalization { consistent, literal };

struct FrictionOracleOptions {
  ShellNormalization normalization = ShellNormalization::consistent;
  int azimuth_nodes = 8;
};

struct FrictionOracleResult {
  Vec3 force{};
  double error_estimate = 0.0;
  //! Largest imaginary part left after the angular integrals (should vanish).
  double imaginary_residual = 0.0;
  bool converged = true;
};

namespace detail {

//! [h(w, kv) - h(w, -kv)] / 2 for h = coth((w - kv)/2T), i.e. the response of
//! the drift distribution to reversing v, written without cancellation.
inline double drift_distribution_odd(double omega, double k_dot_v, double temperature) {
  const double a = (omega - k_dot_v) / (2.0 * temperature);
  const double b = (omega + k_dot_v) / (2.0 * temperature);
  if (std::min(std::abs(a), std::abs(b)) > 350.0) return 0.0;
  // coth a - coth b = sinh(b - a) / (sinh a sinh b)
  return 0.5 * std::sinh(b - a) / (std::sinh(a) * std::sinh(b));
}

inline std::array<Vec3, 2> orthonormal_complement(const Vec3& axis) {
  const Vec3 trial = std::abs(axis[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const double proj = dot(trial, axis);
  Vec3 e1{trial[0] - proj * axis[0], trial[1] - proj * axis[1], trial[2] - proj * axis[2]};
  const double n1 = norm(e1);
  for (auto& c : e1) c /= n1;
  const Vec3 e2{axis[1] * e1[2] - axis[2] * e1[1], axis[2] * e1[0] - axis[0] * e1[2],
                axis[0] * e1[1] - axis[1] * e1[0]};
  return {e1, e2};
}

inline Complex trace_product(const Tensor3C& a, const Tensor3C& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s += a(i, j) * b(j, i);
  return s;
}

}  // namespace detail

//! Force from the general expression
//!   F = i int dw w^2/(4 pi c^2) Tr[alpha^A(w) grad D^K(w) + alpha^K(w) grad D^R(w)]
//! with D^K = 2i h(w, k) Im D^R on the free-photon light shell and
//! h = coth((w - k.v)/2T). In momentum space grad -> i k. The alpha^K grad D^R
//! term drops out because free D^R depends only on |k|. The velocity-odd part
//! of h is taken as [h(v) - h(-v)] / 2, pointwise in k.
inline FrictionOracleResult friction_oracle(const FrictionScene& scene,
                                            const NumericsPolicy& policy = {},
                                            const FrictionOracleOptions& options = {}) {
  scene.validate();
  FrictionOracleResult out;
  if (scene.speed == 0.0) return out;

  const double c = scene.c;
  const double T = scene.temperature;
  const double nrm = norm(scene.direction);
  const Vec3 vhat{scene.direction[0] / nrm, scene.direction[1] / nrm, scene.direction[2] / nrm};
  const Vec3 v{scene.speed * vhat[0], scene.speed * vhat[1], scene.speed * vhat[2]};
  const auto [e1, e2] = detail::orthonormal_complement(vhat);
  const double shell_scale =
      options.normalization == ShellNormalization::consistent ? std::numbers::pi / c : 1.0;
  const int n_phi = options.azimuth_nodes;
  constexpr double pi = std::numbers::pi;
  const Complex I(0.0, 1.0);

  // Six outputs: real and imaginary parts of the three force components.
  using Out = std::array<double, 6>;

  auto at_k = [&](double k) -> Out {
    const double omega = c * k;
    const Tensor3C adv_pos = alpha_real_axis(scene.particle, omega).conj();
    const Tensor3C adv_neg = alpha_real_axis(scene.particle, -omega).conj();
    auto at_theta = [&](double theta) -> Out {
      const double st = std::sin(theta), ct = std::cos(theta);
      std::array<Complex, 3> acc{};
      for (int m = 0; m < n_phi; ++m) {
        const double phi = 2.0 * pi * m / n_phi;
        const double a1 = st * std::cos(phi), a2 = st * std::sin(phi);
        const Vec3 kv{k * (a1 * e1[0] + a2 * e2[0] + ct * vhat[0]),
                      k * (a1 * e1[1] + a2 * e2[1] + ct * vhat[1]),
                      k * (a1 * e1[2] + a2 * e2[2] + ct * vhat[2])};
        const OnShellTensor shell = photon_keldysh_free(omega, kv, Vec3{}, T, c).shell;
        const double kdotv = dot(kv, v);
        // shell at w = +ck and w = -ck
        const double h_pos = detail::drift_distribution_odd(omega, kdotv, T);
        const double h_neg = detail::drift_distribution_odd(-omega, kdotv, T);
        const Complex tr_pos = detail::trace_product(adv_pos, shell.weight) * shell_scale;
        const Complex tr_neg = detail::trace_product(adv_neg, shell.weight_neg) * shell_scale;
        // i w^2/(4 pi c^2) * (i k_j) * 2i h * Tr[alpha^A W]
        const Complex common = I * (omega * omega / (4.0 * pi * c * c)) * I * 2.0 * I;
        const Complex s = common * (h_pos * tr_pos + h_neg * tr_neg);
        for (std::size_t j = 0; j < 3; ++j) acc[j] += s * kv[j];
      }
      // d^3k / (2 pi)^3 = k^2 dk sin(theta) dtheta dphi / (2 pi)^3
      const double w = k * k * st * (2.0 * pi / n_phi) / (8.0 * pi * pi * pi);
      return {acc[0].real() * w, acc[1].real() * w, acc[2].real() * w,
              acc[0].imag() * w, acc[1].imag() * w, acc[2].imag() * w};
    };
    const auto inner = integrate_vector<6>(at_theta, 0.0, pi, policy.tightened(0.1));
    out.converged = out.converged && inner.converged;
    return inner.value;
  };

  const SemiInfiniteHints hints{T / c, detail::resonance_breakpoints(scene.particle, 1.0 / c)};
  const auto outer = integrate_semi_infinite_vector<6>(at_k, 0.0, policy, hints);
  out.converged = out.converged && outer.converged;
  out.force = {outer.value[0], outer.value[1], outer.value[2]};
  out.error_estimate = outer.error_estimate;
  out.imaginary_residual =
      std::max({std::abs(outer.value[3]), std::abs(outer.value[4]), std::abs(outer.value[5])});
  return out;
}

enum class FrictionAxis { temperature, speed };

struct FrictionSweepRow {
  double value = 0.0;
  Vec3 force{};
  double drag = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

inline std::vector<FrictionSweepRow> friction_sweep(const FrictionScene& scene, FrictionAxis axis,
                                                    const std::vector<double>& grid,
                                                    const NumericsPolicy& policy = {},
                                                    std::size_t threads = 1) {
  return parallel_map<FrictionSweepRow>(grid.size(), threads, [&](std::size_t i) {
    FrictionScene s = scene;
    (axis == FrictionAxis::temperature ? s.temperature : s.speed) = grid[i];
    const FrictionResult r = friction_force(s, policy);
    const double err = std::max({r.error_estimate[0], r.error_estimate[1], r.error_estimate[2]});
    return FrictionSweepRow{grid[i], r.force, r.drag, err, r.converged};
  });
}

}  // namespace nanoforce
