#pragma once

// Numerical check that a real-frequency thermal integral of a retarded
// response equals its Matsubara sum:
//
//   (1/pi) int_0^inf coth(w/2T) Im f(w) dw  =  T sum_{s>=0} (2 - delta_s0) f(i zeta_s)
//
// The identity follows from closing the contour in the upper half-plane and
// picking up the poles of coth at w = i zeta_s, so it holds only when f is
// analytic there.
//
// The two-sided form int_{-inf}^{inf} Im f(w) / (exp(-w/T) - 1) dw folds onto
// the half-line for odd Im f via 1/(exp(-x) - 1) = -(1 + n(x)) and
// coth(x/2) = 1 + 2 n(x), n(x) = 1/(exp(x) - 1):
//
//   int_{-inf}^{inf} Im f(w) / (exp(-w/T) - 1) dw = - int_0^inf coth(w/2T) Im f(w) dw.
//
// two_sided_bose_integral() evaluates the left side directly so the fold can
// be checked numerically. Its overall sign relative to the Matsubara sum is
// left as is.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "nanoforce/numerics.hpp"
#include "nanoforce/tensor.hpp"

namespace nanoforce {

struct LorentzTerm {
  double weight = 0.0;
  double omega0 = 1.0;
  double gamma = 1.0;
};

//! f(w) = sum_j c_j w_j^2 / (w_j^2 - w^2 - i gamma_j w). Valid (retarded)
//! responses have every gamma_j > 0; negative gamma_j moves a pole into the
//! upper half-plane and is allowed only to build negative controls.
struct RationalResponse {
  std::vector<LorentzTerm> terms;

  Complex operator()(double omega) const {
    Complex f = 0.0;
    for (const auto& t : terms) {
      const double w2 = t.omega0 * t.omega0;
      f += t.weight * w2 / Complex(w2 - omega * omega, -t.gamma * omega);
    }
    return f;
  }

  double imag_axis(double zeta) const {
    double f = 0.0;
    for (const auto& t : terms) {
      const double w2 = t.omega0 * t.omega0;
      f += t.weight * w2 / (w2 + zeta * zeta + t.gamma * zeta);
    }
    return f;
  }

  //! d Im f / dw at w = 0.
  double imag_slope_at_zero() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight * t.gamma / (t.omega0 * t.omega0);
    return s;
  }

  bool is_retarded() const {
    return std::all_of(terms.begin(), terms.end(), [](const LorentzTerm& t) { return t.gamma > 0.0; });
  }

  friend RationalResponse operator+(RationalResponse a, const RationalResponse& b) {
    a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
    return a;
  }
};

namespace detail {

inline SemiInfiniteHints spectral_hints(const RationalResponse& f, double temperature) {
  SemiInfiniteHints h;
  double scale = temperature;
  for (const auto& t : f.terms) {
    scale = std::max(scale, t.omega0);
    h.breakpoints.push_back(t.omega0);
  }
  h.scale = scale;
  h.breakpoints.push_back(temperature);
  h.breakpoints.push_back(10.0 * temperature);
  return h;
}

}  // namespace detail

//! (1/pi) int_0^inf coth(w/2T) Im f(w) dw.
inline IntegralResult real_axis_side(const RationalResponse& f, double temperature,
                                     const NumericsPolicy& policy) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (f.terms.empty()) return {};
  const double slope = f.imag_slope_at_zero();
  auto integrand = [&](double omega) {
    const double x = omega / (2.0 * temperature);
    // coth(x) Im f -> 2T Im f'(0) as w -> 0
    if (x < 1e-8) return 2.0 * temperature * slope;
    return f(omega).imag() / std::tanh(x);
  };
  IntegralResult r =
      integrate_semi_infinite(integrand, 0.0, policy, detail::spectral_hints(f, temperature));
  r.value /= std::numbers::pi;
  r.error_estimate /= std::numbers::pi;
  return r;
}

//! T sum_s (2 - delta_s0) f(i zeta_s).
inline MatsubaraResult matsubara_side(const RationalResponse& f, double temperature,
                                      const NumericsPolicy& policy) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  return matsubara_sum([&f](double zeta) { return f.imag_axis(zeta); }, MatsubaraGrid(temperature),
                       policy);
}

//! int_{-inf}^{inf} Im f(w) / (exp(-w/T) - 1) dw, evaluated on both half-lines.
inline IntegralResult two_sided_bose_integral(const RationalResponse& f, double temperature,
                                              const NumericsPolicy& policy) {
  const double slope = f.imag_slope_at_zero();
  auto weight = [temperature](double omega) { return 1.0 / std::expm1(-omega / temperature); };
  auto positive = [&](double omega) {
    if (omega / temperature < 1e-8) return -temperature * slope;
    return weight(omega) * f(omega).imag();
  };
  auto negative = [&](double omega) {  // integrand at -omega
    if (omega / temperature < 1e-8) return -temperature * slope;
    return weight(-omega) * f(-omega).imag();
  };
  const auto hints = detail::spectral_hints(f, temperature);
  const IntegralResult a = integrate_semi_infinite(positive, 0.0, policy, hints);
  const IntegralResult b = integrate_semi_infinite(negative, 0.0, policy, hints);
  return {a.value + b.value, a.error_estimate + b.error_estimate, a.evaluations + b.evaluations,
          a.converged && b.converged};
}

enum class Verdict { pass, fail, indeterminate };

struct WickReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_diff = 0.0;
  Verdict verdict = Verdict::indeterminate;
};

inline double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

//! Compares both sides; a non-converged side yields `indeterminate`.
inline WickReport verify_wick(const RationalResponse& f, double temperature, double tol,
                              const NumericsPolicy& policy = {}) {
  const IntegralResult lhs = real_axis_side(f, temperature, policy);
  const MatsubaraResult rhs = matsubara_side(f, temperature, policy);
  WickReport rep{lhs.value, rhs.value, relative_difference(lhs.value, rhs.value)};
  if (!lhs.converged || !rhs.converged)
    rep.verdict = Verdict::indeterminate;
  else
    rep.verdict = rep.rel_diff <= tol ? Verdict::pass : Verdict::fail;
  return rep;
}

}  // namespace nanoforce
