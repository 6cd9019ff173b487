#pragma once

// Dielectric response of the wall and polarizability of the particle, on the
// real frequency axis (retarded, complex) and on the positive imaginary axis
// (real). Natural units: hbar = k_B = c = 1, so frequencies, temperatures and
// inverse lengths share one unit.
//
// Off-diagonal polarizability entries are accepted with no constraint beyond
// symmetry. A physical (passive) particle must keep Im alpha(omega) positive
// semidefinite for omega > 0; that is checked by the validation suites, not
// enforced here.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "nanoforce/errors.hpp"
#include "nanoforce/keldysh.hpp"
#include "nanoforce/tensor.hpp"

namespace nanoforce {

namespace permittivity {

struct Vacuum {};

struct Constant {
  double eps0 = 1.0;
};

//! eps(omega) = 1 - wp^2 / (omega^2 + i gamma omega)
struct Drude {
  double omega_p = 1.0;
  double gamma = 1.0;
};

//! eps(omega) = eps_inf + f w0^2 / (w0^2 - omega^2 - i gamma omega)
struct Lorentz {
  double eps_inf = 1.0;
  double strength = 0.0;
  double omega0 = 1.0;
  double gamma = 1.0;
};

}  // namespace permittivity

class PermittivityModel {
public:
  using Variant = std::variant<permittivity::Vacuum, permittivity::Constant, permittivity::Drude,
                               permittivity::Lorentz>;

  PermittivityModel() = default;

  static PermittivityModel vacuum() { return PermittivityModel(permittivity::Vacuum{}); }

  static PermittivityModel constant(double eps0) {
    if (!(eps0 >= 1.0)) throw std::invalid_argument("constant permittivity must be >= 1");
    return PermittivityModel(permittivity::Constant{eps0});
  }

  static PermittivityModel drude(double omega_p, double gamma) {
    if (!(omega_p > 0.0) || !(gamma > 0.0))
      throw std::invalid_argument("Drude model needs omega_p > 0 and gamma > 0");
    return PermittivityModel(permittivity::Drude{omega_p, gamma});
  }

  static PermittivityModel lorentz(double eps_inf, double strength, double omega0, double gamma) {
    if (!(eps_inf >= 1.0) || !(strength >= 0.0) || !(omega0 > 0.0) || !(gamma > 0.0))
      throw std::invalid_argument(
          "Lorentz permittivity needs eps_inf >= 1, strength >= 0, omega0 > 0, gamma > 0");
    return PermittivityModel(permittivity::Lorentz{eps_inf, strength, omega0, gamma});
  }

  const Variant& variant() const { return model_; }
  bool is_vacuum() const { return std::holds_alternative<permittivity::Vacuum>(model_); }

private:
  explicit PermittivityModel(Variant v) : model_(v) {}
  Variant model_{permittivity::Vacuum{}};
};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

//! eps(i zeta), real and >= 1 for every shipped model.
inline double eps_imag_axis(const PermittivityModel& model, double zeta) {
  if (!(zeta > 0.0)) throw DomainError("eps_imag_axis requires zeta > 0");
  return std::visit(
      overloaded{
          [](const permittivity::Vacuum&) { return 1.0; },
          [](const permittivity::Constant& m) { return m.eps0; },
          [zeta](const permittivity::Drude& m) {
            return 1.0 + m.omega_p * m.omega_p / (zeta * (zeta + m.gamma));
          },
          [zeta](const permittivity::Lorentz& m) {
            const double w2 = m.omega0 * m.omega0;
            return m.eps_inf + m.strength * w2 / (w2 + zeta * zeta + m.gamma * zeta);
          },
      },
      model.variant());
}

inline Complex eps_real_axis(const PermittivityModel& model, double omega) {
  return std::visit(
      overloaded{
          [](const permittivity::Vacuum&) { return Complex(1.0, 0.0); },
          [](const permittivity::Constant& m) { return Complex(m.eps0, 0.0); },
          [omega](const permittivity::Drude& m) {
            if (omega == 0.0) throw PoleError("Drude permittivity has a pole at omega = 0");
            return 1.0 - m.omega_p * m.omega_p / Complex(omega * omega, m.gamma * omega);
          },
          [omega](const permittivity::Lorentz& m) {
            const double w2 = m.omega0 * m.omega0;
            return m.eps_inf + m.strength * w2 / Complex(w2 - omega * omega, -m.gamma * omega);
          },
      },
      model.variant());
}

//! zeta -> 0+ behaviour of the imaginary-axis permittivity. `eps` is +inf for
//! conductors. `eps_zeta2` is the plasma-model value of eps(i zeta) zeta^2 at
//! zeta -> 0: omega_p^2 for Drude, 0 otherwise. With gamma > 0 the strict limit
//! of the Drude expression is 0; the plasma value keeps the wall's s-wave
//! screening in the static term.
struct StaticPermittivity {
  double eps = 1.0;
  double eps_zeta2 = 0.0;
};

inline StaticPermittivity static_permittivity(const PermittivityModel& model) {
  return std::visit(
      overloaded{
          [](const permittivity::Vacuum&) { return StaticPermittivity{1.0, 0.0}; },
          [](const permittivity::Constant& m) { return StaticPermittivity{m.eps0, 0.0}; },
          [](const permittivity::Drude& m) {
            return StaticPermittivity{std::numeric_limits<double>::infinity(),
                                      m.omega_p * m.omega_p};
          },
          [](const permittivity::Lorentz& m) {
            return StaticPermittivity{m.eps_inf + m.strength, 0.0};
          },
      },
      model.variant());
}

//! One polarizability entry: alpha0 w0^2 / (w0^2 - omega^2 - i gamma omega).
//! An infinite omega0 denotes the frequency-independent (static) limit.
struct Oscillator {
  double alpha0 = 0.0;
  double omega0 = 1.0;
  double gamma = 0.0;

  bool is_static() const { return std::isinf(omega0); }

  Complex real_axis(double omega) const {
    if (is_static()) return alpha0;
    if (gamma == 0.0 && std::abs(omega) == omega0)
      throw PoleError("undamped oscillator evaluated at resonance");
    const double w2 = omega0 * omega0;
    return alpha0 * w2 / Complex(w2 - omega * omega, -gamma * omega);
  }

  double imag_axis(double zeta) const {
    if (is_static()) return alpha0;
    const double w2 = omega0 * omega0;
    return alpha0 * w2 / (w2 + zeta * zeta + gamma * zeta);
  }

  friend bool operator==(const Oscillator&, const Oscillator&) = default;
};

//! Symmetric 3x3 polarizability tensor whose entries are independent
//! oscillators (or zero).
class PolarizabilityModel {
public:
  using Entry = std::optional<Oscillator>;

  PolarizabilityModel() = default;

  static PolarizabilityModel isotropic(double alpha0, double omega0, double gamma) {
    const Oscillator o = checked({alpha0, omega0, gamma});
    return diagonal(o, o, o);
  }

  static PolarizabilityModel diagonal(const Oscillator& xx, const Oscillator& yy,
                                      const Oscillator& zz) {
    PolarizabilityModel m;
    m.set(X, X, xx);
    m.set(Y, Y, yy);
    m.set(Z, Z, zz);
    return m;
  }

  //! Frequency-independent isotropic polarizability.
  static PolarizabilityModel static_isotropic(double alpha0) {
    const Oscillator o = checked({alpha0, std::numeric_limits<double>::infinity(), 0.0});
    return diagonal(o, o, o);
  }

  //! Sets entry (i, j) and its mirror (j, i).
  PolarizabilityModel& set(std::size_t i, std::size_t j, const Oscillator& o) {
    entries_[slot(i, j)] = checked(o);
    return *this;
  }

  PolarizabilityModel& clear(std::size_t i, std::size_t j) {
    entries_[slot(i, j)].reset();
    return *this;
  }

  const Entry& entry(std::size_t i, std::size_t j) const { return entries_[slot(i, j)]; }

  bool is_diagonal() const { return !entries_[3] && !entries_[4] && !entries_[5]; }

  bool is_isotropic() const {
    return is_diagonal() && entries_[0] == entries_[1] && entries_[1] == entries_[2];
  }

private:
  static Oscillator checked(const Oscillator& o) {
    if (!(o.alpha0 >= 0.0) || !(o.omega0 > 0.0) || !(o.gamma >= 0.0))
      throw std::invalid_argument("oscillator needs alpha0 >= 0, omega0 > 0, gamma >= 0");
    return o;
  }

  // xx yy zz xy xz yz
  static std::size_t slot(std::size_t i, std::size_t j) {
    if (i > 2 || j > 2) throw std::out_of_range("tensor index out of range");
    if (i == j) return i;
    const std::size_t lo = std::min(i, j), hi = std::max(i, j);
    return lo == 0 ? (hi == 1 ? 3 : 4) : 5;
  }

  std::array<Entry, 6> entries_{};
};

//! alpha(i zeta): real symmetric tensor.
inline Tensor3C alpha_imag_axis(const PolarizabilityModel& model, double zeta) {
  if (!(zeta >= 0.0)) throw DomainError("alpha_imag_axis requires zeta >= 0");
  Tensor3C t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (const auto& e = model.entry(i, j)) t(i, j) = e->imag_axis(zeta);
  return t;
}

//! Retarded alpha^R(omega).
inline Tensor3C alpha_real_axis(const PolarizabilityModel& model, double omega) {
  Tensor3C t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (const auto& e = model.entry(i, j)) t(i, j) = e->real_axis(omega);
  return t;
}

//! Keldysh component of a particle held in local equilibrium at T:
//! alpha^K = 2i coth(omega/2T) Im alpha^R.
inline Tensor3C alpha_keldysh(const PolarizabilityModel& model, double omega, double temperature) {
  if (omega == 0.0) throw DomainError("alpha_keldysh is singular at omega = 0");
  return equilibrium_keldysh(alpha_real_axis(model, omega), omega, temperature);
}

}  // namespace nanoforce
