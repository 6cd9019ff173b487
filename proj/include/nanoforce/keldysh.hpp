#pragma once

// Keldysh contour algebra and the distribution functions that tie the
// statistical (K) component to the retarded one.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nanoforce/errors.hpp"
#include "nanoforce/tensor.hpp"

namespace nanoforce {

//! Branch of the closed time contour: 1 = forward, 2 = backward.
enum class Branch : int { forward = 1, backward = 2 };

template <class V>
struct KeldyshTriple {
  V retarded{};
  V advanced{};
  V keldysh{};
};

namespace detail {

inline double magnitude(Complex c) { return std::abs(c); }
inline double magnitude(const Tensor3C& t) { return t.max_abs(); }

inline double branch_sign(Branch b) { return b == Branch::forward ? 1.0 : -1.0; }

}  // namespace detail

//! G^{ls} = 1/2 [G^K + (-1)^{l+1} G^A + (-1)^{s+1} G^R]
template <class V>
V contour_component(const KeldyshTriple<V>& t, Branch lambda, Branch sigma) {
  return 0.5 * (t.keldysh + detail::branch_sign(lambda) * t.advanced +
                detail::branch_sign(sigma) * t.retarded);
}

//! Inverse of contour_component. The four components are linearly dependent
//! (g11 + g22 = g12 + g21); a violation larger than `tol` times the largest
//! component magnitude throws InconsistentComponents.
template <class V>
KeldyshTriple<V> triple_from_components(const V& g11, const V& g12, const V& g21, const V& g22,
                                        double tol) {
  using detail::magnitude;
  const double scale = std::max({magnitude(g11), magnitude(g12), magnitude(g21), magnitude(g22)});
  const double violation = magnitude(g11 + g22 - g12 - g21);
  if (violation > tol * scale)
    throw InconsistentComponents("contour components violate g11 + g22 = g12 + g21 (residual " +
                                 std::to_string(violation) + ")");
  return {g11 - g12, g11 - g21, g12 + g21};
}

//! coth(x) with the pole at x = 0 reported as PoleError.
inline double coth_checked(double x) {
  if (x == 0.0) throw PoleError("coth evaluated at its pole (zero argument)");
  return 1.0 / std::tanh(x);
}

//! Equilibrium occupation factor coth(omega / 2T).
inline double equilibrium_distribution(double omega, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  return coth_checked(omega / (2.0 * temperature));
}

//! Photon distribution seen from a frame drifting through thermal radiation:
//! h = coth((omega - k.v) / 2T).
inline double drift_distribution(double omega, double k_dot_v, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  if (omega == k_dot_v) throw PoleError("drift distribution evaluated on omega == k.v");
  return coth_checked((omega - k_dot_v) / (2.0 * temperature));
}

//! K = 2i coth(omega/2T) Im R, entrywise. Holds for any response in global
//! equilibrium at temperature T.
inline Complex equilibrium_keldysh(Complex retarded, double omega, double temperature) {
  return Complex(0.0, 2.0 * equilibrium_distribution(omega, temperature) * retarded.imag());
}

inline Tensor3C equilibrium_keldysh(const Tensor3C& retarded, double omega, double temperature) {
  const double h = equilibrium_distribution(omega, temperature);
  Tensor3C out;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out(i, j) = Complex(0.0, 2.0 * h * retarded(i, j).imag());
  return out;
}

//! Free-space spectral structure (2 pi c^2 / k) (delta_ij - k_i k_j / k^2).
inline Tensor3C transverse_projector(const Vec3& k, double c) {
  const double kk = norm(k);
  if (!(kk > 0.0)) throw DomainError("transverse projector needs a non-zero wave vector");
  const double prefactor = 2.0 * std::numbers::pi * c * c / kk;
  Tensor3C t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      t(i, j) = prefactor * ((i == j ? 1.0 : 0.0) - k[i] * k[j] / (kk * kk));
  return t;
}

//! Im D^R(omega; k) of the free field is supported on the light shell:
//!   Im D^R = weight * delta(omega - c|k|) + weight_neg * delta(omega + c|k|).
struct OnShellTensor {
  Tensor3C weight;
  Tensor3C weight_neg;
};

//! D^K = 2i h(omega, k) Im D^R, returned as its on-shell weights and the
//! scalar h. Consumers integrate over the delta functions analytically.
struct FreePhotonKeldysh {
  OnShellTensor shell;
  double occupation = 0.0;
};

inline FreePhotonKeldysh photon_keldysh_free(double omega, const Vec3& k, const Vec3& v,
                                             double temperature, double c = 1.0) {
  if (!(norm(v) < c)) throw DomainError("drift speed must be below c");
  const Tensor3C t = transverse_projector(k, c);
  return {{-1.0 * t, t}, drift_distribution(omega, dot(k, v), temperature)};
}

}  // namespace nanoforce
