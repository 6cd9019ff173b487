#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace nanoforce {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

enum Axis : std::size_t { X = 0, Y = 1, Z = 2 };

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

//! Dense complex 3x3 tensor, row-major. Response tensors in this library are
//! symmetric; the type itself does not enforce it (see is_symmetric()).
class Tensor3C {
public:
  constexpr Tensor3C() = default;

  static Tensor3C identity(Complex value = 1.0) { return diagonal(value, value, value); }

  static Tensor3C diagonal(Complex xx, Complex yy, Complex zz) {
    Tensor3C t;
    t(X, X) = xx;
    t(Y, Y) = yy;
    t(Z, Z) = zz;
    return t;
  }

  Complex& operator()(std::size_t i, std::size_t j) { return m_[3 * i + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_[3 * i + j]; }

  Complex trace() const { return m_[0] + m_[4] + m_[8]; }

  Tensor3C imag() const { return map([](Complex c) { return Complex(c.imag(), 0.0); }); }
  Tensor3C real() const { return map([](Complex c) { return Complex(c.real(), 0.0); }); }
  Tensor3C conj() const { return map([](Complex c) { return std::conj(c); }); }

  Tensor3C transpose() const {
    Tensor3C t;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
    return t;
  }

  //! Largest entry modulus.
  double max_abs() const {
    double r = 0.0;
    for (const auto& c : m_) r = std::max(r, std::abs(c));
    return r;
  }

  bool is_symmetric(double tol = 0.0) const {
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
  }

  bool is_real() const {
    for (const auto& c : m_)
      if (c.imag() != 0.0) return false;
    return true;
  }

  Tensor3C& operator+=(const Tensor3C& o) {
    for (std::size_t n = 0; n < 9; ++n) m_[n] += o.m_[n];
    return *this;
  }
  Tensor3C& operator-=(const Tensor3C& o) {
    for (std::size_t n = 0; n < 9; ++n) m_[n] -= o.m_[n];
    return *this;
  }
  Tensor3C& operator*=(Complex s) {
    for (auto& c : m_) c *= s;
    return *this;
  }

  friend Tensor3C operator+(Tensor3C a, const Tensor3C& b) { return a += b; }
  friend Tensor3C operator-(Tensor3C a, const Tensor3C& b) { return a -= b; }
  friend Tensor3C operator*(Tensor3C a, Complex s) { return a *= s; }
  friend Tensor3C operator*(Complex s, Tensor3C a) { return a *= s; }

  friend Tensor3C operator*(const Tensor3C& a, const Tensor3C& b) {
    Tensor3C t;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) t(i, j) += a(i, k) * b(k, j);
    return t;
  }

  friend bool operator==(const Tensor3C& a, const Tensor3C& b) { return a.m_ == b.m_; }

private:
  template <class F>
  Tensor3C map(F f) const {
    Tensor3C t;
    for (std::size_t n = 0; n < 9; ++n) t.m_[n] = f(m_[n]);
    return t;
  }

  std::array<Complex, 9> m_{};
};

//! Real 3x3 matrix acting on vectors; used for frame rotations.
using Mat3 = std::array<Vec3, 3>;

inline Vec3 apply(const Mat3& r, const Vec3& v) {
  return {dot(r[0], v), dot(r[1], v), dot(r[2], v)};
}

inline Mat3 transpose(const Mat3& r) {
  return {Vec3{r[0][0], r[1][0], r[2][0]}, Vec3{r[0][1], r[1][1], r[2][1]},
          Vec3{r[0][2], r[1][2], r[2][2]}};
}

//! R * A * R^T
inline Tensor3C rotate(const Mat3& r, const Tensor3C& a) {
  Tensor3C out;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l) s += r[i][k] * a(k, l) * r[j][l];
      out(i, j) = s;
    }
  return out;
}

//! Proper rotation taking the unit vector `from` onto +z. Identity when
//! `from` is already +z (bitwise), so the common case adds no roundoff.
inline Mat3 rotation_onto_z(Vec3 from) {
  const double n = norm(from);
  for (auto& c : from) c /= n;
  if (from[0] == 0.0 && from[1] == 0.0 && from[2] > 0.0)
    return {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  if (from[0] == 0.0 && from[1] == 0.0)
    return {Vec3{1, 0, 0}, Vec3{0, -1, 0}, Vec3{0, 0, -1}};
  // Rodrigues rotation about axis (from x z) by the angle between them.
  const Vec3 axis_raw{from[1], -from[0], 0.0};
  const double s = norm(axis_raw);
  const Vec3 u{axis_raw[0] / s, axis_raw[1] / s, 0.0};
  const double c = from[2];
  Mat3 r{};
  const double kx = u[0], ky = u[1], kz = u[2];
  const Mat3 k{Vec3{0, -kz, ky}, Vec3{kz, 0, -kx}, Vec3{-ky, kx, 0}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double kk = 0.0;
      for (std::size_t m = 0; m < 3; ++m) kk += k[i][m] * k[m][j];
      r[i][j] = (i == j ? 1.0 : 0.0) + s * k[i][j] + (1.0 - c) * kk;
    }
  return r;
}

}  // namespace nanoforce
