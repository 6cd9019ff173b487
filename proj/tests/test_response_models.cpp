#include "nanoforce/response_models.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nanoforce/numerics.hpp"

using namespace nanoforce;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, i / double(n - 1)));
  return g;
}

struct RandomModels {
  std::mt19937_64 rng{20240611};
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

  Oscillator oscillator() { return {log_uniform(0.01, 10), log_uniform(0.1, 10), log_uniform(1e-3, 3)}; }

  PolarizabilityModel particle(int kind) {
    switch (kind % 3) {
      case 0: {
        const auto o = oscillator();
        return PolarizabilityModel::isotropic(o.alpha0, o.omega0, o.gamma);
      }
      case 1:
        return PolarizabilityModel::diagonal(oscillator(), oscillator(), oscillator());
      default:
        return PolarizabilityModel::static_isotropic(log_uniform(0.01, 10));
    }
  }

  PermittivityModel wall(int kind) {
    switch (kind % 4) {
      case 0: return PermittivityModel::vacuum();
      case 1: return PermittivityModel::constant(uniform(1.0, 20.0));
      case 2: return PermittivityModel::drude(log_uniform(0.1, 20), log_uniform(1e-3, 1));
      default:
        return PermittivityModel::lorentz(uniform(1.0, 3.0), uniform(0.0, 10.0), log_uniform(0.1, 10),
                                          log_uniform(1e-3, 1));
    }
  }
};

}  // namespace

TEST(Permittivity, ImaginaryAxisExamples) {
  EXPECT_EQ(eps_imag_axis(PermittivityModel::vacuum(), 1.0), 1.0);
  EXPECT_EQ(eps_imag_axis(PermittivityModel::constant(3.0), 7.0), 3.0);
  EXPECT_DOUBLE_EQ(eps_imag_axis(PermittivityModel::drude(1.0, 1.0), 1.0), 1.5);
}

TEST(Permittivity, ImaginaryAxisDomain) {
  EXPECT_THROW(eps_imag_axis(PermittivityModel::vacuum(), 0.0), DomainError);
  EXPECT_THROW(eps_imag_axis(PermittivityModel::drude(1, 1), -1.0), DomainError);
}

TEST(Permittivity, RealAxisExamples) {
  EXPECT_EQ(eps_real_axis(PermittivityModel::vacuum(), 2.0), Complex(1.0, 0.0));
  const Complex d = eps_real_axis(PermittivityModel::drude(1.0, 1.0), 1.0);
  EXPECT_NEAR(d.real(), 0.5, 1e-15);
  EXPECT_NEAR(d.imag(), 0.5, 1e-15);
  EXPECT_EQ(eps_real_axis(PermittivityModel::constant(3.0), -5.0), Complex(3.0, 0.0));
  EXPECT_THROW(eps_real_axis(PermittivityModel::drude(1.0, 1.0), 0.0), PoleError);
}

TEST(Permittivity, ConstructorValidation) {
  EXPECT_THROW(PermittivityModel::constant(0.5), std::invalid_argument);
  EXPECT_THROW(PermittivityModel::drude(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PermittivityModel::drude(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(PermittivityModel::lorentz(0.9, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST(Permittivity, InvariantsOnRandomModels) {
  RandomModels gen;
  const auto zetas = log_grid(1e-3, 1e4, 80);
  const auto omegas = log_grid(1e-3, 1e3, 60);
  for (int draw = 0; draw < 100; ++draw) {
    const auto wall = gen.wall(draw);
    double prev = std::numeric_limits<double>::infinity();
    for (double z : zetas) {
      const double e = eps_imag_axis(wall, z);
      EXPECT_GE(e, 1.0);
      EXPECT_LE(e, prev);
      prev = e;
    }
    for (double w : omegas) {
      const Complex p = eps_real_axis(wall, w), m = eps_real_axis(wall, -w);
      EXPECT_EQ(m, std::conj(p));
      EXPECT_GE(p.imag() * w, 0.0);
    }
  }
}

TEST(Permittivity, HighFrequencyLimit) {
  EXPECT_NEAR(eps_imag_axis(PermittivityModel::drude(3.0, 0.1), 1e8), 1.0, 1e-12);
  EXPECT_NEAR(eps_imag_axis(PermittivityModel::lorentz(2.5, 4.0, 1.0, 0.1), 1e8), 2.5, 1e-12);
}

TEST(Permittivity, StaticLimits) {
  EXPECT_TRUE(std::isinf(static_permittivity(PermittivityModel::drude(2.0, 0.1)).eps));
  EXPECT_EQ(static_permittivity(PermittivityModel::drude(2.0, 0.1)).eps_zeta2, 4.0);
  EXPECT_EQ(static_permittivity(PermittivityModel::lorentz(2.0, 3.0, 1.0, 0.1)).eps, 5.0);
  EXPECT_EQ(static_permittivity(PermittivityModel::constant(3.0)).eps_zeta2, 0.0);
  // gamma << zeta << omega_p: eps zeta^2 sits on the plasma value
  const auto d = PermittivityModel::drude(2.0, 1e-9);
  EXPECT_NEAR(eps_imag_axis(d, 1e-4) * 1e-8, 4.0, 1e-4);
}

TEST(Polarizability, ImaginaryAxisExamples) {
  const auto a = alpha_imag_axis(PolarizabilityModel::isotropic(1.0, 1.0, 0.1), 0.0);
  EXPECT_EQ(a, Tensor3C::identity());
  const auto high = alpha_imag_axis(PolarizabilityModel::isotropic(1.0, 1.0, 0.1), 1e6);
  EXPECT_LT(high.max_abs(), 1e-10);
  const auto b = alpha_imag_axis(PolarizabilityModel::isotropic(2.0, 1.0, 0.0), 1.0);
  EXPECT_EQ(b, Tensor3C::identity());
  EXPECT_THROW(alpha_imag_axis(PolarizabilityModel::isotropic(1, 1, 1), -0.1), DomainError);
}

TEST(Polarizability, RealAxisExamples) {
  const auto m = PolarizabilityModel::isotropic(1.0, 2.0, 1.0);
  const auto s = alpha_real_axis(m, 0.0);
  EXPECT_TRUE(s.is_real());
  EXPECT_EQ(s, Tensor3C::identity());
  const auto r = alpha_real_axis(m, 2.0);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(r(i, i).real(), 0.0, 1e-15);
    EXPECT_NEAR(r(i, i).imag(), 2.0, 1e-15);
  }
  EXPECT_EQ(alpha_real_axis(m, -3.0), alpha_real_axis(m, 3.0).conj());
  EXPECT_THROW(alpha_real_axis(PolarizabilityModel::isotropic(1, 2, 0), 2.0), PoleError);
}

TEST(Polarizability, KeldyshComponent) {
  // undamped below resonance: Im alpha^R = 0
  const auto undamped = PolarizabilityModel::isotropic(1.0, 2.0, 0.0);
  EXPECT_EQ(alpha_keldysh(undamped, 1.0, 0.3).max_abs(), 0.0);

  const auto m = PolarizabilityModel::isotropic(1.0, 2.0, 1.0);
  const auto k = alpha_keldysh(m, 2.0, 1.0);
  EXPECT_NEAR(k(Z, Z).imag(), 5.252141141997325, 1e-12);
  EXPECT_EQ(k(Z, Z).real(), 0.0);

  // omega >> T: coth -> 1
  const auto cold = alpha_keldysh(m, 1.5, 1e-3);
  const auto im = alpha_real_axis(m, 1.5).imag();
  EXPECT_NEAR(cold(X, X).imag(), 2.0 * im(X, X).real(), 1e-14);

  EXPECT_THROW(alpha_keldysh(m, 0.0, 1.0), DomainError);
}

TEST(Polarizability, StaticModelIsFrequencyIndependent) {
  const auto m = PolarizabilityModel::static_isotropic(2.5);
  EXPECT_EQ(alpha_imag_axis(m, 0.0)(Z, Z), Complex(2.5));
  EXPECT_EQ(alpha_imag_axis(m, 1e6)(X, X), Complex(2.5));
  EXPECT_TRUE(alpha_real_axis(m, 3.0).is_real());
  EXPECT_TRUE(m.is_isotropic());
}

TEST(Polarizability, OffDiagonalEntriesAreMirrored) {
  PolarizabilityModel m = PolarizabilityModel::isotropic(1.0, 1.0, 0.2);
  m.set(X, Z, {0.3, 1.5, 0.1});
  EXPECT_FALSE(m.is_diagonal());
  EXPECT_FALSE(m.is_isotropic());
  const auto a = alpha_real_axis(m, 0.7);
  EXPECT_TRUE(a.is_symmetric());
  EXPECT_NE(a(Z, X), Complex(0.0));
  EXPECT_TRUE(alpha_imag_axis(m, 0.4).is_real());
  EXPECT_THROW(m.set(X, Y, {-1.0, 1.0, 0.1}), std::invalid_argument);
}

TEST(Polarizability, PassivityMonotonicityCrossing) {
  RandomModels gen;
  const auto grid = log_grid(1e-3, 1e3, 60);
  for (int draw = 0; draw < 100; ++draw) {
    const auto m = gen.particle(draw);
    double prev[3] = {INFINITY, INFINITY, INFINITY};
    for (double z : grid) {
      const auto a = alpha_imag_axis(m, z);
      EXPECT_TRUE(a.is_real());
      EXPECT_TRUE(a.is_symmetric());
      for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_LE(a(i, i).real(), prev[i]);
        prev[i] = a(i, i).real();
      }
    }
    for (double w : grid) {
      const auto a = alpha_real_axis(m, w);
      for (std::size_t i = 0; i < 3; ++i) EXPECT_GE(w * a(i, i).imag(), 0.0);
      EXPECT_EQ(alpha_real_axis(m, -w), a.conj());
    }
  }
}

TEST(Polarizability, KramersKronigSpotCheck) {
  // alpha(i zeta) = (2/pi) int_0^inf w Im alpha(w) / (w^2 + zeta^2) dw
  const Oscillator o{1.3, 1.0, 0.4};
  NumericsPolicy p;
  p.rel_tol = 1e-10;
  for (double zeta : {0.0, 0.3, 1.0, 4.0}) {
    auto f = [&](double w) { return w * o.real_axis(w).imag() / (w * w + zeta * zeta); };
    const auto r = integrate_semi_infinite(f, 0.0, p, {.scale = 1.0, .breakpoints = {1.0}});
    const double kk = 2.0 / std::numbers::pi * r.value;
    EXPECT_NEAR(kk / o.imag_axis(zeta), 1.0, 1e-6) << "zeta " << zeta;
  }
}
