#include "nanoforce/keldysh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nanoforce/response_models.hpp"

using namespace nanoforce;

namespace {

constexpr Branch kF = Branch::forward;
constexpr Branch kB = Branch::backward;
constexpr double kEps = std::numeric_limits<double>::epsilon();

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng)};
}

}  // namespace

TEST(ContourComponents, Examples) {
  const KeldyshTriple<Complex> zero{};
  for (auto l : {kF, kB})
    for (auto s : {kF, kB}) EXPECT_EQ(contour_component(zero, l, s), Complex(0.0));

  const KeldyshTriple<Complex> t{1.0, 2.0, 3.0};
  EXPECT_EQ(contour_component(t, kF, kF), Complex(3.0));
  EXPECT_EQ(contour_component(t, kB, kF), Complex(1.0));
  EXPECT_EQ(contour_component(t, kF, kB), Complex(2.0));
  EXPECT_EQ(contour_component(t, kB, kB), Complex(0.0));
}

TEST(ContourComponents, InverseExamples) {
  const auto z = triple_from_components<Complex>(0.0, 0.0, 0.0, 0.0, 1e-12);
  EXPECT_EQ(z.retarded, Complex(0.0));
  EXPECT_EQ(z.keldysh, Complex(0.0));

  const auto t = triple_from_components<Complex>(3.0, 2.0, 1.0, 0.0, 1e-12);
  EXPECT_EQ(t.retarded, Complex(1.0));
  EXPECT_EQ(t.advanced, Complex(2.0));
  EXPECT_EQ(t.keldysh, Complex(3.0));

  EXPECT_THROW(triple_from_components<Complex>(1.0, 0.0, 0.0, 0.0, 1e-12), InconsistentComponents);
}

TEST(ContourComponents, RandomRoundTrip) {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 1000; ++n) {
    const KeldyshTriple<Complex> t{random_complex(rng), random_complex(rng), random_complex(rng)};
    const Complex g11 = contour_component(t, kF, kF), g12 = contour_component(t, kF, kB);
    const Complex g21 = contour_component(t, kB, kF), g22 = contour_component(t, kB, kB);
    const double scale = std::max({std::abs(t.retarded), std::abs(t.advanced), std::abs(t.keldysh)});
    EXPECT_LE(std::abs(g11 + g22 - g12 - g21), 4 * kEps * scale);
    const auto back = triple_from_components(g11, g12, g21, g22, 8 * kEps);
    EXPECT_LE(std::abs(back.retarded - t.retarded), 4 * kEps * scale);
    EXPECT_LE(std::abs(back.advanced - t.advanced), 4 * kEps * scale);
    EXPECT_LE(std::abs(back.keldysh - t.keldysh), 4 * kEps * scale);
  }
}

TEST(ContourComponents, TensorValued) {
  const auto m = PolarizabilityModel::isotropic(1.0, 1.0, 0.3);
  const Tensor3C r = alpha_real_axis(m, 0.8);
  const KeldyshTriple<Tensor3C> t{r, r.conj(), alpha_keldysh(m, 0.8, 0.5)};
  const auto back = triple_from_components(contour_component(t, kF, kF), contour_component(t, kF, kB),
                                           contour_component(t, kB, kF), contour_component(t, kB, kB),
                                           1e-14);
  EXPECT_LE((back.retarded - t.retarded).max_abs(), 1e-15);
  EXPECT_LE((back.keldysh - t.keldysh).max_abs(), 1e-15);
}

TEST(EquilibriumKeldysh, MatchesFluctuationDissipationOnModels) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const auto m = PolarizabilityModel::diagonal({1.0, 1.0, 0.2}, {0.5, 2.0, 0.1}, {2.0, 0.7, 1.0});
  for (int n = 0; n < 200; ++n) {
    const double omega = u(rng);
    const double T = std::exp(u(rng) / 2);
    const Tensor3C R = alpha_real_axis(m, omega);
    const Tensor3C K = alpha_keldysh(m, omega, T);
    const double h = 1.0 / std::tanh(omega / (2 * T));
    for (std::size_t i = 0; i < 3; ++i) {
      const Complex expected(0.0, 2.0 * h * R(i, i).imag());
      EXPECT_LE(std::abs(K(i, i) - expected), 2 * kEps * std::abs(expected));
    }
  }
}

TEST(DriftDistribution, Examples) {
  EXPECT_NEAR(drift_distribution(2.0, 0.0, 1.0), 1.3130352854993313, 1e-15);
  EXPECT_NEAR(drift_distribution(60.0, 10.0, 1.0), 1.0, 1e-10);
  EXPECT_NEAR(drift_distribution(-40.0, 10.0, 1.0), -1.0, 1e-10);
  EXPECT_THROW(drift_distribution(1.0, 1.0, 1.0), PoleError);
  EXPECT_THROW(drift_distribution(1.0, 0.0, 0.0), DomainError);
}

TEST(DriftDistribution, OddUnderReversal) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int n = 0; n < 500; ++n) {
    const double w = u(rng), kv = u(rng), T = std::exp(u(rng));
    if (w == kv) continue;
    EXPECT_EQ(drift_distribution(-w, -kv, T), -drift_distribution(w, kv, T));
    EXPECT_EQ(drift_distribution(w, 0.0, T), equilibrium_distribution(w, T));
  }
}

TEST(TransverseProjector, Example) {
  const Tensor3C t = transverse_projector({0.0, 0.0, 2.0 * std::numbers::pi}, 1.0);
  const Tensor3C expected = Tensor3C::diagonal(1.0, 1.0, 0.0);
  EXPECT_LE((t - expected).max_abs(), 1e-15);
  EXPECT_THROW(transverse_projector({0.0, 0.0, 0.0}, 1.0), DomainError);
}

TEST(TransverseProjector, RandomWaveVectors) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int draw = 0; draw < 200; ++draw) {
    const Vec3 k{n(rng), n(rng), n(rng)};
    const double c = std::exp(n(rng));
    const Tensor3C t = transverse_projector(k, c);
    EXPECT_TRUE(t.is_symmetric(1e-15 * t.max_abs()));
    const double kk = norm(k);
    for (std::size_t i = 0; i < 3; ++i) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < 3; ++j) s += t(i, j) * k[j] / kk;
      EXPECT_LE(std::abs(s), 1e-14 * t.max_abs());
    }
    EXPECT_NEAR(t.trace().real() * kk / (2 * std::numbers::pi * c * c), 2.0, 1e-14);
  }
}

TEST(FreePhotonKeldysh, Examples) {
  const auto at_rest = photon_keldysh_free(1.0, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}, 0.5);
  EXPECT_DOUBLE_EQ(at_rest.occupation, 1.0 / std::tanh(1.0));
  const Tensor3C expected = Tensor3C::diagonal(-2 * std::numbers::pi, -2 * std::numbers::pi, 0.0);
  EXPECT_LE((at_rest.shell.weight - expected).max_abs(), 1e-14);
  EXPECT_LE((at_rest.shell.weight_neg + expected).max_abs(), 1e-14);

  const auto moving = photon_keldysh_free(1.0, {0.3, -0.2, 0.9}, {0.0, 0.0, 0.1}, 0.5);
  EXPECT_DOUBLE_EQ(moving.occupation, drift_distribution(1.0, 0.09, 0.5));
  EXPECT_THROW(photon_keldysh_free(1.0, {0, 0, 1}, {0, 0, 1.0}, 0.5), DomainError);
}

TEST(FreePhotonKeldysh, WeightsAreTransverse) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int draw = 0; draw < 100; ++draw) {
    const Vec3 k{n(rng), n(rng), n(rng)};
    const auto p = photon_keldysh_free(0.7, k, {0.0, 0.0, 0.0}, 1.0);
    for (const Tensor3C* w : {&p.shell.weight, &p.shell.weight_neg})
      for (std::size_t i = 0; i < 3; ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < 3; ++j) s += (*w)(i, j) * k[j];
        EXPECT_LE(std::abs(s), 1e-13 * w->max_abs() * norm(k));
      }
  }
}
