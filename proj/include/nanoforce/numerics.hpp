#pragma once

// Deterministic adaptive quadrature and Matsubara summation.
//
// Quadrature is globally adaptive 7/15-point Gauss-Kronrod with the QUADPACK
// error heuristic. Semi-infinite ranges [a, inf) are first mapped onto [0, 1)
// by x = a + L u / (1 - u); the caller supplies the decay scale L and any
// interior features (resonances) as breakpoints. Node placement depends only
// on the integrand values, so reruns are bit-identical.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace nanoforce {

struct NumericsPolicy {
  double rel_tol = 1e-8;
  double abs_tol = 1e-30;
  std::size_t max_subdivisions = 200;
  std::size_t matsubara_max_terms = 100000;
  std::size_t tail_consecutive = 3;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("rel_tol must be in (0, 1)");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("abs_tol must be positive");
    if (max_subdivisions == 0 || matsubara_max_terms == 0 || tail_consecutive == 0)
      throw std::invalid_argument("numerics counts must be positive");
  }

  double tolerance_for(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }

  NumericsPolicy tightened(double factor) const {
    NumericsPolicy p = *this;
    p.rel_tol *= factor;
    return p;
  }
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

template <std::size_t N>
using Values = std::array<double, N>;

template <std::size_t N>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  Values<N> value{};
  double error = 0.0;  // largest component error
  bool splittable = true;
};

// QUADPACK qk15 nodes and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

//! 15-point Kronrod estimate with the QUADPACK error heuristic, applied per
//! component. g maps double -> Values<N>.
template <std::size_t N, class G>
Panel<N> gauss_kronrod_15(G& g, double a, double b) {
  constexpr double epmach = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  std::array<Values<N>, 7> fv1{}, fv2{};
  const Values<N> fc = g(centr);
  for (std::size_t j = 0; j < 7; ++j) {
    const double absc = hlgth * kXgk[j];
    fv1[j] = g(centr - absc);
    fv2[j] = g(centr + absc);
  }

  Panel<N> p{a, b, {}, 0.0};
  for (std::size_t c = 0; c < N; ++c) {
    double resg = fc[c] * kWg[3];
    double resk = fc[c] * kWgk[7];
    double resabs = std::abs(resk);
    for (std::size_t j = 0; j < 7; ++j) {
      const double f1 = fv1[j][c], f2 = fv2[j][c];
      if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
      resk += kWgk[j] * (f1 + f2);
      resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc[c] - reskh);
    for (std::size_t j = 0; j < 7; ++j)
      resasc += kWgk[j] * (std::abs(fv1[j][c] - reskh) + std::abs(fv2[j][c] - reskh));

    double err = std::abs((resk - resg) * hlgth);
    resabs *= dhlgth;
    resasc *= dhlgth;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > uflow / (50.0 * epmach)) err = std::max(epmach * 50.0 * resabs, err);
    p.value[c] = resk * hlgth;
    p.error = std::max(p.error, err);
  }
  // Too narrow to bisect without collapsing onto a node.
  p.splittable = std::abs(b - a) > 1e3 * epmach * std::max(std::abs(a), std::abs(b)) &&
                 std::abs(b - a) > 1e3 * uflow;
  return p;
}

template <std::size_t N>
struct AdaptiveOutcome {
  Values<N> value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

//! Globally adaptive bisection over the partition given by `cuts`. Converged
//! when the summed error is within tolerance of the largest component.
template <std::size_t N, class G>
AdaptiveOutcome<N> adaptive(G& g, const std::vector<double>& cuts, const NumericsPolicy& policy) {
  std::vector<Panel<N>> panels;
  panels.reserve(policy.max_subdivisions + cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) panels.push_back(gauss_kronrod_15<N>(g, cuts[i], cuts[i + 1]));

  AdaptiveOutcome<N> r;
  r.evaluations = 15 * panels.size();
  for (;;) {
    Values<N> total{};
    double err = 0.0;
    for (const auto& p : panels) {
      for (std::size_t c = 0; c < N; ++c) total[c] += p.value[c];
      err += p.error;
    }
    double magnitude = 0.0;
    bool finite = std::isfinite(err);
    for (double v : total) {
      magnitude = std::max(magnitude, std::abs(v));
      finite = finite && std::isfinite(v);
    }
    r.value = total;
    r.error_estimate = err;
    if (!finite) {
      r.converged = false;
      return r;
    }
    if (err <= policy.tolerance_for(magnitude)) {
      r.converged = true;
      return r;
    }
    if (panels.size() >= policy.max_subdivisions) {
      r.converged = false;
      return r;
    }
    std::size_t worst = panels.size();
    for (std::size_t i = 0; i < panels.size(); ++i)
      if (panels[i].splittable && (worst == panels.size() || panels[i].error > panels[worst].error))
        worst = i;
    if (worst == panels.size()) {
      r.converged = false;
      return r;
    }
    const Panel<N> old = panels[worst];
    const double mid = 0.5 * (old.a + old.b);
    panels[worst] = gauss_kronrod_15<N>(g, old.a, mid);
    panels.push_back(gauss_kronrod_15<N>(g, mid, old.b));
    r.evaluations += 30;
  }
}

inline std::vector<double> finite_cuts(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

inline IntegralResult scalar_result(const AdaptiveOutcome<1>& o) {
  return {o.value[0], o.error_estimate, o.evaluations, o.converged};
}

}  // namespace detail

template <std::size_t N>
struct VectorIntegralResult {
  std::array<double, N> value{};
  double error_estimate = 0.0;  // bound on the largest component error
  std::size_t evaluations = 0;
  bool converged = true;
};

//! Integral of f over [a, b], with optional interior breakpoints.
template <class F>
IntegralResult integrate(F&& f, double a, double b, const NumericsPolicy& policy,
                         std::span<const double> breakpoints = {}) {
  policy.validate();
  if (a == b) return {};
  if (a > b) {
    auto r = integrate(f, b, a, policy, breakpoints);
    r.value = -r.value;
    return r;
  }
  auto g = [&f](double x) { return detail::Values<1>{static_cast<double>(f(x))}; };
  return detail::scalar_result(detail::adaptive<1>(g, detail::finite_cuts(a, b, breakpoints), policy));
}

//! Vector-valued integral over [a, b]; f returns std::array<double, N>.
template <std::size_t N, class F>
VectorIntegralResult<N> integrate_vector(F&& f, double a, double b, const NumericsPolicy& policy,
                                         std::span<const double> breakpoints = {}) {
  policy.validate();
  if (!(a < b)) throw std::invalid_argument("integrate_vector needs a < b");
  auto g = [&f](double x) { return detail::Values<N>(f(x)); };
  const auto o = detail::adaptive<N>(g, detail::finite_cuts(a, b, breakpoints), policy);
  return {o.value, o.error_estimate, o.evaluations, o.converged};
}

struct SemiInfiniteHints {
  //! Length scale L of the map x = a + L u / (1 - u); roughly where the
  //! integrand has decayed by e.
  double scale = 1.0;
  std::vector<double> breakpoints{};
};

namespace detail {

template <std::size_t N, class F>
AdaptiveOutcome<N> semi_infinite(F& f, double a, const NumericsPolicy& policy,
                                 const SemiInfiniteHints& hints) {
  policy.validate();
  if (!(hints.scale > 0.0) || !std::isfinite(hints.scale))
    throw std::invalid_argument("semi-infinite scale hint must be positive and finite");
  const double scale = hints.scale;
  auto g = [&f, a, scale](double u) -> Values<N> {
    Values<N> out{};
    if (u >= 1.0) return out;
    const double one_minus = 1.0 - u;
    const double x = a + scale * u / one_minus;
    const double jacobian = scale / (one_minus * one_minus);
    out = Values<N>(f(x));
    for (auto& v : out)
      if (v != 0.0) v *= jacobian;
    return out;
  };
  std::vector<double> cuts{0.0};
  for (double x : hints.breakpoints)
    if (x > a && std::isfinite(x)) cuts.push_back((x - a) / (scale + (x - a)));
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return adaptive<N>(g, cuts, policy);
}

}  // namespace detail

//! Integral of f over [a, inf). f must decay at least like 1/x^2.
template <class F>
IntegralResult integrate_semi_infinite(F&& f, double a, const NumericsPolicy& policy,
                                       const SemiInfiniteHints& hints = {}) {
  auto wrapped = [&f](double x) { return detail::Values<1>{static_cast<double>(f(x))}; };
  return detail::scalar_result(detail::semi_infinite<1>(wrapped, a, policy, hints));
}

template <std::size_t N, class F>
VectorIntegralResult<N> integrate_semi_infinite_vector(F&& f, double a, const NumericsPolicy& policy,
                                                       const SemiInfiniteHints& hints = {}) {
  const auto o = detail::semi_infinite<N>(f, a, policy, hints);
  return {o.value, o.error_estimate, o.evaluations, o.converged};
}

//! Bosonic Matsubara frequencies zeta_s = 2 pi T s.
class MatsubaraGrid {
public:
  explicit MatsubaraGrid(double temperature) : temperature_(temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("Matsubara grid needs T > 0");
  }
  double temperature() const { return temperature_; }
  double zeta(std::size_t s) const {
    return 2.0 * std::numbers::pi * temperature_ * static_cast<double>(s);
  }
  double spacing() const { return 2.0 * std::numbers::pi * temperature_; }

private:
  double temperature_;
};

struct MatsubaraTerm {
  std::size_t s = 0;
  double zeta = 0.0;
  double value = 0.0;  // weighted contribution T (2 - delta_s0) g(zeta_s)
  double error = 0.0;
};

struct MatsubaraResult : IntegralResult {
  std::vector<MatsubaraTerm> terms;
  //! Remainder beyond the last explicit term (already included in value).
  double tail = 0.0;
  double tail_error = 0.0;
};

namespace detail {

inline IntegralResult as_result(double v) { return {v, 0.0, 1, std::isfinite(v)}; }
inline IntegralResult as_result(const IntegralResult& r) { return r; }

}  // namespace detail

//! T sum_{s>=0} (2 - delta_s0) g(zeta_s), summed in ascending s.
//!
//! Stops once `tail_consecutive` successive weighted terms are each below
//! rel_tol times the partial sum, or decrease so smoothly that the integral
//! continuation below is accurate to a tenth of that. The remainder is then estimated: for
//! geometrically decaying terms (ratio < 1/2) as a bound only; otherwise it is
//! added as (1/pi) int_{zeta_N + pi T}^inf g, the midpoint-rule continuation of
//! the sum, which requires g to be evaluable between Matsubara points.
//! `g` returns either double or IntegralResult.
template <class G>
MatsubaraResult matsubara_sum(G&& g, const MatsubaraGrid& grid, const NumericsPolicy& policy) {
  policy.validate();
  const double T = grid.temperature();
  MatsubaraResult r;
  r.converged = true;
  double partial = 0.0, err = 0.0;
  std::size_t small_run = 0;
  bool stopped = false;
  for (std::size_t s = 0; s < policy.matsubara_max_terms; ++s) {
    const double zeta = grid.zeta(s);
    const IntegralResult term = detail::as_result(g(zeta));
    const double weight = (s == 0 ? 1.0 : 2.0) * T;
    const double t = weight * term.value;
    partial += t;
    err += weight * term.error_estimate;
    r.evaluations += term.evaluations;
    r.converged = r.converged && term.converged;
    r.terms.push_back({s, zeta, t, weight * term.error_estimate});
    const double tol = std::max(policy.abs_tol, policy.rel_tol * std::abs(partial));
    // Small terms, or terms smooth enough that the integral continuation is
    // accurate (its leading error is |t_s - t_{s-1}| / 24) while decreasing.
    bool small = std::abs(t) <= tol;
    if (!small && s >= 8) {
      const double prev = r.terms[s - 1].value;
      small = std::abs(t) <= std::abs(prev) && std::abs(t - prev) / 24.0 <= 0.1 * tol;
    }
    small_run = small ? small_run + 1 : 0;
    if (small_run >= policy.tail_consecutive) {
      stopped = true;
      break;
    }
  }
  if (!stopped) r.converged = false;

  const std::size_t n = r.terms.size();
  if (stopped && n >= 2) {
    const double last = r.terms[n - 1].value;
    const double prev = r.terms[n - 2].value;
    const double ratio = prev != 0.0 ? std::abs(last / prev) : 0.0;
    if (last == 0.0) {
      // nothing left
    } else if (ratio < 0.5) {
      r.tail_error = std::abs(last) * ratio / (1.0 - ratio);
    } else {
      const double from = grid.zeta(n - 1) + 0.5 * grid.spacing();
      NumericsPolicy tail_policy = policy;
      tail_policy.abs_tol = std::max(policy.abs_tol, 0.01 * policy.rel_tol * std::abs(partial));
      auto integrand = [&g](double zeta) { return detail::as_result(g(zeta)).value; };
      const IntegralResult tail =
          integrate_semi_infinite(integrand, from, tail_policy, {.scale = from});
      r.tail = tail.value / std::numbers::pi;
      r.tail_error = tail.error_estimate / std::numbers::pi + std::abs(last - prev) / 24.0;
      r.evaluations += tail.evaluations;
      r.converged = r.converged && tail.converged;
    }
  }
  r.value = partial + r.tail;
  r.error_estimate = err + r.tail_error;
  if (!std::isfinite(r.value)) r.converged = false;
  if (r.converged && r.error_estimate > policy.tolerance_for(r.value)) r.converged = false;
  return r;
}

}  // namespace nanoforce
