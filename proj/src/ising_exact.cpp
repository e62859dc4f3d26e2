#include "isingbell/ising_exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "isingbell/error.hpp"

namespace isingbell {

namespace {

double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    if (std::abs(an - bn) <= 1e-16 * an) return an;
    a = an;
    b = bn;
  }
  return a;
}

// gamma - delta / 2 where gamma = 1 - agm(1, 1 - delta). The first AGM
// step contributes exactly delta / 2; the rest is summed from the gaps
// a_n - b_n = (a_{n-1} - b_{n-1})^2 / (2 (sqrt a_{n-1} + sqrt b_{n-1})^2),
// which never cancel.
double agm_excess(double delta) {
  double a = 1.0 - 0.5 * delta;
  double b = std::sqrt(1.0 - delta);
  const double root = 1.0 + b;
  double gap = delta * delta / (2.0 * root * root);
  double sum = 0.0;
  for (int i = 0; i < 64 && gap > 0.0; ++i) {
    sum += 0.5 * gap;
    const double s = std::sqrt(a) + std::sqrt(b);
    const double next_gap = gap * gap / (2.0 * s * s);
    const double next_a = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next_a;
    if (next_gap <= 1e-17 * sum) break;
    gap = next_gap;
  }
  return sum;
}

void require_finite(double k, const char* where) {
  if (!std::isfinite(k))
    fail(ErrorKind::invalid_argument, std::string(where) + ": non-finite K");
}

// (|eps|, 1 - |eps|) with whichever of the two is small computed directly.
std::pair<double, double> nn_correlation_pair(double a) {
  if (a == 0.0) return {0.0, 1.0};
  if (std::abs(a - critical_coupling()) < kNearCriticalBand)
    return {std::numbers::sqrt2 / 2.0, 1.0 - std::numbers::sqrt2 / 2.0};
  const double u = std::exp(-4.0 * a);
  const double t = (1.0 - u) / (1.0 + u);
  if (a > critical_coupling()) {
    // Here k' = 2t^2 - 1 and eps = (1 + k'/g) / (2t) with g = agm(1, k').
    // Writing t = 1 - tau, k' = 1 - delta and g = 1 - gamma, the O(tau)
    // parts of 2tg - g - k' cancel analytically, leaving
    //   1 - eps = (2 tau gamma - tau^2 - (gamma - delta/2)) / (2 t g),
    // a combination of same-sized O(tau^2) terms.
    const double tau = 2.0 * u / (1.0 + u);
    const double delta = 2.0 * tau * (2.0 - tau);
    const double excess = agm_excess(delta);
    const double gamma = 0.5 * delta + excess;
    const double rest =
        (2.0 * tau * gamma - tau * tau - excess) / (2.0 * t * (1.0 - gamma));
    return {1.0 - rest, rest};
  }
  // Modulus k = 2 sinh(2K) / cosh^2(2K); with x = sinh 2K the complement is
  // k' = (1 - x^2) / (1 + x^2), which stays accurate next to K_c where
  // forming 1 - k^2 directly would cancel.
  const double x = std::sinh(2.0 * a);
  const double ell = elliptic_K_complementary((1.0 - x * x) / (1.0 + x * x));
  const double eps = 0.5 / t * (1.0 + 2.0 / std::numbers::pi * (2.0 * t * t - 1.0) * ell);
  return {eps, 1.0 - eps};
}

}  // namespace

double elliptic_K(double k) {
  if (!(k >= 0.0) || !(k < 1.0 - 1e-12)) {
    std::ostringstream os;
    os << "elliptic_K: modulus " << k << " outside [0, 1 - 1e-12)";
    fail(ErrorKind::out_of_domain, os.str());
  }
  return std::numbers::pi / (2.0 * agm(1.0, std::sqrt((1.0 - k) * (1.0 + k))));
}

double elliptic_K_complementary(double kprime) {
  if (!(kprime > 0.0) || !(kprime <= 1.0))
    fail(ErrorKind::out_of_domain,
         "elliptic_K_complementary: k' must lie in (0, 1]");
  return std::numbers::pi / (2.0 * agm(1.0, kprime));
}

double critical_coupling() { return 0.5 * std::log1p(std::numbers::sqrt2); }

double nn_correlation_complement(double k) {
  require_finite(k, "nn_correlation_complement");
  return nn_correlation_pair(std::abs(k)).second;
}

double nn_correlation(double k) {
  require_finite(k, "nn_correlation");
  return std::copysign(nn_correlation_pair(std::abs(k)).first, k);
}

double magnetization_complement(double k) {
  require_finite(k, "magnetization_complement");
  const double a = std::abs(k);
  if (a <= critical_coupling() + kNearCriticalBand) return 1.0;
  const double s = std::sinh(2.0 * a);
  return -std::expm1(std::log1p(-1.0 / (s * s * s * s)) / 8.0);
}

double spontaneous_magnetization(double k) {
  require_finite(k, "spontaneous_magnetization");
  return 1.0 - magnetization_complement(k);
}

double uniform_magnetization(double k) {
  return k > 0.0 ? spontaneous_magnetization(k) : 0.0;
}

double staggered_magnetization(double k) {
  return k < 0.0 ? spontaneous_magnetization(k) : 0.0;
}

IsingPoint evaluate_ising(double k) {
  IsingPoint pt;
  pt.k = k;
  require_finite(k, "evaluate_ising");
  const auto [eps, rest] = nn_correlation_pair(std::abs(k));
  pt.epsilon = std::copysign(eps, k);
  pt.epsilon_complement = rest;
  pt.m_complement = magnetization_complement(k);
  pt.m_uniform = uniform_magnetization(k);
  pt.m_staggered = staggered_magnetization(k);
  pt.near_critical =
      std::abs(std::abs(k) - critical_coupling()) < kNearCriticalBand;
  return pt;
}

double free_energy_density(double k) {
  require_finite(k, "free_energy_density");
  // Even in K on the bipartite lattice.
  const double a = std::abs(k);
  const double c2 = std::cosh(2.0 * a);
  const double modulus = 2.0 * std::sinh(2.0 * a) / (c2 * c2);
  const double m2 = modulus * modulus;
  auto integrand = [m2](double theta) {
    const double s = std::sin(theta);
    return std::log(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - m2 * s * s))));
  };
  // tanh-sinh copes with the square-root endpoint singularity at K_c.
  double err = 0.0;
  boost::math::quadrature::tanh_sinh<double> rule;
  const double integral =
      rule.integrate(integrand, 0.0, std::numbers::pi / 2.0, 1e-14, &err);
  if (!std::isfinite(integral) || err > 1e-12)
    fail(ErrorKind::numerical_failure,
         "free_energy_density: quadrature did not converge");
  // ln(2 cosh 2K) written to avoid overflow for large K.
  const double log_2cosh = 2.0 * a + std::log1p(std::exp(-4.0 * a));
  return log_2cosh + integral / std::numbers::pi;
}

double specific_heat(double k) {
  require_finite(k, "specific_heat");
  if (std::abs(std::abs(k) - critical_coupling()) < kNearCriticalBand)
    fail(ErrorKind::out_of_domain, "specific_heat: diverges at K_c");
  // Step limited by the distance to K_c so the stencil never straddles it.
  const double dist = std::abs(std::abs(k) - critical_coupling());
  auto second = [k](double h) {
    return (free_energy_density(k + h) - 2.0 * free_energy_density(k) +
            free_energy_density(k - h)) /
           (h * h);
  };
  const double h = std::min(1e-3, 0.25 * dist);
  // Richardson on the O(h^2) error term.
  const double d2 = (4.0 * second(0.5 * h) - second(h)) / 3.0;
  return k * k * d2;
}

}  // namespace isingbell
