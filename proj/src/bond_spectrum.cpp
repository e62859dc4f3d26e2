#include "isingbell/bond_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <string>

#include "isingbell/error.hpp"

namespace isingbell {

namespace {

constexpr std::array<double, 4> kS1z{0.5, 0.5, -0.5, -0.5};
constexpr std::array<double, 4> kS2z{0.5, -0.5, 0.5, -0.5};

void require_beta(double beta, const char* where) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    fail(ErrorKind::invalid_argument,
         std::string(where) + ": beta must be positive and finite");
}

// Sum of coef * exp(exponent), returned relative to a common shift.
struct ExpTerm {
  double coef;
  double exponent;
};

double exp_ratio(std::initializer_list<ExpTerm> num,
                 std::initializer_list<ExpTerm> den) {
  double shift = -std::numeric_limits<double>::infinity();
  for (const auto& t : den) shift = std::max(shift, t.exponent);
  double n = 0.0;
  double d = 0.0;
  for (const auto& t : num) n += t.coef * std::exp(t.exponent - shift);
  for (const auto& t : den) d += t.coef * std::exp(t.exponent - shift);
  return n / d;
}

}  // namespace

Eigen::Matrix4d bond_observable_matrix(BondObservable o) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  switch (o) {
    case BondObservable::identity:
      m.setIdentity();
      break;
    case BondObservable::sz_sum:
      for (int i = 0; i < 4; ++i) m(i, i) = kS1z[i] + kS2z[i];
      break;
    case BondObservable::sz_diff:
      for (int i = 0; i < 4; ++i) m(i, i) = kS1z[i] - kS2z[i];
      break;
    case BondObservable::szsz:
      for (int i = 0; i < 4; ++i) m(i, i) = kS1z[i] * kS2z[i];
      break;
    case BondObservable::sxsx:
      m(0, 3) = m(3, 0) = 0.25;
      m(1, 2) = m(2, 1) = 0.25;
      break;
  }
  return m;
}

BondObservable parse_bond_observable(std::string_view name) {
  if (name == "identity") return BondObservable::identity;
  if (name == "sz_sum") return BondObservable::sz_sum;
  if (name == "sz_diff") return BondObservable::sz_diff;
  if (name == "szsz") return BondObservable::szsz;
  if (name == "sxsx") return BondObservable::sxsx;
  fail(ErrorKind::invalid_argument,
       "unknown bond observable '" + std::string(name) + "'");
}

std::string_view to_string(BondObservable o) {
  switch (o) {
    case BondObservable::identity: return "identity";
    case BondObservable::sz_sum: return "sz_sum";
    case BondObservable::sz_diff: return "sz_diff";
    case BondObservable::szsz: return "szsz";
    case BondObservable::sxsx: return "sxsx";
  }
  return "?";
}

double ShiftedPartition::log() const { return std::log(scaled) + log_shift; }

double ShiftedPartition::value() const {
  return scaled * std::exp(log_shift);
}

Eigen::Matrix4d bond_hamiltonian(const ModelParams& p, double mu1, double mu2) {
  if (std::abs(mu1) != 0.5 || std::abs(mu2) != 0.5)
    fail(ErrorKind::invalid_argument, "bond_hamiltonian: Ising spins must be +-1/2");
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i)
    h(i, i) = -p.J * kS1z[i] * kS2z[i] - p.J1 * (kS1z[i] * mu1 + kS2z[i] * mu2);
  // Delta (SxSx + SySy) = Delta/2 (S+S- + S-S+) couples |ud> and |du>.
  h(1, 2) = h(2, 1) = -0.5 * p.J * p.Delta;
  return h;
}

BondEigensystem bond_eigensystem(const ModelParams& p, double mu1, double mu2) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(
      bond_hamiltonian(p, mu1, mu2));
  BondEigensystem out;
  for (int i = 0; i < 4; ++i) {
    out[i].energy = es.eigenvalues()(i);
    out[i].vector = es.eigenvectors().col(i);
  }
  return out;
}

std::array<double, 2> class_representative(IsingClass c) {
  return c == IsingClass::aligned ? std::array<double, 2>{0.5, 0.5}
                                  : std::array<double, 2>{0.5, -0.5};
}

ShiftedPartition conditional_partition(const ModelParams& p, double beta,
                                       IsingClass c) {
  require_beta(beta, "conditional_partition");
  auto [mu1, mu2] = class_representative(c);
  const auto sys = bond_eigensystem(p, mu1, mu2);
  const double e0 = sys[0].energy;
  ShiftedPartition z;
  z.log_shift = -beta * e0;
  for (const auto& pair : sys) z.scaled += std::exp(-beta * (pair.energy - e0));
  return z;
}

KCoefficients coefficients_K(const ModelParams& p, double beta) {
  require_beta(beta, "coefficients_K");
  const double b = beta;
  const double half_j = 0.5 * b * p.J;
  const double half_j1 = 0.5 * b * p.J1;
  const double half_jd = 0.5 * b * p.J * p.Delta;
  const double root = std::sqrt(p.J1 * p.J1 + p.J * p.J * p.Delta * p.Delta);
  const double half_root = 0.5 * b * root;

  // Each hyperbolic function is expanded into exponentials with a common
  // shift so that large beta stays finite. The overall factors of 1/2 from
  // sinh/cosh cancel between numerator and denominator.
  KCoefficients k;
  // sinh(bJD/2) / (e^{bJ/2} cosh(bJ1/2) + cosh(bJD/2))
  k.k1 = exp_ratio({{1.0, half_jd}, {-1.0, -half_jd}},
                   {{1.0, half_j + half_j1},
                    {1.0, half_j - half_j1},
                    {1.0, half_jd},
                    {1.0, -half_jd}});
  // sinh(b r/2) / (e^{bJ/2} + cosh(b r/2)) * J D / r
  k.k2 = root == 0.0
             ? 0.0
             : exp_ratio({{1.0, half_root}, {-1.0, -half_root}},
                         {{2.0, half_j}, {1.0, half_root}, {1.0, -half_root}}) *
                   p.J * p.Delta / root;
  // (cosh(bJ1/2) - e^{-bJ/2} cosh(bJD/2)) / (cosh(bJ1/2) + e^{-bJ/2} cosh(bJD/2))
  k.k3 = exp_ratio({{1.0, half_j1},
                    {1.0, -half_j1},
                    {-1.0, -half_j + half_jd},
                    {-1.0, -half_j - half_jd}},
                   {{1.0, half_j1},
                    {1.0, -half_j1},
                    {1.0, -half_j + half_jd},
                    {1.0, -half_j - half_jd}});
  // (e^{bJ/2} - cosh(b r/2)) / (e^{bJ/2} + cosh(b r/2))
  k.k4 = exp_ratio({{2.0, half_j}, {-1.0, half_root}, {-1.0, -half_root}},
                   {{2.0, half_j}, {1.0, half_root}, {1.0, -half_root}});
  return k;
}

EffectiveIsing effective_coupling(const ModelParams& p, double beta) {
  require_beta(beta, "effective_coupling");
  const double la = conditional_partition(p, beta, IsingClass::aligned).log();
  const double ln = conditional_partition(p, beta, IsingClass::anti_aligned).log();
  EffectiveIsing e;
  e.k_eff = 0.5 * (la - ln);
  e.sign = (e.k_eff > 0.0) - (e.k_eff < 0.0);
  e.log_a = 0.5 * (la + ln);
  return e;
}

double conditional_expectation(const ModelParams& p, double beta,
                               BondObservable o, double mu1, double mu2) {
  require_beta(beta, "conditional_expectation");
  const auto sys = bond_eigensystem(p, mu1, mu2);
  const Eigen::Matrix4d op = bond_observable_matrix(o);
  const double e0 = sys[0].energy;
  double num = 0.0;
  double den = 0.0;
  for (const auto& pair : sys) {
    const double w = std::exp(-beta * (pair.energy - e0));
    num += w * pair.vector.dot(op * pair.vector);
    den += w;
  }
  return num / den;
}

BondCoefficients bond_observable_coeffs(const ModelParams& p, double beta,
                                        BondObservable o) {
  if (o == BondObservable::identity)
    fail(ErrorKind::invalid_argument,
         "bond_observable_coeffs: unsupported observable 'identity'");
  require_beta(beta, "bond_observable_coeffs");
  const double fpp = conditional_expectation(p, beta, o, 0.5, 0.5);
  const double fmm = conditional_expectation(p, beta, o, -0.5, -0.5);
  const double fpm = conditional_expectation(p, beta, o, 0.5, -0.5);
  const double fmp = conditional_expectation(p, beta, o, -0.5, 0.5);

  BondCoefficients k;
  k.a = (fpp + fmm + fpm + fmp) / 4.0;
  k.c = (fpp + fmm - fpm - fmp) / 4.0;
  k.b = (fpp - fmm) / 2.0;
  k.d = (fpm - fmp) / 2.0;

  constexpr double tol = 1e-10;
  auto expect_zero = [&](double v, const char* what) {
    if (std::abs(v) > tol) {
      std::ostringstream os;
      os << "bond_observable_coeffs(" << to_string(o) << "): " << what
         << " should vanish by symmetry, got " << v;
      fail(ErrorKind::numerical_failure, os.str());
    }
  };
  switch (o) {
    case BondObservable::sz_sum:
      expect_zero(fpm, "F(+-)");
      expect_zero(fmp, "F(-+)");
      expect_zero(k.a, "a");
      k.a = k.c = k.d = 0.0;
      break;
    case BondObservable::sz_diff:
      expect_zero(fpp, "F(++)");
      expect_zero(fmm, "F(--)");
      k.a = k.b = k.c = 0.0;
      break;
    case BondObservable::szsz:
    case BondObservable::sxsx:
      expect_zero(k.b, "b");
      expect_zero(k.d, "d");
      k.b = k.d = 0.0;
      break;
    case BondObservable::identity:
      break;
  }
  return k;
}

}  // namespace isingbell
