#include "isingbell/corrkit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>

#include "isingbell/error.hpp"

namespace isingbell {

namespace {

using cd = std::complex<double>;

Eigen::Matrix2cd pauli(int i) {
  Eigen::Matrix2cd s;
  switch (i) {
    case 0:
      s << 0, 1, 1, 0;
      break;
    case 1:
      s << 0, cd(0, -1), cd(0, 1), 0;
      break;
    default:
      s << 1, 0, 0, -1;
      break;
  }
  return s;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

const std::array<Eigen::Matrix4cd, 9>& pauli_products() {
  static const std::array<Eigen::Matrix4cd, 9> table = [] {
    std::array<Eigen::Matrix4cd, 9> t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t[3 * i + j] = kron(pauli(i), pauli(j));
    return t;
  }();
  return table;
}

void require_finite(std::initializer_list<double> xs, const char* where) {
  for (double x : xs)
    if (!std::isfinite(x))
      fail(ErrorKind::invalid_argument,
           std::string(where) + ": non-finite input");
}

void require_valid(const ValidationReport& report, const char* where) {
  if (report.empty()) return;
  std::ostringstream os;
  os << where << ": invalid two-qubit state (";
  for (size_t i = 0; i < report.size(); ++i)
    os << (i ? ", " : "") << report[i].constraint << " off by "
       << report[i].magnitude;
  os << ")";
  fail(ErrorKind::invalid_argument, os.str());
}

double bell_from_correlation(const CorrelationMatrix& l) {
  auto lam = symmetric_eigenvalues_3x3(l.transpose() * l);
  double s = std::max(0.0, lam[0] + lam[1]);
  return 2.0 * std::sqrt(s);
}

// Cyclic Jacobi; used where the trigonometric route loses digits.
std::array<double, 3> jacobi_eigenvalues(Eigen::Matrix3d a) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (off == 0.0 || off < 1e-36 * a.squaredNorm()) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a(p, q) == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = std::copysign(1.0, theta) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
        rot(p, p) = c;
        rot(q, q) = c;
        rot(p, q) = s;
        rot(q, p) = -s;
        a = rot.transpose() * a * rot;
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  std::array<double, 3> ev{a(0, 0), a(1, 1), a(2, 2)};
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

}  // namespace

XState xstate_from_correlators(double m_z, double ds_z, double q_zz,
                               double q_xx) {
  require_finite({m_z, ds_z, q_zz, q_xx}, "xstate_from_correlators");
  XState s;
  s.u_plus = 0.25 + m_z + q_zz;
  s.u_minus = 0.25 - m_z + q_zz;
  s.v_plus = 0.25 + ds_z - q_zz;
  s.v_minus = 0.25 - ds_z - q_zz;
  s.z = 2.0 * q_xx;
  return s;
}

DensityMatrix to_density_matrix(const XState& s) {
  DensityMatrix rho = DensityMatrix::Zero();
  rho(0, 0) = s.u_plus;
  rho(1, 1) = s.v_plus;
  rho(2, 2) = s.v_minus;
  rho(3, 3) = s.u_minus;
  rho(1, 2) = s.z;
  rho(2, 1) = s.z;
  return rho;
}

ValidationReport validate_state(const XState& s, double tol) {
  if (!(tol > 0.0))
    fail(ErrorKind::invalid_argument, "validate_state: tol must be positive");
  ValidationReport report;
  double trace = s.u_plus + s.u_minus + s.v_plus + s.v_minus;
  if (std::abs(trace - 1.0) > tol)
    report.push_back({"trace", std::abs(trace - 1.0)});
  const std::array<std::pair<const char*, double>, 4> diag{
      {{"u_plus", s.u_plus},
       {"u_minus", s.u_minus},
       {"v_plus", s.v_plus},
       {"v_minus", s.v_minus}}};
  for (auto [name, value] : diag)
    if (value < -tol)
      report.push_back({std::string("diagonal ") + name, -value});
  double det = s.v_plus * s.v_minus - s.z * s.z;
  if (det < -tol) report.push_back({"inner block positivity", -det});
  return report;
}

ValidationReport validate_state(const DensityMatrix& rho, double tol) {
  if (!(tol > 0.0))
    fail(ErrorKind::invalid_argument, "validate_state: tol must be positive");
  ValidationReport report;
  if (!rho.allFinite()) {
    report.push_back({"finite entries", std::numeric_limits<double>::infinity()});
    return report;
  }
  double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) report.push_back({"hermiticity", herm});
  cd trace = rho.trace();
  double trace_err = std::abs(trace - cd(1.0, 0.0));
  if (trace_err > tol) report.push_back({"trace", trace_err});
  DensityMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(h, Eigen::EigenvaluesOnly);
  double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -tol) report.push_back({"positivity", -min_ev});
  return report;
}

XState clamp_rounding_negatives(XState s, double tol) {
  for (double* d : {&s.u_plus, &s.u_minus, &s.v_plus, &s.v_minus})
    if (*d < 0.0 && *d >= -tol) *d = 0.0;
  return s;
}

CorrelationMatrix correlation_matrix(const DensityMatrix& rho) {
  const auto& table = pauli_products();
  CorrelationMatrix l;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      l(i, j) = (rho * table[3 * i + j]).trace().real();
  return l;
}

CorrelationMatrix correlation_matrix(const XState& s) {
  require_valid(validate_state(s), "correlation_matrix");
  return correlation_matrix(to_density_matrix(s));
}

std::array<double, 3> symmetric_eigenvalues_3x3(const Eigen::Matrix3d& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {0.0, 0.0, 0.0};
  const double q = a.trace() / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) +
                    (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p <= 1e-12 * scale) return jacobi_eigenvalues(a);
  const Eigen::Matrix3d b = (a - q * Eigen::Matrix3d::Identity()) / p;
  const double r = b.determinant() / 2.0;
  // Near a double root acos() amplifies rounding in r by ~1/sqrt(1-|r|).
  if (1.0 - std::abs(r) < 1e-6) return jacobi_eigenvalues(a);
  const double phi = std::acos(std::clamp(r, -1.0, 1.0)) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::array<double, 3> ev{e1, e2, e3};
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

BellResult bell_horodecki(const DensityMatrix& rho) {
  require_valid(validate_state(rho), "bell_horodecki");
  BellResult out;
  out.value = bell_from_correlation(correlation_matrix(rho));
  out.violated = out.value > 2.0;
  return out;
}

BellResult bell_horodecki(const XState& s) {
  require_valid(validate_state(s), "bell_horodecki");
  const double value = bell_from_correlation(
      correlation_matrix(to_density_matrix(s)));
  const double q_xx = s.z / 2.0;
  const double q_zz = (s.u_plus + s.u_minus - s.v_plus - s.v_minus) / 4.0;
  BellResult closed = bell_closed_form(q_zz, q_xx);
  if (std::abs(closed.value - value) > 1e-10) {
    std::ostringstream os;
    os << "bell_horodecki: general route " << value
       << " disagrees with closed form " << closed.value;
    fail(ErrorKind::numerical_failure, os.str());
  }
  closed.value = value;
  closed.violated = value > 2.0;
  return closed;
}

BellResult bell_closed_form(double q_zz, double q_xx) {
  require_finite({q_zz, q_xx}, "bell_closed_form");
  BellResult out;
  out.n1 = 8.0 * std::hypot(q_zz, q_xx);
  out.n2 = 8.0 * std::sqrt(2.0 * q_xx * q_xx);
  out.value = std::max(*out.n1, *out.n2);
  out.violated = out.value > 2.0;
  return out;
}

double concurrence_wootters(const DensityMatrix& rho) {
  require_valid(validate_state(rho), "concurrence_wootters");
  const Eigen::Matrix4cd yy = kron(pauli(1), pauli(1));
  const DensityMatrix h = 0.5 * (rho + rho.adjoint());
  const DensityMatrix tilde = yy * h.conjugate() * yy;

  // Eigenvalues of rho*tilde equal those of sqrt(rho) tilde sqrt(rho), which
  // is Hermitian and positive semidefinite.
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(h);
  Eigen::Vector4d roots =
      es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const DensityMatrix sqrt_rho =
      es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  const DensityMatrix r = sqrt_rho * tilde * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<DensityMatrix> er(0.5 * (r + r.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  std::array<double, 4> mu;
  for (int i = 0; i < 4; ++i) mu[i] = std::sqrt(std::max(0.0, er.eigenvalues()(i)));
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return std::clamp(mu[0] - mu[1] - mu[2] - mu[3], 0.0, 1.0);
}

double concurrence_wootters(const XState& s) {
  require_valid(validate_state(s), "concurrence_wootters");
  return concurrence_wootters(to_density_matrix(s));
}

double concurrence_closed_form(double q_zz, double q_xx, double m_z) {
  require_finite({q_zz, q_xx, m_z}, "concurrence_closed_form");
  // (1/4 + q_zz)^2 - M_z^2 = u_plus u_minus.
  const double u_plus = 0.25 + q_zz + m_z;
  const double u_minus = 0.25 + q_zz - m_z;
  if (u_plus * u_minus < -1e-12)
    fail(ErrorKind::invalid_argument,
         "concurrence_closed_form: (1/4 + q_zz)^2 < M_z^2, state is not "
         "physical");
  return concurrence_from_populations(std::max(0.0, u_plus), std::max(0.0, u_minus),
                                      2.0 * q_xx);
}

double concurrence_from_populations(double u_plus, double u_minus, double z) {
  require_finite({u_plus, u_minus, z}, "concurrence_from_populations");
  if (u_plus < 0.0 || u_minus < 0.0)
    fail(ErrorKind::invalid_argument,
         "concurrence_from_populations: negative population");
  const double c = 2.0 * std::max(0.0, std::abs(z) - std::sqrt(u_plus * u_minus));
  return std::min(c, 1.0);
}

}  // namespace isingbell
