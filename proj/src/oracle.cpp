#include "isingbell/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "isingbell/error.hpp"
#include "isingbell/ising_exact.hpp"

namespace isingbell::oracle {

namespace {

using cd = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

const Mat2c& pauli(int i) {
  static const std::array<Mat2c, 4> p = [] {
    std::array<Mat2c, 4> m;
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, cd(0, -1), cd(0, 1), 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return p[i];
}

Eigen::Matrix4cd kron(const Mat2c& a, const Mat2c& b) {
  Eigen::Matrix4cd k;
  for (int i1 = 0; i1 < 2; ++i1)
    for (int j1 = 0; j1 < 2; ++j1)
      for (int i2 = 0; i2 < 2; ++i2)
        for (int j2 = 0; j2 < 2; ++j2)
          k(2 * i1 + i2, 2 * j1 + j2) = a(i1, j1) * b(i2, j2);
  return k;
}

Mat2c dot_sigma(const Vec3& n) {
  return n[0] * pauli(1) + n[1] * pauli(2) + n[2] * pauli(3);
}

Eigen::Matrix3d pauli_correlations(const DensityMatrix& rho) {
  Eigen::Matrix3d l;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      l(i, j) = (rho * kron(pauli(i + 1), pauli(j + 1))).trace().real();
  return l;
}

Vec3 as_array(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

// Unit vector along v; keeps `fallback` when v vanishes.
Eigen::Vector3d unit_or(const Eigen::Vector3d& v, const Eigen::Vector3d& fallback) {
  const double n = v.norm();
  return n > 1e-300 ? Eigen::Vector3d(v / n) : fallback;
}

Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v;
  do {
    v = {g(rng), g(rng), g(rng)};
  } while (v.norm() < 1e-12);
  return v.normalized();
}

double chsh_from_l(const Eigen::Matrix3d& l, const Eigen::Vector3d& a,
                   const Eigen::Vector3d& ap, const Eigen::Vector3d& b,
                   const Eigen::Vector3d& bp) {
  return a.dot(l * (b + bp)) + ap.dot(l * (b - bp));
}

// Row transfer matrix T = D^{1/2} V D^{1/2} of a periodic strip. Bit j of a
// configuration index is site j; a set bit is spin down. V is the tensor
// product of the 2x2 bond weight over the sites, D the product of the same
// weight over horizontal neighbours.
class Strip {
 public:
  Strip(int width, const Eigen::Matrix2d& log_w)
      : width_(width), n_(std::size_t{1} << width) {
    shift_ = log_w.maxCoeff();
    w_ = (log_w.array() - shift_).exp().matrix();
    half_d_.resize(n_);
    for (std::size_t s = 0; s < n_; ++s) {
      double log_d = 0.0;
      for (int j = 0; j < width_; ++j)
        log_d += log_w(bit(s, j), bit(s, (j + 1) % width_)) - shift_;
      half_d_[s] = std::exp(0.5 * log_d);
    }
    solve();
  }

  double log_partition_per_site() const {
    return std::log(lambda_) / width_ + 2.0 * shift_;
  }

  // <g(s_j, s_j+1)> across the strip.
  double horizontal(const Eigen::Matrix2d& g) const {
    double sum = 0.0;
    for (std::size_t s = 0; s < n_; ++s) {
      double row = 0.0;
      for (int j = 0; j < width_; ++j)
        row += g(bit(s, j), bit(s, (j + 1) % width_));
      sum += psi_[s] * psi_[s] * row;
    }
    return sum / width_;
  }

  // <g(s_j, s'_j)> between consecutive rows.
  double vertical(const Eigen::Matrix2d& g) const {
    const Eigen::Matrix2d weighted = g.cwiseProduct(w_);
    Eigen::VectorXd x = half_d_.cwiseProduct(psi_);
    double sum = 0.0;
    for (int j = 0; j < width_; ++j) {
      Eigen::VectorXd y = x;
      for (int k = 0; k < width_; ++k) apply_site(y, k, k == j ? weighted : w_);
      sum += x.dot(y);
    }
    return sum / (lambda_ * width_);
  }

  // <s_0 s_r> within one row.
  double row_correlation(int r) const {
    double sum = 0.0;
    for (std::size_t s = 0; s < n_; ++s)
      sum += psi_[s] * psi_[s] * spin(s, 0) * spin(s, r);
    return sum;
  }

 private:
  static int bit(std::size_t s, int j) { return int((s >> j) & 1u); }
  static double spin(std::size_t s, int j) { return bit(s, j) ? -1.0 : 1.0; }

  void apply_site(Eigen::VectorXd& y, int j, const Eigen::Matrix2d& m) const {
    const std::size_t mask = std::size_t{1} << j;
    for (std::size_t s = 0; s < n_; ++s) {
      if (s & mask) continue;
      const double up = y[s];
      const double down = y[s | mask];
      y[s] = m(0, 0) * up + m(0, 1) * down;
      y[s | mask] = m(1, 0) * up + m(1, 1) * down;
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = half_d_.cwiseProduct(x);
    for (int j = 0; j < width_; ++j) apply_site(y, j, w_);
    return half_d_.cwiseProduct(y);
  }

  // Power iteration restricted to the sector even under a global spin flip,
  // which holds the dominant vector and excludes its ordered-phase partner.
  void solve() {
    constexpr int kMaxIterations = 200000;
    const std::size_t flip = n_ - 1;
    psi_ = Eigen::VectorXd::Constant(Eigen::Index(n_), 1.0 / std::sqrt(double(n_)));
    double previous = 0.0;
    for (int it = 0; it < kMaxIterations; ++it) {
      Eigen::VectorXd y = apply(psi_);
      for (std::size_t s = 0; s < n_ / 2; ++s) {
        const double avg = 0.5 * (y[s] + y[s ^ flip]);
        y[s] = y[s ^ flip] = avg;
      }
      lambda_ = psi_.dot(y);
      y.normalize();
      const double change = (y - psi_).lpNorm<Eigen::Infinity>();
      psi_ = y;
      if (change < 1e-13 && std::abs(lambda_ - previous) <= 1e-14 * lambda_) return;
      previous = lambda_;
    }
    std::ostringstream os;
    os << "strip transfer matrix: power iteration did not converge at width "
       << width_;
    fail(ErrorKind::numerical_failure, os.str());
  }

  int width_;
  std::size_t n_;
  double shift_ = 0.0;
  Eigen::Matrix2d w_;
  Eigen::VectorXd half_d_;
  Eigen::VectorXd psi_;
  double lambda_ = 0.0;
};

Eigen::Matrix2d ising_log_weight(double k) {
  Eigen::Matrix2d lw;
  lw << k, -k, -k, k;
  return lw;
}

Eigen::Matrix2d spin_product() {
  Eigen::Matrix2d g;
  g << 1, -1, -1, 1;
  return g;
}

void require_width(int width, int max_width, const char* where) {
  if (width < kMinStripWidth || width > max_width) {
    std::ostringstream os;
    os << where << ": width " << width << " outside [" << kMinStripWidth << ", "
       << max_width << "]";
    fail(ErrorKind::invalid_argument, os.str());
  }
}

double relative(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

CheckResult make_check(std::string name, double tolerance) {
  CheckResult c;
  c.name = std::move(name);
  c.tolerance = tolerance;
  return c;
}

void record(CheckResult& c, double deviation, const std::string& where) {
  ++c.samples;
  if (std::isnan(c.worst)) return;
  if (c.samples == 1 || !(deviation <= c.worst)) {
    c.worst = deviation;
    c.detail = where;
  }
}

void finish(CheckResult& c) { c.passed = c.samples > 0 && c.worst <= c.tolerance; }

std::string describe(const XState& x) {
  std::ostringstream os;
  os.precision(17);
  os << "u+=" << x.u_plus << " u-=" << x.u_minus << " v+=" << x.v_plus
     << " v-=" << x.v_minus << " z=" << x.z;
  return os.str();
}

double xstate_q_zz(const XState& x) {
  return (x.u_plus + x.u_minus - x.v_plus - x.v_minus) / 4.0;
}

}  // namespace

double chsh_value(const DensityMatrix& rho, const ChshSettings& s) {
  const Mat2c a = dot_sigma(s.a), ap = dot_sigma(s.a_prime);
  const Mat2c b = dot_sigma(s.b), bp = dot_sigma(s.b_prime);
  const Eigen::Matrix4cd op = kron(a, b) + kron(a, bp) + kron(ap, b) - kron(ap, bp);
  return (rho * op).trace().real();
}

ChshResult chsh_optimize(const DensityMatrix& rho, std::uint64_t seed,
                         int starts) {
  if (starts < 1) fail(ErrorKind::invalid_argument, "chsh_optimize: starts must be >= 1");
  const ValidationReport report = validate_state(rho);
  if (!report.empty())
    fail(ErrorKind::invalid_argument,
         "chsh_optimize: invalid state (" + report.front().constraint + ")");
  const Eigen::Matrix3d l = pauli_correlations(rho);

  constexpr int kMaxIterations = 10000;
  ChshResult best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int start = 0; start < starts; ++start) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                      std::uint32_t(start)};
    std::mt19937_64 rng(seq);
    Eigen::Vector3d a = random_unit(rng), ap = random_unit(rng);
    Eigen::Vector3d b = random_unit(rng), bp = random_unit(rng);
    double value = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < kMaxIterations; ++it) {
      b = unit_or(l.transpose() * (a + ap), b);
      bp = unit_or(l.transpose() * (a - ap), bp);
      a = unit_or(l * (b + bp), a);
      ap = unit_or(l * (b - bp), ap);
      const double next = chsh_from_l(l, a, ap, b, bp);
      const bool settled = next - value <= 1e-15 * std::max(1.0, std::abs(next));
      value = next;
      if (settled) break;
    }
    if (value > best.value) {
      best.value = value;
      best.settings = {as_array(a), as_array(ap), as_array(b), as_array(bp)};
    }
  }
  return best;
}

double ed_bond_trace(const ModelParams& p, double beta, BondObservable o,
                     double mu1, double mu2) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    fail(ErrorKind::invalid_argument, "ed_bond_trace: beta must be positive and finite");
  const Mat2c id = pauli(0);
  const Mat2c sx = 0.5 * pauli(1), sy = 0.5 * pauli(2), sz = 0.5 * pauli(3);
  const Eigen::Matrix4cd h =
      -p.J * (p.Delta * (kron(sx, sx) + kron(sy, sy)) + kron(sz, sz)) -
      p.J1 * (mu1 * kron(sz, id) + mu2 * kron(id, sz));

  Eigen::Matrix4cd op;
  switch (o) {
    case BondObservable::identity: op = kron(id, id); break;
    case BondObservable::sz_sum: op = kron(sz, id) + kron(id, sz); break;
    case BondObservable::sz_diff: op = kron(sz, id) - kron(id, sz); break;
    case BondObservable::szsz: op = kron(sz, sz); break;
    case BondObservable::sxsx: op = kron(sx, sx); break;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  const double e0 = es.eigenvalues().minCoeff();
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double w = std::exp(-beta * (es.eigenvalues()(i) - e0));
    const Eigen::Vector4cd v = es.eigenvectors().col(i);
    num += w * v.dot(op * v).real();
    den += w;
  }
  return num / den;
}

StripResult strip_transfer_matrix(double k, int width) {
  require_width(width, kMaxStripWidth, "strip_transfer_matrix");
  if (!(std::abs(k) <= 2.0))
    fail(ErrorKind::invalid_argument, "strip_transfer_matrix: need |K| <= 2");
  const Strip strip(width, ising_log_weight(k));
  return {strip.log_partition_per_site(), strip.vertical(spin_product()),
          strip.horizontal(spin_product())};
}

double strip_magnetization(double k, int width) {
  require_width(width, kMaxStripWidth, "strip_magnetization");
  if (width % 2 != 0)
    fail(ErrorKind::invalid_argument, "strip_magnetization: width must be even");
  if (!(std::abs(k) <= 2.0))
    fail(ErrorKind::invalid_argument, "strip_magnetization: need |K| <= 2");
  const Strip strip(width, ising_log_weight(std::abs(k)));
  return std::sqrt(std::max(0.0, strip.row_correlation(width / 2)));
}

double extrapolate_inverse_square(const std::vector<int>& widths,
                                  const std::vector<double>& values) {
  if (widths.size() != values.size() || widths.size() < 2)
    fail(ErrorKind::invalid_argument,
         "extrapolate_inverse_square: need at least two (width, value) pairs");
  std::vector<std::size_t> order(widths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return widths[x] > widths[y]; });
  const double w1 = widths[order[0]], w2 = widths[order[1]];
  if (!(w1 > w2) || !(w2 > 0))
    fail(ErrorKind::invalid_argument,
         "extrapolate_inverse_square: widths must be positive and distinct");
  const double v1 = values[order[0]], v2 = values[order[1]];
  return (w1 * w1 * v1 - w2 * w2 * v2) / (w1 * w1 - w2 * w2);
}

double extrapolate_geometric(const std::vector<double>& values) {
  if (values.size() < 3)
    fail(ErrorKind::invalid_argument,
         "extrapolate_geometric: need three values at consecutive widths");
  const std::size_t n = values.size();
  const double a = values[n - 3], b = values[n - 2], c = values[n - 1];
  const double denom = a + c - 2.0 * b;
  // Converged to rounding: nothing left to remove.
  if (std::abs(denom) <= 1e-14 * std::max(1.0, std::abs(c))) return c;
  return c - (c - b) * (c - b) / denom;
}

CorrelatorSet decorated_strip(const ModelParams& p, double T, int width) {
  require_width(width, kMaxDecoratedStripWidth, "decorated_strip");
  if (!(T >= kMinDecoratedStripTemperature) || !std::isfinite(T))
    fail(ErrorKind::invalid_argument, "decorated_strip: need T >= 0.02");
  const double beta = 1.0 / T;
  const Eigen::Matrix4d sxsx = bond_observable_matrix(BondObservable::sxsx);
  const Eigen::Matrix4d szsz = bond_observable_matrix(BondObservable::szsz);

  Eigen::Matrix2d log_w, f_xx, f_zz, f_mumu;
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) {
      const double mu1 = b1 ? -0.5 : 0.5;
      const double mu2 = b2 ? -0.5 : 0.5;
      const auto sys = bond_eigensystem(p, mu1, mu2);
      const double e0 = sys[0].energy;
      double z = 0.0, xx = 0.0, zz = 0.0;
      for (const auto& pair : sys) {
        const double w = std::exp(-beta * (pair.energy - e0));
        z += w;
        xx += w * pair.vector.dot(sxsx * pair.vector);
        zz += w * pair.vector.dot(szsz * pair.vector);
      }
      log_w(b1, b2) = std::log(z) - beta * e0;
      f_xx(b1, b2) = xx / z;
      f_zz(b1, b2) = zz / z;
      f_mumu(b1, b2) = mu1 * mu2;
    }
  }
  if (!log_w.allFinite())
    fail(ErrorKind::numerical_failure, "decorated_strip: bond weights overflow");

  const Strip strip(width, log_w);
  CorrelatorSet c;
  c.T = T;
  c.q_xx = strip.vertical(f_xx);
  c.q_zz = strip.vertical(f_zz);
  c.q_mumu = strip.vertical(f_mumu);
  c.k_eff = 0.5 * (log_w(0, 0) - log_w(0, 1));
  if (!std::isfinite(c.q_xx) || !std::isfinite(c.q_zz) || !std::isfinite(c.q_mumu))
    fail(ErrorKind::numerical_failure, "decorated_strip: non-finite correlators");
  return c;
}

XState random_xstate(std::mt19937_64& rng, bool zero_staggered) {
  std::uniform_real_distribution<double> half(-0.5, 0.5);
  std::uniform_real_distribution<double> quarter(-0.25, 0.25);
  for (;;) {
    const double m_z = half(rng);
    const double ds_z = zero_staggered ? 0.0 : half(rng);
    const double q_zz = quarter(rng);
    const double q_xx = quarter(rng);
    const XState x = xstate_from_correlators(m_z, ds_z, q_zz, q_xx);
    if (validate_state(x, 1e-15).empty()) return x;
  }
}

DensityMatrix random_density_matrix(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::normal_distribution<double> g;
  const int k = count(rng);
  std::vector<double> w(k);
  double total = 0.0;
  for (double& x : w) total += (x = weight(rng));
  DensityMatrix rho = DensityMatrix::Zero();
  for (int i = 0; i < k; ++i) {
    Eigen::Vector4cd psi;
    for (int j = 0; j < 4; ++j) psi(j) = cd(g(rng), g(rng));
    psi.normalize();
    rho += (w[i] / total) * psi * psi.adjoint();
  }
  return rho;
}

bool CheckReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

CheckReport run_oracle_suite(std::uint64_t seed, std::size_t samples) {
  CheckReport report;
  report.seed = seed;
  std::mt19937_64 rng(seed);

  auto guarded = [&report](CheckResult c, auto&& body) {
    try {
      body(c);
      finish(c);
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("error: ") + e.what();
    }
    report.checks.push_back(std::move(c));
  };

  guarded(make_check("bell_horodecki_vs_closed_form", 1e-10), [&](CheckResult& c) {
    for (std::size_t i = 0; i < samples; ++i) {
      const XState x = random_xstate(rng);
      const double general = bell_horodecki(to_density_matrix(x)).value;
      const double closed = bell_closed_form(xstate_q_zz(x), x.z / 2.0).value;
      record(c, std::abs(general - closed), describe(x));
    }
  });

  // Deviation is measured outside the band [B - 1e-6, B + 1e-9].
  guarded(make_check("chsh_optimize_vs_horodecki", 0.0), [&](CheckResult& c) {
    auto check_state = [&](const DensityMatrix& rho, const std::string& where) {
      const double h = bell_horodecki(rho).value;
      const double v = chsh_optimize(rho, rng()).value;
      record(c, std::max({0.0, h - 1e-6 - v, v - h - 1e-9}), where);
    };
    for (std::size_t i = 0; i < samples; ++i) {
      const XState x = random_xstate(rng);
      check_state(to_density_matrix(x), describe(x));
    }
    for (std::size_t i = 0; i < samples / 10 + 1; ++i)
      check_state(random_density_matrix(rng), "random mixed state");
  });

  guarded(make_check("concurrence_closed_form_vs_wootters", 1e-10), [&](CheckResult& c) {
    for (std::size_t i = 0; i < samples; ++i) {
      const XState x = random_xstate(rng, true);
      const double m_z = (x.u_plus - x.u_minus) / 2.0;
      const double closed = concurrence_closed_form(xstate_q_zz(x), x.z / 2.0, m_z);
      record(c, std::abs(closed - concurrence_wootters(to_density_matrix(x))),
             describe(x));
    }
  });

  guarded(make_check("concurrence_reference_states", 1e-12), [&](CheckResult& c) {
    DensityMatrix up_up = DensityMatrix::Zero();
    up_up(0, 0) = 1.0;
    record(c, std::abs(concurrence_wootters(up_up)), "|up,up>");
    Eigen::Vector4cd bell(0, 1, 1, 0);
    bell /= std::sqrt(2.0);
    record(c, std::abs(concurrence_wootters(DensityMatrix(bell * bell.adjoint())) - 1.0),
           "(|up,down> + |down,up>)/sqrt 2");
  });

  guarded(make_check("coefficients_K_vs_ed_bond_trace", 1e-12), [&](CheckResult& c) {
    std::uniform_real_distribution<double> uj(0.2, 2.0), ud(0.0, 3.0), uj1(-3.0, 3.0),
        ub(0.05, 20.0);
    for (int i = 0; i < 100; ++i) {
      const ModelParams p{uj(rng), ud(rng), uj1(rng)};
      const double beta = ub(rng);
      const KCoefficients k = coefficients_K(p, beta);
      const double ed[4] = {
          4.0 * ed_bond_trace(p, beta, BondObservable::sxsx, 0.5, 0.5),
          4.0 * ed_bond_trace(p, beta, BondObservable::sxsx, 0.5, -0.5),
          4.0 * ed_bond_trace(p, beta, BondObservable::szsz, 0.5, 0.5),
          4.0 * ed_bond_trace(p, beta, BondObservable::szsz, 0.5, -0.5)};
      const double dev = std::max({std::abs(k.k1 - ed[0]), std::abs(k.k2 - ed[1]),
                                   std::abs(k.k3 - ed[2]), std::abs(k.k4 - ed[3])});
      std::ostringstream os;
      os << "J=" << p.J << " Delta=" << p.Delta << " J1=" << p.J1 << " beta=" << beta;
      record(c, dev, os.str());
    }
  });

  const std::vector<int> widths{9, 10};
  guarded(make_check("nn_correlation_vs_strip", 1e-2), [&](CheckResult& c) {
    for (double k : {0.1, 0.2, 0.3, 0.5, 0.8}) {
      std::vector<double> eps;
      for (int w : widths) eps.push_back(strip_transfer_matrix(k, w).epsilon);
      record(c, relative(extrapolate_inverse_square(widths, eps), nn_correlation(k)),
             "K=" + std::to_string(k));
    }
  });

  guarded(make_check("free_energy_vs_strip", 1e-4), [&](CheckResult& c) {
    for (double k : {0.1, 0.2, 0.3, 0.4, 0.5, 0.8}) {
      std::vector<double> f;
      for (int w = kMaxStripWidth - 2; w <= kMaxStripWidth; ++w)
        f.push_back(strip_transfer_matrix(k, w).log_partition_per_site);
      record(c, relative(extrapolate_geometric(f), free_energy_density(k)),
             "K=" + std::to_string(k));
    }
  });

  guarded(make_check("decorated_model_vs_decorated_strip", 1e-2), [&](CheckResult& c) {
    const std::vector<int> dw{4, 6};
    const std::pair<double, double> points[] = {{1.2, 0.2}, {2.0, 0.3}, {0.5, 0.1}};
    for (auto [j1, t] : points) {
      const ModelParams p{1.0, 2.0, j1};
      const CorrelatorSet exact = correlators(p, t);
      std::vector<double> xx, zz, mm;
      for (int w : dw) {
        const CorrelatorSet s = decorated_strip(p, t, w);
        xx.push_back(s.q_xx);
        zz.push_back(s.q_zz);
        mm.push_back(s.q_mumu);
      }
      const double dev = std::max({relative(extrapolate_inverse_square(dw, xx), exact.q_xx),
                                   relative(extrapolate_inverse_square(dw, zz), exact.q_zz),
                                   relative(extrapolate_inverse_square(dw, mm), exact.q_mumu)});
      std::ostringstream os;
      os << "J1=" << j1 << " T=" << t;
      record(c, dev, os.str());
    }
  });

  return report;
}

}  // namespace isingbell::oracle
