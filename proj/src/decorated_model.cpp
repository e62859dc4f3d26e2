#include "isingbell/decorated_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "isingbell/error.hpp"
#include "isingbell/ising_exact.hpp"

namespace isingbell {

namespace {

void require_temperature(double T, const char* where) {
  if (!(T > 0.0) || !std::isfinite(T))
    fail(ErrorKind::invalid_argument,
         std::string(where) + ": temperature must be positive and finite");
}

// Equal-weight average of <v|O|v> over the lowest multiplet: the
// beta -> infinity limit of conditional_expectation.
double ground_expectation(const ModelParams& p, BondObservable o, double mu1,
                          double mu2) {
  const auto sys = bond_eigensystem(p, mu1, mu2);
  const Eigen::Matrix4d op = bond_observable_matrix(o);
  const double e0 = sys[0].energy;
  const double band = 1e-9 * std::max(1.0, std::abs(e0));
  double sum = 0.0;
  int n = 0;
  for (const auto& pair : sys) {
    if (pair.energy - e0 > band) break;
    sum += pair.vector.dot(op * pair.vector);
    ++n;
  }
  return sum / n;
}

// <down,down| projector> for frozen neighbours, from the bond eigenvectors.
double conditional_down_down(const ModelParams& p, double beta, double mu1, double mu2) {
  const auto sys = bond_eigensystem(p, mu1, mu2);
  const double e0 = sys[0].energy;
  double num = 0.0;
  double den = 0.0;
  for (const auto& pair : sys) {
    const double w = std::exp(-beta * (pair.energy - e0));
    num += w * pair.vector(3) * pair.vector(3);
    den += w;
  }
  return num / den;
}

// Sum over Ising pair configurations with probabilities
// (1 + m (s1 + s2) + eps s1 s2) / 4. Each weight is formed from 1 - |eps|
// and 1 - m, so the rare configurations of the ordered phase stay accurate.
double down_down_population(const ModelParams& p, double beta, const IsingPoint& ising) {
  const double de = ising.epsilon_complement;
  const bool positive = ising.epsilon >= 0.0;
  const double one_plus_eps = positive ? 2.0 - de : de;
  const double one_minus_eps = positive ? de : 2.0 - de;
  const double m = ising.m_uniform;
  const double w_pp = (one_plus_eps + 2.0 * m) / 4.0;
  const double w_mm =
      m > 0.0 ? std::max(0.0, (2.0 * ising.m_complement - de) / 4.0) : one_plus_eps / 4.0;
  // Staggered order splits (+-) and (-+), but f(+-) = f(-+) by exchange symmetry.
  const double w_mixed = one_minus_eps / 2.0;
  return w_pp * conditional_down_down(p, beta, 0.5, 0.5) +
         w_mm * conditional_down_down(p, beta, -0.5, -0.5) +
         w_mixed * conditional_down_down(p, beta, 0.5, -0.5);
}

}  // namespace

std::string_view to_string(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
  }
  return "?";
}

Region region_of(double bell, double concurrence) {
  if (bell > 2.0) return Region::I;
  return concurrence > 0.0 ? Region::II : Region::III;
}

CorrelatorSet correlators(const ModelParams& p, double T) {
  require_temperature(T, "correlators");
  const double beta = 1.0 / T;
  const EffectiveIsing eff = effective_coupling(p, beta);
  const IsingPoint ising = evaluate_ising(eff.k_eff);
  const KCoefficients k = coefficients_K(p, beta);

  CorrelatorSet c;
  c.T = T;
  c.k_eff = eff.k_eff;
  c.near_critical = ising.near_critical;
  c.below_validated_temperature = T < kMinValidatedTemperature;
  c.q_mumu = ising.epsilon / 4.0;
  c.q_xx = (k.k1 + k.k2) / 8.0 + (k.k1 - k.k2) / 2.0 * c.q_mumu;
  c.q_zz = (k.k3 + k.k4) / 8.0 + (k.k3 - k.k4) / 2.0 * c.q_mumu;
  // <S1z + S2z> = b <(s1 + s2)/2> = b m; <S1z - S2z> = d m_staggered.
  if (ising.m_uniform > 0.0) {
    const double b = bond_observable_coeffs(p, beta, BondObservable::sz_sum).b;
    c.m_z = 0.5 * b * ising.m_uniform;
  }
  if (ising.m_staggered > 0.0) {
    const double d = bond_observable_coeffs(p, beta, BondObservable::sz_diff).d;
    c.ds_z = 0.5 * d * ising.m_staggered;
  }
  c.p_down_down = down_down_population(p, beta, ising);
  return c;
}

MeasureSet measures_from(const ModelParams& p, const CorrelatorSet& c) {
  XState x = xstate_from_correlators(c.m_z, c.ds_z, c.q_zz, c.q_xx);
  const ValidationReport report = validate_state(x, kDefaultStateTolerance);
  if (!report.empty()) {
    std::ostringstream os;
    os << "measures: assembled bond state is not physical at T=" << c.T
       << " J1=" << p.J1 << " (" << report.front().constraint << " off by "
       << report.front().magnitude << ")";
    fail(ErrorKind::numerical_failure, os.str());
  }
  x = clamp_rounding_negatives(x);

  const BellResult bell = bell_closed_form(c.q_zz, c.q_xx);
  // Throws if the Horodecki eigenvalue route disagrees with the closed form.
  (void)bell_horodecki(x);

  MeasureSet m;
  m.T = c.T;
  m.J1 = p.J1;
  m.B = bell.value;
  m.N1 = *bell.n1;
  m.N2 = *bell.n2;
  if (std::isnan(c.p_down_down))
    m.C = concurrence_closed_form(c.q_zz, c.q_xx, c.m_z);
  else
    m.C = concurrence_from_populations(x.u_plus, c.p_down_down, x.z);
  m.region = region_of(m.B, m.C);
  return m;
}

MeasureSet measures(const ModelParams& p, double T) {
  return measures_from(p, correlators(p, T));
}

double qpt_boundary(double J, double Delta) {
  return 0.5 * (Delta * Delta - 1.0) * J;
}

std::optional<double> critical_temperature(const ModelParams& p, double tol) {
  const double kc = critical_coupling();
  const double scale =
      std::abs(p.J) * (1.0 + std::abs(p.Delta)) + std::abs(p.J1);
  const double t_lo = kMinValidatedTemperature;
  const double t_hi = std::max(10.0 * scale, 1.0);
  auto excess = [&](double T) {
    return std::abs(effective_coupling(p, 1.0 / T).k_eff) - kc;
  };

  constexpr int kSamples = 400;
  std::vector<double> ts(kSamples);
  std::vector<double> gs(kSamples);
  std::vector<int> crossings;
  for (int i = 0; i < kSamples; ++i) {
    ts[i] = t_lo * std::pow(t_hi / t_lo, double(i) / (kSamples - 1));
    gs[i] = excess(ts[i]);
    if (i > 0 && (gs[i] >= 0.0) != (gs[i - 1] >= 0.0)) crossings.push_back(i);
  }
  if (crossings.empty()) return std::nullopt;
  if (gs.front() < 0.0 || crossings.size() > 1) {
    std::ostringstream os;
    os << "critical_temperature: |K_eff| crosses K_c=" << kc << " "
       << crossings.size() << " time(s) on [" << t_lo << ", " << t_hi
       << "] starting from the "
       << (gs.front() < 0.0 ? "disordered" : "ordered") << " side;";
    for (int i : crossings)
      os << " |K_eff|=" << gs[i - 1] + kc << " at T=" << ts[i - 1] << " -> "
         << gs[i] + kc << " at T=" << ts[i] << ";";
    fail(ErrorKind::numerical_failure, os.str());
  }
  double a = ts[crossings[0] - 1];
  double b = ts[crossings[0]];
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    (excess(mid) >= 0.0 ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

CorrelatorSet zero_temperature_limits(const ModelParams& p) {
  const auto aligned = class_representative(IsingClass::aligned);
  const auto anti = class_representative(IsingClass::anti_aligned);
  const double e_al = bond_eigensystem(p, aligned[0], aligned[1])[0].energy;
  const double e_an = bond_eigensystem(p, anti[0], anti[1])[0].energy;
  const double inf = std::numeric_limits<double>::infinity();

  CorrelatorSet c;
  c.T = 0.0;
  if (p.J1 == 0.0) {
    // Backbone decouples; K_eff vanishes identically.
    c.q_xx = ground_expectation(p, BondObservable::sxsx, 0.5, 0.5);
    c.q_zz = ground_expectation(p, BondObservable::szsz, 0.5, 0.5);
    return c;
  }
  const double gap = e_al - e_an;
  if (std::abs(gap) <= 1e-12 * std::max(1.0, std::abs(e_al))) {
    std::ostringstream os;
    os << "zero_temperature_limits: aligned and anti-aligned bond ground "
          "states are degenerate at J1="
       << p.J1 << " (J1c=" << qpt_boundary(p.J, p.Delta) << ")";
    fail(ErrorKind::degenerate_point, os.str());
  }
  if (gap < 0.0) {
    c.k_eff = inf;
    c.q_mumu = 0.25;
    c.q_xx = ground_expectation(p, BondObservable::sxsx, 0.5, 0.5);
    c.q_zz = ground_expectation(p, BondObservable::szsz, 0.5, 0.5);
    c.m_z = 0.5 * ground_expectation(p, BondObservable::sz_sum, 0.5, 0.5);
  } else {
    c.k_eff = -inf;
    c.q_mumu = -0.25;
    c.q_xx = ground_expectation(p, BondObservable::sxsx, 0.5, -0.5);
    c.q_zz = ground_expectation(p, BondObservable::szsz, 0.5, -0.5);
    c.ds_z = 0.5 * ground_expectation(p, BondObservable::sz_diff, 0.5, -0.5);
  }
  return c;
}

double log_partition_per_site(const ModelParams& p, double T) {
  require_temperature(T, "log_partition_per_site");
  const EffectiveIsing eff = effective_coupling(p, 1.0 / T);
  return 2.0 * eff.log_a + free_energy_density(eff.k_eff);
}

double specific_heat(const ModelParams& p, double T) {
  require_temperature(T, "specific_heat");
  auto free_energy = [&](double t) { return -t * log_partition_per_site(p, t); };
  auto second = [&](double h) {
    return (free_energy(T + h) - 2.0 * free_energy(T) + free_energy(T - h)) /
           (h * h);
  };
  const double h = 1e-3 * T;
  return -T * (4.0 * second(0.5 * h) - second(h)) / 3.0;
}

}  // namespace isingbell
