#pragma once

// Bond correlators and correlation measures of the doubly decorated
// Ising-Heisenberg square lattice at temperature T (k_B = 1).

#include <limits>
#include <optional>
#include <string_view>

#include "isingbell/bond_spectrum.hpp"
#include "isingbell/corrkit.hpp"

namespace isingbell {

/// Below this temperature results are flagged as outside validated accuracy.
inline constexpr double kMinValidatedTemperature = 1e-4;

struct CorrelatorSet {
  double T = 0.0;
  double q_xx = 0.0;     // <S1x S2x>
  double q_zz = 0.0;     // <S1z S2z>
  double q_mumu = 0.0;   // <mu_1 mu_2>, mu = +-1/2
  double m_z = 0.0;      // <S1z + S2z> / 2
  double ds_z = 0.0;     // <S1z - S2z> / 2, site 1 on sublattice A
  double k_eff = 0.0;
  /// Population of |down,down>, evaluated directly from the bond spectra and
  /// the Ising pair probabilities so it keeps relative accuracy when tiny.
  /// NaN means unknown; measures_from then uses 1/4 + q_zz - M_z.
  double p_down_down = std::numeric_limits<double>::quiet_NaN();
  bool near_critical = false;
  bool below_validated_temperature = false;
};

enum class Region { I, II, III };

std::string_view to_string(Region r);

struct MeasureSet {
  double T = 0.0;
  double J1 = 0.0;
  double B = 0.0;
  double N1 = 0.0;
  double N2 = 0.0;
  double C = 0.0;
  Region region = Region::III;
};

/// I: B > 2. II: B <= 2 and C > 0. III: B <= 2 and C == 0.
Region region_of(double bell, double concurrence);

/// Correlators in the symmetry-broken state with positive backbone
/// magnetization (ferro) or site 1 on the up sublattice (antiferro).
CorrelatorSet correlators(const ModelParams& p, double T);

/// Measures from already assembled correlators; validates the X-state and
/// cross-checks the closed forms against the Horodecki eigenvalue route.
MeasureSet measures_from(const ModelParams& p, const CorrelatorSet& c);

MeasureSet measures(const ModelParams& p, double T);

/// J1c = (Delta^2 - 1) J / 2.
double qpt_boundary(double J, double Delta);

/// Solves |K_eff(1/T)| = K_c by bisection after sampling the bracket
/// [1e-4, max(1, 10 scale)]. Returns nullopt when the backbone is disordered
/// on the whole bracket; throws numerical_failure with the sampled crossings
/// unless there is exactly one ordered-to-disordered crossing.
std::optional<double> critical_temperature(const ModelParams& p,
                                           double tol = 1e-10);

/// beta -> infinity limits taken inside the ordered ground state. Throws
/// degenerate_point where the aligned and anti-aligned bond ground states
/// are degenerate (J1 = J1c).
CorrelatorSet zero_temperature_limits(const ModelParams& p);

/// ln Z per backbone site: two bonds per site plus the effective Ising part.
double log_partition_per_site(const ModelParams& p, double T);

/// Specific heat per backbone site, -T d^2F/dT^2 by Richardson-extrapolated
/// central differences.
double specific_heat(const ModelParams& p, double T);

}  // namespace isingbell
