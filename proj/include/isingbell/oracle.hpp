#pragma once

// Brute-force cross-checks for the closed forms: direct CHSH optimization,
// a dense bond trace built from spin operators, strip transfer matrices for
// the plain and decorated Ising lattices, and seeded random states.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "isingbell/bond_spectrum.hpp"
#include "isingbell/corrkit.hpp"
#include "isingbell/decorated_model.hpp"

namespace isingbell::oracle {

using Vec3 = std::array<double, 3>;

struct ChshSettings {
  Vec3 a{1.0, 0.0, 0.0};
  Vec3 a_prime{1.0, 0.0, 0.0};
  Vec3 b{1.0, 0.0, 0.0};
  Vec3 b_prime{1.0, 0.0, 0.0};
};

struct ChshResult {
  double value = 0.0;
  ChshSettings settings;
};

/// Multi-start alternating ascent on the CHSH functional. For fixed a, a'
/// the optimal b, b' are the normalized L^T (a +- a'), and symmetrically
/// for a, a' given b, b'. Each start draws from its own stream derived from
/// (seed, start index); the best value wins with ties going to the lowest
/// index. Throws invalid_argument for an unphysical state.
ChshResult chsh_optimize(const DensityMatrix& rho, std::uint64_t seed,
                         int starts = 32);

/// CHSH expectation for explicit settings, by operator traces.
double chsh_value(const DensityMatrix& rho, const ChshSettings& s);

/// Tr[O exp(-beta H)] / Tr[exp(-beta H)] for the bond Hamiltonian assembled
/// from Kronecker products of spin-1/2 matrices and diagonalized as a
/// complex Hermitian matrix.
double ed_bond_trace(const ModelParams& p, double beta, BondObservable o,
                     double mu1, double mu2);

inline constexpr int kMinStripWidth = 2;
inline constexpr int kMaxStripWidth = 14;
inline constexpr int kMaxDecoratedStripWidth = 6;
inline constexpr double kMinDecoratedStripTemperature = 0.02;

struct StripResult {
  double log_partition_per_site = 0.0;
  /// Nearest-neighbour correlation along the infinite direction.
  double epsilon = 0.0;
  /// Same, across the periodic direction.
  double epsilon_transverse = 0.0;
};

/// Ising strip of the given width, periodic across, infinite along, s = +-1.
/// Requires |K| <= 2.
StripResult strip_transfer_matrix(double k, int width);

/// sqrt of the row correlation <s_0 s_{W/2}>, for even widths.
double strip_magnetization(double k, int width);

/// Removes the leading 1/W^2 term using the two largest widths supplied.
double extrapolate_inverse_square(const std::vector<int>& widths,
                                  const std::vector<double>& values);

/// Shanks transform of the last three values, taken at consecutive widths.
/// Suits the exponential finite-width corrections away from K_c.
double extrapolate_geometric(const std::vector<double>& values);

/// Decorated strip: every backbone bond carries a Heisenberg pair traced
/// exactly from its spectrum. Returns q_xx, q_zz and q_mumu along the strip
/// (magnetizations stay zero on a finite width). Requires width 2..6 and
/// T >= 0.02.
CorrelatorSet decorated_strip(const ModelParams& p, double T, int width);

/// Uniform (M_z, dS_z, q_zz, q_xx) boxes with rejection of unphysical draws.
XState random_xstate(std::mt19937_64& rng, bool zero_staggered = false);

/// Mixture of one to four Haar-random pure states with random weights.
DensityMatrix random_density_matrix(std::mt19937_64& rng);

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // largest deviation seen
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::string detail;
};

struct CheckReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
};

/// Every cross-check at once; `samples` sets the random-state batch sizes.
CheckReport run_oracle_suite(std::uint64_t seed, std::size_t samples = 10000);

}  // namespace isingbell::oracle
