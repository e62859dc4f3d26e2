#pragma once

// Zero-field square-lattice Ising model with s = +-1 spins and reduced
// coupling K = beta J (K > 0 ferromagnetic). Antiferromagnetic couplings
// are mapped onto the ferromagnet through the bipartite sublattice flip.

namespace isingbell {

/// Half-width of the band around |K| = K_c where the critical values are
/// returned instead of evaluating the closed forms.
inline constexpr double kNearCriticalBand = 1e-10;

struct IsingPoint {
  double k = 0.0;
  double epsilon = 0.0;              // <s_i s_j> over nearest neighbours
  double m_uniform = 0.0;            // spontaneous magnetization, K > K_c
  double m_staggered = 0.0;          // sublattice magnetization, K < -K_c
  double epsilon_complement = 1.0;   // 1 - |epsilon|, accurate when tiny
  double m_complement = 1.0;         // 1 - m(|K|), accurate when tiny
  bool near_critical = false;
};

/// Complete elliptic integral of the first kind K(k) = int_0^{pi/2}
/// (1 - k^2 sin^2)^{-1/2}, by arithmetic-geometric mean. Throws out_of_domain
/// outside [0, 1 - 1e-12).
double elliptic_K(double k);

/// K(k) from the complementary modulus k' = sqrt(1 - k^2); accurate when k'
/// is tiny. Throws out_of_domain unless k' in (0, 1].
double elliptic_K_complementary(double kprime);

/// K_c = ln(1 + sqrt 2) / 2.
double critical_coupling();

/// Nearest-neighbour correlation epsilon(K), odd in K.
double nn_correlation(double k);

/// 1 - |nn_correlation(k)| without cancellation deep in the ordered phase.
double nn_correlation_complement(double k);

/// 1 - spontaneous_magnetization(k), likewise.
double magnetization_complement(double k);

/// (1 - sinh^-4(2|K|))^{1/8} for |K| > K_c, else 0. Even in K.
double spontaneous_magnetization(double k);
/// Equals spontaneous_magnetization for K > 0, zero otherwise.
double uniform_magnetization(double k);
/// Equals spontaneous_magnetization for K < 0, zero otherwise.
double staggered_magnetization(double k);

IsingPoint evaluate_ising(double k);

/// ln Z / N (that is -beta f per site), Onsager single-integral form.
double free_energy_density(double k);

/// Specific heat per site, K^2 d^2(ln Z/N)/dK^2 by central differences.
double specific_heat(double k);

}  // namespace isingbell
