#pragma once

// Exact treatment of one decorating bond: two Heisenberg spins S1, S2
// between two frozen Ising spins mu1, mu2,
//
//   H = -J (Delta S1x S2x + Delta S1y S2y + S1z S2z) - J1 (S1z mu1 + S2z mu2).
//
// Spin conventions: Heisenberg spins are spin-1/2 operators and Ising spins
// take mu = +-1/2. The effective backbone model is written with s = 2 mu =
// +-1, so backbone quantities convert as q_mumu = epsilon / 4 and
// m_mu = m / 2. Those conversions happen only here and in decorated_model.

#include <array>
#include <string_view>

#include <Eigen/Dense>

namespace isingbell {

struct ModelParams {
  double J = 1.0;
  double Delta = 2.0;
  double J1 = 0.0;

  /// Sign regime the published results cover (J > 0).
  bool in_validated_regime() const { return J > 0.0; }
};

enum class IsingClass { aligned, anti_aligned };

/// Observables of the Heisenberg pair with a closed expansion over the
/// four Ising configurations. `identity` is accepted by the brute-force
/// oracle only.
enum class BondObservable { identity, sz_sum, sz_diff, szsz, sxsx };

BondObservable parse_bond_observable(std::string_view name);
std::string_view to_string(BondObservable o);

struct BondEigenpair {
  double energy = 0.0;
  Eigen::Vector4d vector = Eigen::Vector4d::Zero();
};

/// Four eigenpairs sorted by ascending energy.
using BondEigensystem = std::array<BondEigenpair, 4>;

/// Sum_i exp(-beta E_i) stored as scaled * exp(log_shift) with
/// log_shift = -beta * E_min, so scaled lies in [1, 4].
struct ShiftedPartition {
  double scaled = 0.0;
  double log_shift = 0.0;

  double log() const;
  /// May overflow to +inf for very large beta.
  double value() const;
};

struct KCoefficients {
  double k1 = 0.0;  // <sigma_x sigma_x> given aligned neighbours
  double k2 = 0.0;  // <sigma_x sigma_x> given anti-aligned neighbours
  double k3 = 0.0;  // <sigma_z sigma_z> given aligned neighbours
  double k4 = 0.0;  // <sigma_z sigma_z> given anti-aligned neighbours
};

/// Decoration-iteration result: V(mu1, mu2) = A exp(K_eff s1 s2), s = +-1.
struct EffectiveIsing {
  double k_eff = 0.0;
  int sign = 0;        // -1, 0 or +1
  double log_a = 0.0;  // ln A, kept in log form
};

/// F(s1, s2) = a + b (s1 + s2)/2 + d (s1 - s2)/2 + c s1 s2,  s = +-1.
struct BondCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

/// Matrix of the observable in the |uu>, |ud>, |du>, |dd> basis.
Eigen::Matrix4d bond_observable_matrix(BondObservable o);

/// Real symmetric bond Hamiltonian for fixed Ising neighbours (mu = +-1/2).
Eigen::Matrix4d bond_hamiltonian(const ModelParams& p, double mu1, double mu2);

/// Generic dense eigensolve of bond_hamiltonian.
BondEigensystem bond_eigensystem(const ModelParams& p, double mu1, double mu2);

/// Representative Ising configuration of a class: (+1/2, +1/2) or
/// (+1/2, -1/2).
std::array<double, 2> class_representative(IsingClass c);

ShiftedPartition conditional_partition(const ModelParams& p, double beta,
                                       IsingClass c);

KCoefficients coefficients_K(const ModelParams& p, double beta);

EffectiveIsing effective_coupling(const ModelParams& p, double beta);

/// Tr[O exp(-beta H(mu1, mu2))] / Tr[exp(-beta H(mu1, mu2))].
double conditional_expectation(const ModelParams& p, double beta,
                               BondObservable o, double mu1, double mu2);

/// Expansion of conditional_expectation over the four Ising configurations,
/// with the exchange symmetries of each observable imposed exactly.
BondCoefficients bond_observable_coeffs(const ModelParams& p, double beta,
                                        BondObservable o);

}  // namespace isingbell
