#pragma once

// Two-qubit correlation measures: X-state bookkeeping, the Horodecki form of
// the CHSH Bell function and the Wootters concurrence.
//
// Basis ordering everywhere is |up,up>, |up,down>, |down,up>, |down,down>.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace isingbell {

using DensityMatrix = Eigen::Matrix4cd;
using CorrelationMatrix = Eigen::Matrix3d;

/// Density matrix with nonzero entries only on the diagonal and on the
/// real |up,down>/|down,up> coherence:
///
///   diag(u_plus, v_plus, v_minus, u_minus),  rho(1,2) = rho(2,1) = z
struct XState {
  double u_plus = 0.25;
  double u_minus = 0.25;
  double v_plus = 0.25;
  double v_minus = 0.25;
  double z = 0.0;
};

struct Violation {
  std::string constraint;
  double magnitude = 0.0;  // how far outside the tolerance band
};

using ValidationReport = std::vector<Violation>;

struct BellResult {
  double value = 0.0;         // B in [0, 2 sqrt 2]
  std::optional<double> n1;   // 8 sqrt(q_zz^2 + q_xx^2), X-states only
  std::optional<double> n2;   // 8 sqrt(2 q_xx^2), X-states only
  bool violated = false;      // value > 2
};

inline constexpr double kDefaultStateTolerance = 1e-9;

/// u+- = 1/4 +- M_z + q_zz, v+- = 1/4 +- dS_z - q_zz, z = 2 q_xx.
/// Does not check positivity; see validate_state.
XState xstate_from_correlators(double m_z, double ds_z, double q_zz,
                               double q_xx);

DensityMatrix to_density_matrix(const XState& s);

ValidationReport validate_state(const XState& s,
                                double tol = kDefaultStateTolerance);
/// Hermiticity, unit trace and positive semidefiniteness.
ValidationReport validate_state(const DensityMatrix& rho,
                                double tol = kDefaultStateTolerance);

/// Zeroes diagonal entries in [-tol, 0). Larger negatives are left alone so
/// validation still reports them. The trace is never rescaled.
XState clamp_rounding_negatives(XState s, double tol = kDefaultStateTolerance);

/// L_ij = Tr[rho sigma_i (x) sigma_j], always by explicit trace.
CorrelationMatrix correlation_matrix(const DensityMatrix& rho);
CorrelationMatrix correlation_matrix(const XState& s);

/// Eigenvalues of a real symmetric 3x3 matrix in descending order.
/// Trigonometric solution of the characteristic cubic, Jacobi sweeps when
/// the cubic is close to a multiple root.
std::array<double, 3> symmetric_eigenvalues_3x3(const Eigen::Matrix3d& a);

/// B = 2 sqrt(lambda_1 + lambda_2) over the two largest eigenvalues of L^T L.
BellResult bell_horodecki(const DensityMatrix& rho);
/// Same, plus the N1/N2 branches; throws numerical_failure if the general
/// route and the closed form disagree by more than 1e-10.
BellResult bell_horodecki(const XState& s);

/// B = max(N1, N2). B and N name the same quantity throughout this library.
BellResult bell_closed_form(double q_zz, double q_xx);

/// max{0, mu1 - mu2 - mu3 - mu4}, mu_i the decreasing square roots of the
/// eigenvalues of rho (sy sy) rho^* (sy sy).
double concurrence_wootters(const DensityMatrix& rho);
double concurrence_wootters(const XState& s);

/// C = 2 max{0, 2|q_xx| - sqrt((1/4 + q_zz)^2 - M_z^2)}.
double concurrence_closed_form(double q_zz, double q_xx, double m_z);

/// C = 2 max{0, |z| - sqrt(u_plus u_minus)} for an X-state with the given
/// |up,up> and |down,down> populations. Callers that know a tiny population
/// more accurately than 1/4 + q_zz -+ M_z can resolve use this directly.
double concurrence_from_populations(double u_plus, double u_minus, double z);

}  // namespace isingbell
