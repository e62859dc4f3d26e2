#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "isingbell/corrkit.hpp"
#include "isingbell/error.hpp"
#include "isingbell/oracle.hpp"

using namespace isingbell;
using doctest::Approx;

namespace {
const double kTsirelson = 2.0 * std::sqrt(2.0);

DensityMatrix pure(std::complex<double> a, std::complex<double> b, std::complex<double> c,
                   std::complex<double> d) {
  Eigen::Vector4cd v(a, b, c, d);
  v.normalize();
  return v * v.adjoint();
}
}  // namespace

TEST_CASE("xstate_from_correlators") {
  const XState mixed = xstate_from_correlators(0, 0, 0, 0);
  CHECK(mixed.u_plus == 0.25);
  CHECK(mixed.v_minus == 0.25);
  CHECK(mixed.z == 0.0);

  const XState up = xstate_from_correlators(0.5, 0, 0.25, 0);
  CHECK(up.u_plus == 1.0);
  CHECK(up.u_minus == 0.0);
  CHECK(up.v_plus == 0.0);
  CHECK(up.v_minus == 0.0);

  const XState singlet = xstate_from_correlators(0, 0, -0.25, -0.25);
  CHECK(singlet.u_plus == 0.0);
  CHECK(singlet.v_plus == 0.5);
  CHECK(singlet.z == -0.5);

  CHECK_THROWS_AS(xstate_from_correlators(NAN, 0, 0, 0), Error);
  CHECK_THROWS_AS(xstate_from_correlators(0, INFINITY, 0, 0), Error);
}

TEST_CASE("validate_state") {
  CHECK(validate_state(xstate_from_correlators(0, 0, 0, 0), 1e-10).empty());
  const ValidationReport bad = validate_state(xstate_from_correlators(0, 0, 0.1, 0.2), 1e-10);
  REQUIRE(bad.size() == 1);
  CHECK(bad.front().magnitude == Approx(0.16 - 0.0225).epsilon(1e-9));
  CHECK(validate_state(xstate_from_correlators(0, 0, 0.1, 0.05), 1e-10).empty());
  CHECK_THROWS_AS(validate_state(XState{}, 0.0), Error);

  XState off_trace;
  off_trace.u_plus = 0.3;
  CHECK_FALSE(validate_state(off_trace).empty());

  DensityMatrix nonherm = DensityMatrix::Identity() / 4.0;
  nonherm(0, 1) = {0.0, 0.1};
  CHECK_FALSE(validate_state(nonherm).empty());
}

TEST_CASE("clamp only removes rounding-size negatives") {
  XState s = xstate_from_correlators(0.5, 0, 0.25, 0);
  s.u_minus = -1e-13;
  CHECK(clamp_rounding_negatives(s).u_minus == 0.0);
  s.u_minus = -1e-3;
  CHECK(clamp_rounding_negatives(s).u_minus == -1e-3);
}

TEST_CASE("correlation_matrix") {
  CHECK(correlation_matrix(xstate_from_correlators(0, 0, 0, 0)).isZero(1e-15));
  const CorrelationMatrix singlet =
      correlation_matrix(xstate_from_correlators(0, 0, -0.25, -0.25));
  CHECK(singlet.isApprox(-CorrelationMatrix::Identity(), 1e-14));
  const CorrelationMatrix l = correlation_matrix(xstate_from_correlators(0, 0, 0.1, 0.05));
  CHECK(l.isApprox(Eigen::Vector3d(0.2, 0.2, 0.4).asDiagonal().toDenseMatrix(), 1e-14));
  // Negative coherence keeps both transverse entries equal.
  const CorrelationMatrix neg = correlation_matrix(xstate_from_correlators(0, 0, 0.0, -0.1));
  CHECK(neg(0, 0) == Approx(-0.4));
  CHECK(neg(1, 1) == Approx(-0.4));
  CHECK_THROWS_AS(correlation_matrix(xstate_from_correlators(0, 0, 0.1, 0.2)), Error);
}

TEST_CASE("symmetric_eigenvalues_3x3 handles degenerate spectra") {
  auto ev = symmetric_eigenvalues_3x3(Eigen::Matrix3d::Identity() * 2.0);
  CHECK(ev[0] == Approx(2.0));
  CHECK(ev[2] == Approx(2.0));
  Eigen::Matrix3d a;
  a << 4, 1, 0, 1, 4, 0, 0, 0, 1;
  ev = symmetric_eigenvalues_3x3(a);
  CHECK(ev[0] == Approx(5.0).epsilon(1e-14));
  CHECK(ev[1] == Approx(3.0).epsilon(1e-14));
  CHECK(ev[2] == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("bell_horodecki and bell_closed_form") {
  CHECK(bell_horodecki(xstate_from_correlators(0, 0, -0.25, -0.25)).value ==
        Approx(kTsirelson).epsilon(1e-14));
  const BellResult up = bell_horodecki(xstate_from_correlators(0.5, 0, 0.25, 0));
  CHECK(up.value == Approx(2.0).epsilon(1e-14));
  CHECK_FALSE(up.violated);

  const BellResult x = bell_horodecki(xstate_from_correlators(0, 0, 0.1, 0.05));
  CHECK(x.value == Approx(0.894427190999916).epsilon(1e-12));

  const BellResult bell = bell_closed_form(0.25, 0.25);
  CHECK(*bell.n1 == Approx(kTsirelson));
  CHECK(*bell.n2 == Approx(kTsirelson));
  const BellResult ising = bell_closed_form(0.25, 0.0);
  CHECK(*ising.n1 == 2.0);
  CHECK(*ising.n2 == 0.0);
  CHECK(ising.value == 2.0);
  const BellResult mid = bell_closed_form(0.1, 0.05);
  CHECK(*mid.n1 == Approx(0.894427190999916));
  CHECK(*mid.n2 == Approx(0.565685424949238));
  CHECK(mid.value == *mid.n1);

  // A general (non-X) state has no branch values.
  CHECK_FALSE(bell_horodecki(pure(1, 0, 0, 1)).n1.has_value());
}

TEST_CASE("concurrence") {
  CHECK(concurrence_wootters(pure(1, 0, 0, 0)) == Approx(0.0).epsilon(1e-12));
  CHECK(concurrence_wootters(pure(1, 0, 0, 1)) == Approx(1.0).epsilon(1e-12));
  CHECK(concurrence_wootters(DensityMatrix::Identity() / 4.0) == 0.0);

  CHECK(concurrence_closed_form(-0.25, -0.25, 0) == Approx(1.0));
  CHECK(concurrence_closed_form(0.25, 0, 0.5) == 0.0);
  CHECK(concurrence_closed_form(0.1, 0.05, 0) == 0.0);
  CHECK_THROWS_AS(concurrence_closed_form(-0.2, 0.0, 0.3), Error);
}

TEST_CASE("random X-state properties") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 2000; ++i) {
    const XState s = oracle::random_xstate(rng, i % 2 == 0);
    const BellResult b = bell_horodecki(s);
    CHECK(b.value <= kTsirelson + 1e-12);
    CHECK(std::abs(b.value - bell_closed_form(0.25 * (s.u_plus + s.u_minus - s.v_plus -
                                                      s.v_minus),
                                              0.5 * s.z)
                                 .value) <= 1e-10);
    const double c = concurrence_wootters(s);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("scaling and depolarizing the correlation matrix scale B linearly") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho = oracle::random_density_matrix(rng);
    const double b = bell_horodecki(rho).value;
    for (double p : {0.1, 0.5, 0.9}) {
      const DensityMatrix mixed = (1.0 - p) * rho + p * DensityMatrix::Identity() / 4.0;
      // Local Bloch vectors shrink too, but only L enters B.
      CHECK(bell_horodecki(mixed).value == Approx((1.0 - p) * b).epsilon(1e-10));
    }
  }
}
