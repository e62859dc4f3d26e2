#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isingbell/decorated_model.hpp"
#include "isingbell/error.hpp"
#include "isingbell/ising_exact.hpp"
#include "isingbell/oracle.hpp"

using namespace isingbell;
using doctest::Approx;

namespace {
ModelParams at(double j1) { return {1.0, 2.0, j1}; }
}  // namespace

TEST_CASE("qpt_boundary") {
  CHECK(qpt_boundary(1, 2) == 1.5);
  CHECK(qpt_boundary(1, 1) == 0.0);
  CHECK(qpt_boundary(2, 2) == 3.0);
}

TEST_CASE("measures in the three regimes") {
  const MeasureSet qaf = measures(at(1.2), 0.01);
  CHECK(qaf.B > 2.0);
  CHECK(qaf.B == Approx(2.63461125604).epsilon(1e-10));
  CHECK(qaf.C == Approx(0.857492925701).epsilon(1e-10));
  CHECK(qaf.region == Region::I);

  const MeasureSet fm = measures(at(1.9), 0.01);
  CHECK(fm.B <= 2.0);
  CHECK(fm.C == 0.0);

  const MeasureSet hot = measures(at(1.2), 10.0);
  CHECK(hot.B < 2.0);
  CHECK(hot.C == 0.0);
  CHECK(hot.region == Region::III);

  CHECK_THROWS_AS(measures(at(1.2), 0.0), Error);
  CHECK_THROWS_AS(measures(at(1.2), -1.0), Error);
}

TEST_CASE("order parameters") {
  CHECK(correlators(at(1.2), 0.01).m_z == 0.0);
  CHECK(correlators(at(1.2), 0.01).ds_z != 0.0);
  CHECK(correlators(at(1.2), 0.01).q_mumu < 0.0);
  CHECK(correlators(at(1.9), 0.01).m_z > 0.0);
  CHECK(correlators(at(1.9), 0.01).ds_z == 0.0);
  const CorrelatorSet free = correlators(at(0.0), 1.0);
  CHECK(free.q_mumu == 0.0);
  CHECK(free.m_z == 0.0);
  CHECK(correlators(at(1.2), 5e-5).below_validated_temperature);
}

TEST_CASE("critical_temperature") {
  const double want[][2] = {{1.351, 0.035209281762},
                            {1.201, 0.0620901643065},
                            {1.802, 0.0624822002741},
                            {2.102, 0.11477274425}};
  for (auto [j1, tc] : want) {
    const auto got = critical_temperature(at(j1));
    REQUIRE(got.has_value());
    CHECK(*got == Approx(tc).epsilon(1e-9));
    CHECK(std::abs(effective_coupling(at(j1), 1.0 / *got).k_eff) ==
          Approx(critical_coupling()).epsilon(1e-8));
  }
  CHECK(std::abs(*critical_temperature(at(1.351)) - 0.035) <= 0.002);
  CHECK(std::abs(*critical_temperature(at(1.201)) - 0.063) <= 0.002);
  CHECK(std::abs(*critical_temperature(at(2.102)) - 0.115) <= 0.002);
  CHECK_FALSE(critical_temperature(at(0.0)).has_value());
  CHECK_FALSE(critical_temperature(at(1.5)).has_value());
}

TEST_CASE("zero_temperature_limits") {
  for (double j1 : {2.0, 1.9}) {
    const CorrelatorSet c = zero_temperature_limits(at(j1));
    CHECK(c.q_xx == Approx(0.0));
    CHECK(c.q_zz == Approx(0.25));
    CHECK(std::abs(c.m_z) == Approx(0.5));
    const MeasureSet m = measures_from(at(j1), c);
    CHECK(m.B == Approx(2.0));
    CHECK(m.C == 0.0);
  }
  CHECK(measures_from(at(1.0), zero_temperature_limits(at(1.0))).B > 2.0);
  CHECK_THROWS_AS(zero_temperature_limits(at(1.5)), Error);

  for (double j1 : {1.0, 1.9}) {
    const CorrelatorSet lim = zero_temperature_limits(at(j1));
    const CorrelatorSet c = correlators(at(j1), 0.0015);
    CHECK(std::abs(c.q_xx - lim.q_xx) <= 1e-3);
    CHECK(std::abs(c.q_zz - lim.q_zz) <= 1e-3);
    CHECK(std::abs(c.q_mumu - lim.q_mumu) <= 1e-3);
    CHECK(std::abs(c.m_z - lim.m_z) <= 1e-3);
    CHECK(std::abs(c.ds_z - lim.ds_z) <= 1e-3);
  }
}

TEST_CASE("assembled states stay physical on a coarse grid") {
  for (double j1 = -2.5; j1 <= 2.5; j1 += 0.1)
    for (double t = 0.002; t < 3.0; t *= 1.3) {
      const MeasureSet m = measures(at(j1), t);
      CHECK(m.B <= 2.0 * std::sqrt(2.0) + 1e-12);
      CHECK(m.C >= 0.0);
      CHECK(m.C <= 1.0);
    }
}

TEST_CASE("decorated strip reproduces the correlators") {
  // Backbone decoupled: any width gives the single-bond values.
  const CorrelatorSet free = oracle::decorated_strip(at(0.0), 0.5, 2);
  const CorrelatorSet exact = correlators(at(0.0), 0.5);
  CHECK(free.q_mumu == Approx(0.0));
  CHECK(free.q_xx == Approx(exact.q_xx).epsilon(1e-12));
  CHECK(free.q_zz == Approx(exact.q_zz).epsilon(1e-12));

  const CorrelatorSet w2 = oracle::decorated_strip(at(1.2), 2.0, 2);
  const CorrelatorSet w4 = oracle::decorated_strip(at(1.2), 2.0, 4);
  CHECK(std::abs(w2.q_mumu - w4.q_mumu) <= 1e-3);
  CHECK_THROWS_AS(oracle::decorated_strip(at(1.2), 0.01, 4), Error);
  CHECK_THROWS_AS(oracle::decorated_strip(at(1.2), 0.2, 8), Error);
}

TEST_CASE("specific heat peaks at the critical temperature") {
  const double tc = *critical_temperature(at(2.102));
  CHECK(specific_heat(at(2.102), tc - 1e-3) > specific_heat(at(2.102), tc - 1e-2));
  CHECK(specific_heat(at(2.102), tc + 1e-3) > specific_heat(at(2.102), tc + 1e-2));
}
