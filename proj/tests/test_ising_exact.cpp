#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isingbell/error.hpp"
#include "isingbell/ising_exact.hpp"
#include "isingbell/oracle.hpp"

using namespace isingbell;
using doctest::Approx;

// Reference values below were computed independently with mpmath at 30 digits.

TEST_CASE("elliptic_K") {
  CHECK(elliptic_K(0.0) == Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(elliptic_K(0.5) == Approx(1.6857503548125960).epsilon(1e-14));
  CHECK(elliptic_K(0.99) == Approx(3.3566005233611924).epsilon(1e-12));
  CHECK(elliptic_K_complementary(std::sqrt(1 - 0.99 * 0.99)) ==
        Approx(3.3566005233611924).epsilon(1e-12));
  CHECK_THROWS_AS(elliptic_K(1.0), Error);
  CHECK_THROWS_AS(elliptic_K(1.0 - 1e-13), Error);
  CHECK_THROWS_AS(elliptic_K(-0.1), Error);
  CHECK_THROWS_AS(elliptic_K_complementary(0.0), Error);
}

TEST_CASE("critical_coupling") {
  const double kc = critical_coupling();
  CHECK(kc == Approx(0.44068679350977151).epsilon(1e-15));
  CHECK(std::abs(std::sinh(2 * kc) - 1.0) <= 1e-15);
  CHECK(std::abs(std::tanh(kc) - std::exp(-2 * kc)) <= 1e-15);
}

TEST_CASE("nn_correlation") {
  CHECK(nn_correlation(0.0) == 0.0);
  CHECK(nn_correlation(5.0) == Approx(1.0).epsilon(1e-8));
  CHECK(nn_correlation(critical_coupling()) == Approx(std::sqrt(0.5)).epsilon(1e-12));
  const double ref[][2] = {{0.1, 0.10168869554867783},
                           {0.2, 0.21411441662017403},
                           {0.3, 0.35224953541622254},
                           {0.5, 0.87278228765627698},
                           {0.8, 0.99242566535841499}};
  for (auto [k, eps] : ref) {
    CHECK(nn_correlation(k) == Approx(eps).epsilon(1e-12));
    CHECK(nn_correlation(-k) == -nn_correlation(k));
  }
  const IsingPoint near = evaluate_ising(critical_coupling() + 1e-11);
  CHECK(near.near_critical);
  CHECK(near.m_uniform == 0.0);
}

TEST_CASE("monotone on [0, 5]") {
  double prev_e = -1.0, prev_m = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double k = 5.0 * i / 1000;
    const double e = nn_correlation(k), m = spontaneous_magnetization(k);
    CHECK(e >= prev_e);
    CHECK(m >= prev_m);
    prev_e = e;
    prev_m = m;
  }
}

TEST_CASE("spontaneous_magnetization") {
  const double kc = critical_coupling();
  CHECK(spontaneous_magnetization(0.3) == 0.0);
  CHECK(spontaneous_magnetization(kc - 1e-9) == 0.0);
  CHECK(spontaneous_magnetization(kc + 1e-9) > 0.0);
  CHECK(spontaneous_magnetization(10.0) == Approx(1.0).epsilon(1e-12));
  CHECK(spontaneous_magnetization(0.5) == Approx(0.91131937787749598).epsilon(1e-12));
  CHECK(uniform_magnetization(-0.5) == 0.0);
  CHECK(staggered_magnetization(-0.5) == spontaneous_magnetization(0.5));
  CHECK(staggered_magnetization(0.5) == 0.0);
}

TEST_CASE("free energy and specific heat") {
  CHECK(free_energy_density(0.0) == Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(free_energy_density(0.3) == Approx(free_energy_density(-0.3)).epsilon(1e-14));
  const double kc = critical_coupling();
  double below = 0.0, above = 0.0;
  for (double d : {0.1, 0.03, 0.01, 0.003, 0.001}) {
    const double cb = specific_heat(kc - d), ca = specific_heat(kc + d);
    CHECK(cb > below);
    CHECK(ca > above);
    below = cb;
    above = ca;
  }
}

TEST_CASE("strip transfer matrix agrees with the closed forms") {
  for (double k : {0.1, 0.2, 0.3, 0.5, 0.8}) {
    const double e9 = oracle::strip_transfer_matrix(k, 9).epsilon;
    const double e10 = oracle::strip_transfer_matrix(k, 10).epsilon;
    CHECK(oracle::extrapolate_inverse_square({9, 10}, {e9, e10}) ==
          Approx(nn_correlation(k)).epsilon(1e-2));
  }
  std::vector<double> f;
  for (int w = 12; w <= 14; ++w)
    f.push_back(oracle::strip_transfer_matrix(0.4, w).log_partition_per_site);
  CHECK(oracle::extrapolate_geometric(f) == Approx(free_energy_density(0.4)).epsilon(1e-4));
  // Magnetization from the long-distance row correlation of an even strip.
  CHECK(oracle::strip_magnetization(0.5, 12) ==
        Approx(spontaneous_magnetization(0.5)).epsilon(1e-2));
}
