#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "isingbell/error.hpp"
#include "isingbell/ising_exact.hpp"
#include "isingbell/oracle.hpp"

using namespace isingbell;
using doctest::Approx;

namespace {
double norm(const oracle::Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
}  // namespace

TEST_CASE("chsh_optimize") {
  const DensityMatrix singlet = to_density_matrix(xstate_from_correlators(0, 0, -0.25, -0.25));
  const oracle::ChshResult r = oracle::chsh_optimize(singlet, 1);
  CHECK(r.value == Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
  for (const auto& v : {r.settings.a, r.settings.a_prime, r.settings.b, r.settings.b_prime})
    CHECK(norm(v) == Approx(1.0).epsilon(1e-12));
  CHECK(oracle::chsh_value(singlet, r.settings) == Approx(r.value).epsilon(1e-12));

  CHECK(std::abs(oracle::chsh_optimize(DensityMatrix::Identity() / 4.0, 1).value) <= 1e-9);

  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const DensityMatrix rho = to_density_matrix(oracle::random_xstate(rng));
    const double h = bell_horodecki(rho).value;
    const double v = oracle::chsh_optimize(rho, i).value;
    CHECK(v <= h + 1e-9);
    CHECK(v >= h - 1e-6);
  }
  CHECK_THROWS_AS(oracle::chsh_optimize(DensityMatrix::Zero(), 1), Error);
}

TEST_CASE("chsh_optimize is deterministic per seed") {
  std::mt19937_64 rng(5);
  const DensityMatrix rho = oracle::random_density_matrix(rng);
  const auto a = oracle::chsh_optimize(rho, 42);
  const auto b = oracle::chsh_optimize(rho, 42);
  CHECK(a.value == b.value);
  CHECK(a.settings.a == b.settings.a);
}

TEST_CASE("ed_bond_trace") {
  const ModelParams p{1, 2, 1};
  CHECK(oracle::ed_bond_trace(p, 5.0, BondObservable::identity, 0.5, -0.5) ==
        Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(oracle::ed_bond_trace({1, 2, 0}, 5.0, BondObservable::sz_sum, 0.5, 0.5)) <
        1e-14);
  CHECK_THROWS_AS(oracle::ed_bond_trace(p, 0.0, BondObservable::sxsx, 0.5, 0.5), Error);
}

TEST_CASE("strip_transfer_matrix") {
  for (int w = oracle::kMinStripWidth; w <= 8; ++w)
    CHECK(oracle::strip_transfer_matrix(0.0, w).epsilon == Approx(0.0).scale(1));
  for (int w : {4, 6, 8})
    CHECK(oracle::strip_transfer_matrix(-0.3, w).epsilon ==
          Approx(-oracle::strip_transfer_matrix(0.3, w).epsilon).epsilon(1e-12));

  std::vector<int> ws{7, 8};
  std::vector<double> e;
  for (int w : ws) e.push_back(oracle::strip_transfer_matrix(0.3, w).epsilon);
  CHECK(oracle::extrapolate_inverse_square(ws, e) == Approx(nn_correlation(0.3)).epsilon(1e-2));

  CHECK_THROWS_AS(oracle::strip_transfer_matrix(0.3, 1), Error);
  CHECK_THROWS_AS(oracle::strip_transfer_matrix(0.3, oracle::kMaxStripWidth + 1), Error);
  CHECK_THROWS_AS(oracle::strip_transfer_matrix(2.5, 4), Error);
  CHECK_THROWS_AS(oracle::strip_magnetization(0.5, 5), Error);
  CHECK_THROWS_AS(oracle::extrapolate_inverse_square({4}, {0.1}), Error);
  CHECK_THROWS_AS(oracle::extrapolate_geometric({0.1, 0.2}), Error);
}

TEST_CASE("strip extrapolations converge monotonically away from K_c") {
  for (double k : {0.2, 0.8}) {
    double prev = INFINITY;
    for (int w = 4; w <= 10; w += 2) {
      const double err = std::abs(oracle::strip_transfer_matrix(k, w).epsilon - nn_correlation(k));
      CHECK(err <= prev);
      prev = err;
    }
  }
}

TEST_CASE("random generators produce valid states") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    CHECK(validate_state(oracle::random_xstate(rng)).empty());
    const XState z = oracle::random_xstate(rng, true);
    CHECK(z.v_plus == z.v_minus);
    CHECK(validate_state(oracle::random_density_matrix(rng)).empty());
  }
}

TEST_CASE("run_oracle_suite passes and is reproducible") {
  const auto a = oracle::run_oracle_suite(17, 500);
  const auto b = oracle::run_oracle_suite(17, 500);
  CHECK(a.passed());
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    INFO(a.checks[i].name << ": " << a.checks[i].detail);
    CHECK(a.checks[i].passed);
    CHECK(a.checks[i].worst == b.checks[i].worst);
  }
}
