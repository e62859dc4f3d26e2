#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "isingbell/error.hpp"
#include "isingbell/phase_analysis.hpp"

using namespace isingbell;
using doctest::Approx;

namespace {
const ModelParams kBase{1.0, 2.0, 0.0};

std::size_t argmax_abs(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  return best;
}
}  // namespace

TEST_CASE("grid bookkeeping") {
  CHECK(grid_count(0.0, 1.0, 0.1) == 11);
  CHECK(grid_count(1.0, 2.0, 1e-3) == 1001);
  const ScanSeries s = scan(kBase, ScanAxis::T, 1.2, 0.1, 0.101, 1e-3);
  CHECK(s.points.size() == 2);
  CHECK_THROWS_AS(scan(kBase, ScanAxis::T, 1.2, 0.0, 0.1, 1e-3), Error);
  CHECK_THROWS_AS(scan(kBase, ScanAxis::T, 1.2, 0.2, 0.1, 1e-3), Error);
  CHECK_THROWS_AS(scan(kBase, ScanAxis::T, 1.2, 0.1, 0.2, 0.0), Error);
  CHECK_THROWS_AS(scan(kBase, ScanAxis::J1, 0.0, 1.0, 2.0, 1e-2), Error);
  CHECK(parse_field(to_string(Field::dS_z)) == Field::dS_z);
  CHECK(parse_axis("j1") == ScanAxis::J1);
  CHECK_THROWS_AS(parse_field("bogus"), Error);
}

TEST_CASE("failed points are annotated and the scan continues") {
  const PointEvaluation bad = evaluate_point({1.0, 2.0, 1.2}, -1.0);
  CHECK_FALSE(bad.ok());
  CHECK(std::isnan(field_value(bad, Field::B)));
}

TEST_CASE("derivative") {
  const std::vector<double> xs{0, 1, 2, 3, 4};
  for (double d : derivative(xs, {3, 3, 3, 3, 3})) CHECK(std::abs(d) <= 1e-12);
  for (double d : derivative(xs, {1, 3, 5, 7, 9})) CHECK(d == Approx(2.0));
  CHECK_THROWS_AS(derivative({0, 1}, {0, 1}), Error);

  const ScanSeries s = scan(kBase, ScanAxis::T, 1.201, 0.04, 0.09, 1e-3);
  const auto d = derivative(s, Field::B);
  CHECK(std::abs(s.points[argmax_abs(d)].x - 0.063) <= 0.002);
}

TEST_CASE("detect_divergence") {
  const ScanSeries s = scan(kBase, ScanAxis::T, 1.351, 0.005, 0.2, 1e-3);
  const auto div = detect_divergence(s, Field::B);
  REQUIRE(div.size() == 1);
  CHECK(std::abs(div[0].location - 0.035) <= 0.002);
  CHECK(div[0].peaks.size() == kRefinementLevels + 1);

  const ScanSeries fm = scan(kBase, ScanAxis::T, 1.802, 0.005, 0.2, 1e-3);
  const auto fdiv = detect_divergence(fm, Field::B);
  REQUIRE(fdiv.size() == 1);
  CHECK(std::abs(fdiv[0].location - 0.063) <= 0.002);
  const double kink = *detect_kink({1.0, 2.0, 1.802}, 0.08, 0.15);
  for (const auto& d : fdiv) CHECK(std::abs(d.location - kink) > 0.01);

  std::vector<double> xs, ys;
  for (int i = 0; i < 100; ++i) {
    xs.push_back(i * 0.01);
    ys.push_back(1.0);
  }
  CHECK(detect_divergence(synthetic_series(ScanAxis::T, xs, Field::B, ys), Field::B).empty());
}

TEST_CASE("detect_sudden_change") {
  const ScanSeries s = scan(kBase, ScanAxis::J1, 0.0015, 1.0, 2.0, 1e-3);
  const auto jumps = detect_sudden_change(s, Field::B);
  REQUIRE(jumps.size() == 1);
  CHECK(std::abs(jumps[0].location - 1.5) <= 2e-3);
  CHECK(jumps[0].magnitude < 0.0);

  std::vector<double> xs, smooth, step;
  for (int i = 0; i < 200; ++i) {
    xs.push_back(i * 0.01);
    smooth.push_back(std::sin(xs.back()));
    step.push_back(i < 120 ? 0.0 : 1.0);
  }
  CHECK(detect_sudden_change(synthetic_series(ScanAxis::J1, xs, Field::B, smooth), Field::B)
            .empty());
  const auto st =
      detect_sudden_change(synthetic_series(ScanAxis::J1, xs, Field::B, step), Field::B);
  REQUIRE(st.size() == 1);
  CHECK(std::abs(st[0].location - 1.195) <= 0.01);
  CHECK(st[0].magnitude == Approx(1.0));
}

TEST_CASE("detect_kink") {
  CHECK(*detect_kink({1.0, 2.0, 1.802}, 0.08, 0.15, 1e-6) == Approx(0.107).epsilon(0.02));
  CHECK(std::abs(*detect_kink({1.0, 2.0, 2.102}, 0.15, 0.25, 1e-6) - 0.191) <= 0.002);
  CHECK(std::abs(*detect_kink({1.0, 2.0, 1.802}, 0.08, 0.15, 1e-6) - 0.107) <= 0.002);
  // Deep in the QAF phase N1 stays above N2.
  CHECK_FALSE(detect_kink({1.0, 2.0, 1.2}, 0.005, 0.02).has_value());
  CHECK_THROWS_AS(detect_kink({1.0, 2.0, 1.2}, 0.2, 0.1), Error);
}

TEST_CASE("classify_region") {
  CHECK(classify_region({1.0, 2.0, 1.2}, 0.01) == Region::I);
  CHECK(classify_region({1.0, 2.0, 1.9}, 0.05) == Region::III);
  // Scan J1 at moderate T for a point where B <= 2 and C > 0.
  bool found = false;
  for (double j1 = 0.5; j1 < 1.5 && !found; j1 += 0.01) {
    const MeasureSet m = measures({1.0, 2.0, j1}, 0.3);
    if (m.B <= 2.0 && m.C > 0.0) {
      CHECK(classify_region({1.0, 2.0, j1}, 0.3) == Region::II);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("contour_grid") {
  const ContourGrid one = contour_grid(kBase, 0.1, 0.1, 0.01, 1.0, 1.0, 0.01, 1);
  CHECK(one.cells.size() == 1);
  CHECK(one.at(0, 0).ok());

  const ContourGrid g1 = contour_grid(kBase, 0.01, 0.2, 0.01, 0.5, 2.0, 0.05, 1);
  const ContourGrid g4 = contour_grid(kBase, 0.01, 0.2, 0.01, 0.5, 2.0, 0.05, 4);
  REQUIRE(g1.cells.size() == g4.cells.size());
  for (std::size_t i = 0; i < g1.cells.size(); ++i) {
    CHECK(g1.cells[i].measures.B == g4.cells[i].measures.B);
    CHECK(g1.cells[i].measures.C == g4.cells[i].measures.C);
  }
  for (const auto& c : g1.cells)
    if (c.measures.region == Region::I) CHECK(c.measures.C > 0.0);

  // M_z switches on below Tc at J1 = 2.102.
  const ContourGrid col = contour_grid(kBase, 0.10, 0.13, 1e-3, 2.102, 2.102, 0.01, 0);
  std::size_t first_zero = col.n_t;
  for (std::size_t i = 0; i < col.n_t; ++i)
    if (col.at(i, 0).correlators.m_z == 0.0) {
      first_zero = i;
      break;
    }
  REQUIRE(first_zero < col.n_t);
  CHECK(std::abs(col.t_at(first_zero) - 0.115) <= 2e-3);
}

TEST_CASE("isolines") {
  ContourGrid g;
  g.t_lo = 0.0;
  g.t_step = 1.0;
  g.n_t = 2;
  g.j1_lo = 0.0;
  g.j1_step = 1.0;
  g.n_j1 = 2;
  g.cells.resize(4);
  const double b[] = {1.0, 3.0, 1.0, 3.0};
  for (int i = 0; i < 4; ++i) g.cells[i].measures.B = b[i];
  const auto segs = isolines(g, Field::B, 2.0);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].j1_a == Approx(0.5));
  CHECK(segs[0].j1_b == Approx(0.5));
  CHECK(isolines(g, Field::B, 5.0).empty());
}

TEST_CASE("classifier agrees with the B = 2 iso-line within a cell") {
  const double t = 0.05;
  const ContourGrid g = contour_grid(kBase, t, t + 0.01, 0.01, 1.0, 2.0, 0.01, 0);
  const auto segs = isolines(g, Field::B, 2.0);
  REQUIRE_FALSE(segs.empty());
  for (std::size_t j = 0; j + 1 < g.n_j1; ++j) {
    const bool left = g.at(0, j).measures.region == Region::I;
    const bool right = g.at(0, j + 1).measures.region == Region::I;
    if (left == right) continue;
    const double lo = g.j1_at(j), hi = g.j1_at(j + 1);
    const bool hit = std::any_of(segs.begin(), segs.end(), [&](const IsoSegment& s) {
      return (s.j1_a >= lo - 1e-12 && s.j1_a <= hi + 1e-12) ||
             (s.j1_b >= lo - 1e-12 && s.j1_b <= hi + 1e-12);
    });
    CHECK(hit);
  }
}
