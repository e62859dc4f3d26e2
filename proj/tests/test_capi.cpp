#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "isingbell/isingbell.h"

using doctest::Approx;

namespace {
ib_params at(double j1) {
  ib_params p = ib_default_params();
  p.J1 = j1;
  return p;
}
}  // namespace

TEST_CASE("metadata") {
  CHECK(std::string(ib_version()).size() > 0);
  CHECK(std::string(ib_status_name(IB_ERR_DEGENERATE_POINT)).size() > 0);
  const ib_params p = ib_default_params();
  CHECK(p.J == 1.0);
  CHECK(p.Delta == 2.0);
  ib_field f;
  CHECK(ib_field_from_name("q_zz", &f) == IB_OK);
  CHECK(f == IB_FIELD_Q_ZZ);
  CHECK(std::string(ib_field_name(f)) == "q_zz");
  CHECK(ib_field_from_name("nope", &f) == IB_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ib_region_name(IB_REGION_II)) == "II");
  CHECK(std::string(ib_transition_name(IB_TRANSITION_KINK)) == "KINK");
}

TEST_CASE("point evaluation and errors") {
  const ib_params p = at(1.2);
  ib_correlators c;
  ib_measures m;
  REQUIRE(ib_evaluate(&p, 0.01, &c, &m) == IB_OK);
  CHECK(m.B == Approx(2.63461125604).epsilon(1e-10));
  CHECK(m.region == IB_REGION_I);
  CHECK(ib_evaluate(&p, 0.01, nullptr, nullptr) == IB_OK);

  CHECK(ib_evaluate(&p, -1.0, &c, &m) == IB_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(ib_last_error_message()) > 0);
  CHECK(ib_evaluate(nullptr, 0.1, &c, &m) == IB_ERR_INVALID_ARGUMENT);

  const ib_params qpt = at(1.5);
  CHECK(ib_zero_temperature_limits(&qpt, &c, &m) == IB_ERR_DEGENERATE_POINT);
  const ib_params fm = at(1.9);
  REQUIRE(ib_zero_temperature_limits(&fm, &c, &m) == IB_OK);
  CHECK(m.B == Approx(2.0));
  CHECK(std::isinf(c.k_eff));

  ib_region r;
  CHECK(ib_classify_region(&fm, 0.05, &r) == IB_OK);
  CHECK(r == IB_REGION_III);
  double j1c = 0;
  CHECK(ib_qpt_boundary(1, 2, &j1c) == IB_OK);
  CHECK(j1c == 1.5);
}

TEST_CASE("transitions") {
  const ib_params p = at(1.802);
  double t = 0;
  int found = 0;
  REQUIRE(ib_critical_temperature(&p, 1e-10, &t, &found) == IB_OK);
  CHECK(found == 1);
  CHECK(t == Approx(0.0624822002741).epsilon(1e-9));
  REQUIRE(ib_detect_kink(&p, 0.08, 0.15, 1e-10, &t, &found) == IB_OK);
  CHECK(found == 1);
  CHECK(t == Approx(0.107233439754).epsilon(1e-9));
  const ib_params free = at(0.0);
  REQUIRE(ib_critical_temperature(&free, 1e-10, &t, &found) == IB_OK);
  CHECK(found == 0);
}

TEST_CASE("scan handle") {
  const ib_params p = ib_default_params();
  ib_scan* s = nullptr;
  REQUIRE(ib_scan_create(&p, IB_AXIS_J1, 0.0015, 1.0, 2.0, 1e-3, &s) == IB_OK);
  REQUIRE(ib_scan_size(s) == 1001);
  std::vector<double> b(ib_scan_size(s)), d(ib_scan_size(s));
  CHECK(ib_scan_values(s, IB_FIELD_B, b.data()) == IB_OK);
  CHECK(ib_scan_derivative(s, IB_FIELD_B, d.data()) == IB_OK);
  double x;
  const char* err = "x";
  CHECK(ib_scan_point(s, 0, &x, nullptr, nullptr, &err) == IB_OK);
  CHECK(x == 1.0);
  CHECK(err == nullptr);
  CHECK(ib_scan_point(s, 5000, &x, nullptr, nullptr, &err) == IB_ERR_INVALID_ARGUMENT);

  size_t count = 0;
  CHECK(ib_scan_jumps(s, IB_FIELD_B, 10.0, nullptr, 0, &count) == IB_OK);
  REQUIRE(count == 1);
  ib_transition ev;
  CHECK(ib_scan_jumps(s, IB_FIELD_B, 10.0, &ev, 1, &count) == IB_OK);
  CHECK(ev.kind == IB_TRANSITION_QPT_JUMP);
  CHECK(std::abs(ev.location - 1.5) <= 2e-3);
  ib_scan_destroy(s);
  ib_scan_destroy(nullptr);

  CHECK(ib_scan_create(&p, IB_AXIS_T, 1.2, 0.0, 0.1, 1e-3, &s) == IB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("contour and isolines") {
  const ib_params p = ib_default_params();
  ib_contour* g = nullptr;
  REQUIRE(ib_contour_create(&p, 0.01, 0.2, 0.01, 1.0, 2.0, 0.02, 2, &g) == IB_OK);
  size_t nt = 0, nj = 0;
  CHECK(ib_contour_shape(g, &nt, &nj) == IB_OK);
  CHECK(nt == 20);
  CHECK(nj == 51);
  double t, j1;
  ib_measures m;
  const char* err;
  CHECK(ib_contour_cell(g, 0, 0, &t, &j1, nullptr, &m, &err) == IB_OK);
  CHECK(t == 0.01);
  CHECK(j1 == 1.0);
  CHECK(ib_contour_cell(g, nt, 0, &t, &j1, nullptr, &m, &err) == IB_ERR_INVALID_ARGUMENT);

  ib_isolines* l = nullptr;
  REQUIRE(ib_isolines_create(g, IB_FIELD_B, 2.0, &l) == IB_OK);
  CHECK(ib_isolines_size(l) > 0);
  ib_segment seg;
  CHECK(ib_isolines_segment(l, 0, &seg) == IB_OK);
  ib_isolines_destroy(l);
  ib_contour_destroy(g);
}

TEST_CASE("oracle report") {
  ib_check_report* r = nullptr;
  REQUIRE(ib_oracle_check(3, 200, &r) == IB_OK);
  CHECK(ib_check_report_passed(r) == 1);
  const size_t n = ib_check_report_size(r);
  CHECK(n >= 8);
  ib_check_item item;
  for (size_t i = 0; i < n; ++i) {
    REQUIRE(ib_check_report_item(r, i, &item) == IB_OK);
    CHECK(item.passed == 1);
    CHECK(std::strlen(item.name) > 0);
  }
  CHECK(ib_check_report_item(r, n, &item) == IB_ERR_INVALID_ARGUMENT);
  ib_check_report_destroy(r);
}
