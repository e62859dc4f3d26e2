#include "isingbell/isingbell.h"

#include <cmath>
#include <exception>
#include <new>
#include <string>

#include "isingbell/decorated_model.hpp"
#include "isingbell/error.hpp"
#include "isingbell/oracle.hpp"
#include "isingbell/phase_analysis.hpp"

#ifndef ISINGBELL_VERSION
#define ISINGBELL_VERSION "0.0.0"
#endif

struct ib_scan {
  isingbell::ScanSeries series;
};

struct ib_contour {
  isingbell::ContourGrid grid;
};

struct ib_isolines {
  std::vector<isingbell::IsoSegment> segments;
};

struct ib_check_report {
  isingbell::oracle::CheckReport report;
};

namespace {

using namespace isingbell;

thread_local std::string last_error;

ib_status set_error(ib_status s, const std::string& what) {
  last_error = what;
  return s;
}

ib_status from_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_argument: return IB_ERR_INVALID_ARGUMENT;
    case ErrorKind::out_of_domain: return IB_ERR_OUT_OF_DOMAIN;
    case ErrorKind::numerical_failure: return IB_ERR_NUMERICAL_FAILURE;
    case ErrorKind::degenerate_point: return IB_ERR_DEGENERATE_POINT;
  }
  return IB_ERR_INTERNAL;
}

template <class F>
ib_status guarded(F&& body) {
  try {
    body();
    return IB_OK;
  } catch (const Error& e) {
    return set_error(from_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(IB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(IB_ERR_INTERNAL, e.what());
  }
}

ib_status null_argument(const char* where) {
  return set_error(IB_ERR_INVALID_ARGUMENT, std::string(where) + ": null argument");
}

ModelParams to_params(const ib_params* p) { return {p->J, p->Delta, p->J1}; }

ib_region to_region(Region r) {
  switch (r) {
    case Region::I: return IB_REGION_I;
    case Region::II: return IB_REGION_II;
    case Region::III: return IB_REGION_III;
  }
  return IB_REGION_III;
}

Field to_field(ib_field f) {
  if (f < IB_FIELD_B || f > IB_FIELD_DS_Z)
    fail(ErrorKind::invalid_argument, "unknown field code " + std::to_string(int(f)));
  return static_cast<Field>(f);
}

void copy_out(const CorrelatorSet& c, ib_correlators* out) {
  if (!out) return;
  *out = {c.T,    c.q_xx, c.q_zz, c.q_mumu, c.m_z, c.ds_z, c.k_eff, c.near_critical,
          c.below_validated_temperature};
}

void copy_out(const MeasureSet& m, ib_measures* out) {
  if (!out) return;
  *out = {m.T, m.J1, m.B, m.N1, m.N2, m.C, to_region(m.region)};
}

void copy_point(const PointEvaluation& e, ib_correlators* corr, ib_measures* meas,
                const char** error) {
  if (e.ok()) {
    copy_out(e.correlators, corr);
    copy_out(e.measures, meas);
  }
  if (error) *error = e.ok() ? nullptr : e.error.c_str();
}

}  // namespace

extern "C" {

const char* ib_version(void) { return ISINGBELL_VERSION; }

const char* ib_last_error_message(void) { return last_error.c_str(); }

const char* ib_status_name(ib_status s) {
  switch (s) {
    case IB_OK: return "ok";
    case IB_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case IB_ERR_OUT_OF_DOMAIN: return "out-of-domain";
    case IB_ERR_NUMERICAL_FAILURE: return "numerical-failure";
    case IB_ERR_DEGENERATE_POINT: return "degenerate-point";
    case IB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

ib_params ib_default_params(void) {
  const ModelParams p;
  return {p.J, p.Delta, p.J1};
}

const char* ib_field_name(ib_field f) {
  if (f < IB_FIELD_B || f > IB_FIELD_DS_Z) return "?";
  return to_string(static_cast<Field>(f)).data();
}

ib_status ib_field_from_name(const char* name, ib_field* out) {
  if (!name || !out) return null_argument("ib_field_from_name");
  return guarded([&] { *out = static_cast<ib_field>(parse_field(name)); });
}

const char* ib_region_name(ib_region r) {
  switch (r) {
    case IB_REGION_I: return "I";
    case IB_REGION_II: return "II";
    case IB_REGION_III: return "III";
  }
  return "?";
}

const char* ib_transition_name(ib_transition_kind k) {
  return to_string(static_cast<TransitionKind>(k)).data();
}

ib_status ib_evaluate(const ib_params* p, double T, ib_correlators* corr,
                      ib_measures* meas) {
  if (!p) return null_argument("ib_evaluate");
  return guarded([&] {
    const ModelParams mp = to_params(p);
    const CorrelatorSet c = correlators(mp, T);
    const MeasureSet m = measures_from(mp, c);
    copy_out(c, corr);
    copy_out(m, meas);
  });
}

ib_status ib_zero_temperature_limits(const ib_params* p, ib_correlators* corr,
                                     ib_measures* meas) {
  if (!p) return null_argument("ib_zero_temperature_limits");
  return guarded([&] {
    const ModelParams mp = to_params(p);
    const CorrelatorSet c = zero_temperature_limits(mp);
    const MeasureSet m = measures_from(mp, c);
    copy_out(c, corr);
    copy_out(m, meas);
  });
}

ib_status ib_classify_region(const ib_params* p, double T, ib_region* out) {
  if (!p || !out) return null_argument("ib_classify_region");
  return guarded([&] { *out = to_region(classify_region(to_params(p), T)); });
}

ib_status ib_qpt_boundary(double J, double Delta, double* out) {
  if (!out) return null_argument("ib_qpt_boundary");
  return guarded([&] { *out = qpt_boundary(J, Delta); });
}

ib_status ib_critical_temperature(const ib_params* p, double tol, double* out,
                                  int* found) {
  if (!p || !out || !found) return null_argument("ib_critical_temperature");
  return guarded([&] {
    if (!(tol > 0.0)) fail(ErrorKind::invalid_argument, "tolerance must be positive");
    const auto t = critical_temperature(to_params(p), tol);
    *found = t.has_value();
    *out = t.value_or(std::nan(""));
  });
}

ib_status ib_detect_kink(const ib_params* p, double t_lo, double t_hi, double tol,
                         double* out, int* found) {
  if (!p || !out || !found) return null_argument("ib_detect_kink");
  return guarded([&] {
    if (!(tol > 0.0)) fail(ErrorKind::invalid_argument, "tolerance must be positive");
    const auto t = detect_kink(to_params(p), t_lo, t_hi, tol);
    *found = t.has_value();
    *out = t.value_or(std::nan(""));
  });
}

ib_status ib_scan_create(const ib_params* p, ib_axis axis, double fixed, double lo,
                         double hi, double step, ib_scan** out) {
  if (!p || !out) return null_argument("ib_scan_create");
  *out = nullptr;
  return guarded([&] {
    if (axis != IB_AXIS_T && axis != IB_AXIS_J1)
      fail(ErrorKind::invalid_argument, "unknown axis code");
    const ScanAxis a = axis == IB_AXIS_T ? ScanAxis::T : ScanAxis::J1;
    *out = new ib_scan{scan(to_params(p), a, fixed, lo, hi, step)};
  });
}

void ib_scan_destroy(ib_scan* s) { delete s; }

size_t ib_scan_size(const ib_scan* s) { return s ? s->series.points.size() : 0; }

ib_status ib_scan_point(const ib_scan* s, size_t i, double* x, ib_correlators* corr,
                        ib_measures* meas, const char** error) {
  if (!s) return null_argument("ib_scan_point");
  if (i >= s->series.points.size())
    return set_error(IB_ERR_INVALID_ARGUMENT, "ib_scan_point: index out of range");
  const ScanPoint& pt = s->series.points[i];
  if (x) *x = pt.x;
  copy_point(pt.eval, corr, meas, error);
  return IB_OK;
}

ib_status ib_scan_values(const ib_scan* s, ib_field f, double* out) {
  if (!s || !out) return null_argument("ib_scan_values");
  return guarded([&] {
    const auto v = s->series.values(to_field(f));
    std::copy(v.begin(), v.end(), out);
  });
}

ib_status ib_scan_derivative(const ib_scan* s, ib_field f, double* out) {
  if (!s || !out) return null_argument("ib_scan_derivative");
  return guarded([&] {
    const auto v = derivative(s->series, to_field(f));
    std::copy(v.begin(), v.end(), out);
  });
}

ib_status ib_scan_divergences(const ib_scan* s, ib_field f, double ratio,
                              ib_transition* out, size_t cap, size_t* count) {
  if (!s || !count || (cap > 0 && !out)) return null_argument("ib_scan_divergences");
  return guarded([&] {
    const auto found = detect_divergence(s->series, to_field(f), ratio);
    *count = found.size();
    const ib_axis axis = s->series.axis == ScanAxis::T ? IB_AXIS_T : IB_AXIS_J1;
    for (size_t i = 0; i < found.size() && i < cap; ++i)
      out[i] = {IB_TRANSITION_CRITICAL, axis, found[i].location, found[i].uncertainty,
                found[i].peaks.empty() ? 0.0 : found[i].peaks.back()};
  });
}

ib_status ib_scan_jumps(const ib_scan* s, ib_field f, double ratio, ib_transition* out,
                        size_t cap, size_t* count) {
  if (!s || !count || (cap > 0 && !out)) return null_argument("ib_scan_jumps");
  return guarded([&] {
    const auto found = detect_sudden_change(s->series, to_field(f), ratio);
    *count = found.size();
    const ib_axis axis = s->series.axis == ScanAxis::T ? IB_AXIS_T : IB_AXIS_J1;
    for (size_t i = 0; i < found.size() && i < cap; ++i)
      out[i] = {IB_TRANSITION_QPT_JUMP, axis, found[i].location, found[i].uncertainty,
                found[i].magnitude};
  });
}

ib_status ib_contour_create(const ib_params* p, double t_lo, double t_hi, double t_step,
                            double j1_lo, double j1_hi, double j1_step, unsigned threads,
                            ib_contour** out) {
  if (!p || !out) return null_argument("ib_contour_create");
  *out = nullptr;
  return guarded([&] {
    *out = new ib_contour{
        contour_grid(to_params(p), t_lo, t_hi, t_step, j1_lo, j1_hi, j1_step, threads)};
  });
}

void ib_contour_destroy(ib_contour* g) { delete g; }

ib_status ib_contour_shape(const ib_contour* g, size_t* n_t, size_t* n_j1) {
  if (!g || !n_t || !n_j1) return null_argument("ib_contour_shape");
  *n_t = g->grid.n_t;
  *n_j1 = g->grid.n_j1;
  return IB_OK;
}

ib_status ib_contour_cell(const ib_contour* g, size_t i_t, size_t i_j1, double* T,
                          double* J1, ib_correlators* corr, ib_measures* meas,
                          const char** error) {
  if (!g) return null_argument("ib_contour_cell");
  if (i_t >= g->grid.n_t || i_j1 >= g->grid.n_j1)
    return set_error(IB_ERR_INVALID_ARGUMENT, "ib_contour_cell: index out of range");
  if (T) *T = g->grid.t_at(i_t);
  if (J1) *J1 = g->grid.j1_at(i_j1);
  copy_point(g->grid.at(i_t, i_j1), corr, meas, error);
  return IB_OK;
}

ib_status ib_isolines_create(const ib_contour* g, ib_field f, double level,
                             ib_isolines** out) {
  if (!g || !out) return null_argument("ib_isolines_create");
  *out = nullptr;
  return guarded([&] { *out = new ib_isolines{isolines(g->grid, to_field(f), level)}; });
}

void ib_isolines_destroy(ib_isolines* l) { delete l; }

size_t ib_isolines_size(const ib_isolines* l) { return l ? l->segments.size() : 0; }

ib_status ib_isolines_segment(const ib_isolines* l, size_t i, ib_segment* out) {
  if (!l || !out) return null_argument("ib_isolines_segment");
  if (i >= l->segments.size())
    return set_error(IB_ERR_INVALID_ARGUMENT, "ib_isolines_segment: index out of range");
  const IsoSegment& s = l->segments[i];
  *out = {s.j1_a, s.t_a, s.j1_b, s.t_b};
  return IB_OK;
}

ib_status ib_oracle_check(uint64_t seed, size_t samples, ib_check_report** out) {
  if (!out) return null_argument("ib_oracle_check");
  *out = nullptr;
  return guarded([&] { *out = new ib_check_report{oracle::run_oracle_suite(seed, samples)}; });
}

void ib_check_report_destroy(ib_check_report* r) { delete r; }

size_t ib_check_report_size(const ib_check_report* r) {
  return r ? r->report.checks.size() : 0;
}

int ib_check_report_passed(const ib_check_report* r) { return r && r->report.passed(); }

ib_status ib_check_report_item(const ib_check_report* r, size_t i, ib_check_item* out) {
  if (!r || !out) return null_argument("ib_check_report_item");
  if (i >= r->report.checks.size())
    return set_error(IB_ERR_INVALID_ARGUMENT, "ib_check_report_item: index out of range");
  const auto& c = r->report.checks[i];
  *out = {c.name.c_str(), c.passed, c.worst, c.tolerance, c.samples, c.detail.c_str()};
  return IB_OK;
}

}  // extern "C"
