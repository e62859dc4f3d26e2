#ifndef ISINGBELL_H
#define ISINGBELL_H

/* C interface to the isingbell library. Every call returns an ib_status;
   on failure ib_last_error_message() holds a description for the calling
   thread until its next failing call. Objects are opaque and owned by the
   caller once created; release them with the matching _destroy function. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IB_API __declspec(dllexport)
#elif defined(__GNUC__)
#define IB_API __attribute__((visibility("default")))
#else
#define IB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ib_status {
  IB_OK = 0,
  IB_ERR_INVALID_ARGUMENT = 1,
  IB_ERR_OUT_OF_DOMAIN = 2,
  IB_ERR_NUMERICAL_FAILURE = 3,
  IB_ERR_DEGENERATE_POINT = 4,
  IB_ERR_INTERNAL = 5
} ib_status;

typedef enum ib_region { IB_REGION_I = 1, IB_REGION_II = 2, IB_REGION_III = 3 } ib_region;

typedef enum ib_axis { IB_AXIS_T = 0, IB_AXIS_J1 = 1 } ib_axis;

typedef enum ib_field {
  IB_FIELD_B = 0,
  IB_FIELD_N1,
  IB_FIELD_N2,
  IB_FIELD_C,
  IB_FIELD_Q_XX,
  IB_FIELD_Q_ZZ,
  IB_FIELD_Q_MUMU,
  IB_FIELD_M_Z,
  IB_FIELD_DS_Z
} ib_field;

typedef enum ib_transition_kind {
  IB_TRANSITION_CRITICAL = 0,
  IB_TRANSITION_KINK = 1,
  IB_TRANSITION_QPT_JUMP = 2
} ib_transition_kind;

typedef struct ib_params {
  double J;
  double Delta;
  double J1;
} ib_params;

typedef struct ib_correlators {
  double T;
  double q_xx;
  double q_zz;
  double q_mumu;
  double m_z;
  double ds_z;
  double k_eff;
  int near_critical;
  int below_validated_temperature;
} ib_correlators;

typedef struct ib_measures {
  double T;
  double J1;
  double B;
  double N1;
  double N2;
  double C;
  ib_region region;
} ib_measures;

typedef struct ib_transition {
  ib_transition_kind kind;
  ib_axis axis;
  double location;
  double uncertainty;
  double magnitude; /* net field change for jumps, peak |dF/dx| otherwise */
} ib_transition;

typedef struct ib_segment {
  double j1_a;
  double t_a;
  double j1_b;
  double t_b;
} ib_segment;

typedef struct ib_check_item {
  const char* name;
  int passed;
  double worst;
  double tolerance;
  size_t samples;
  const char* detail;
} ib_check_item;

typedef struct ib_scan ib_scan;
typedef struct ib_contour ib_contour;
typedef struct ib_isolines ib_isolines;
typedef struct ib_check_report ib_check_report;

IB_API const char* ib_version(void);
IB_API const char* ib_last_error_message(void);
IB_API const char* ib_status_name(ib_status s);

/* J = 1, Delta = 2, J1 = 0. */
IB_API ib_params ib_default_params(void);

IB_API const char* ib_field_name(ib_field f);
IB_API ib_status ib_field_from_name(const char* name, ib_field* out);
IB_API const char* ib_region_name(ib_region r);
IB_API const char* ib_transition_name(ib_transition_kind k);

/* Single points. Either output pointer may be NULL. */
IB_API ib_status ib_evaluate(const ib_params* p, double T, ib_correlators* corr,
                             ib_measures* meas);
IB_API ib_status ib_zero_temperature_limits(const ib_params* p, ib_correlators* corr,
                                            ib_measures* meas);
IB_API ib_status ib_classify_region(const ib_params* p, double T, ib_region* out);
IB_API ib_status ib_qpt_boundary(double J, double Delta, double* out);

/* *found is 0 when the backbone never orders (or no kink exists) in range. */
IB_API ib_status ib_critical_temperature(const ib_params* p, double tol, double* out,
                                         int* found);
IB_API ib_status ib_detect_kink(const ib_params* p, double t_lo, double t_hi, double tol,
                                double* out, int* found);

/* Scans: fixed is J1 for IB_AXIS_T and T for IB_AXIS_J1. */
IB_API ib_status ib_scan_create(const ib_params* p, ib_axis axis, double fixed, double lo,
                                double hi, double step, ib_scan** out);
IB_API void ib_scan_destroy(ib_scan* s);
IB_API size_t ib_scan_size(const ib_scan* s);
/* *error is NULL for a successful point, else a message owned by the scan. */
IB_API ib_status ib_scan_point(const ib_scan* s, size_t i, double* x, ib_correlators* corr,
                               ib_measures* meas, const char** error);
/* out must hold ib_scan_size() values; failed points give NaN. */
IB_API ib_status ib_scan_values(const ib_scan* s, ib_field f, double* out);
IB_API ib_status ib_scan_derivative(const ib_scan* s, ib_field f, double* out);
/* Writes up to cap events; *count receives the number found. */
IB_API ib_status ib_scan_divergences(const ib_scan* s, ib_field f, double ratio,
                                     ib_transition* out, size_t cap, size_t* count);
IB_API ib_status ib_scan_jumps(const ib_scan* s, ib_field f, double ratio,
                               ib_transition* out, size_t cap, size_t* count);

/* Grids over (T, J1); threads == 0 uses the hardware concurrency. */
IB_API ib_status ib_contour_create(const ib_params* p, double t_lo, double t_hi,
                                   double t_step, double j1_lo, double j1_hi,
                                   double j1_step, unsigned threads, ib_contour** out);
IB_API void ib_contour_destroy(ib_contour* g);
IB_API ib_status ib_contour_shape(const ib_contour* g, size_t* n_t, size_t* n_j1);
IB_API ib_status ib_contour_cell(const ib_contour* g, size_t i_t, size_t i_j1, double* T,
                                 double* J1, ib_correlators* corr, ib_measures* meas,
                                 const char** error);

IB_API ib_status ib_isolines_create(const ib_contour* g, ib_field f, double level,
                                    ib_isolines** out);
IB_API void ib_isolines_destroy(ib_isolines* l);
IB_API size_t ib_isolines_size(const ib_isolines* l);
IB_API ib_status ib_isolines_segment(const ib_isolines* l, size_t i, ib_segment* out);

/* Oracle self-check; strings in items are owned by the report. */
IB_API ib_status ib_oracle_check(uint64_t seed, size_t samples, ib_check_report** out);
IB_API void ib_check_report_destroy(ib_check_report* r);
IB_API size_t ib_check_report_size(const ib_check_report* r);
IB_API int ib_check_report_passed(const ib_check_report* r);
IB_API ib_status ib_check_report_item(const ib_check_report* r, size_t i, ib_check_item* out);

#ifdef __cplusplus
}
#endif

#endif
