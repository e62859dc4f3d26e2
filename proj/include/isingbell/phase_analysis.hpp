#pragma once

// Scans over T or J1, finite-difference derivatives, transition detection
// and (T, J1) grids with iso-line extraction.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isingbell/decorated_model.hpp"

namespace isingbell {

enum class ScanAxis { T, J1 };

enum class Field { B, N1, N2, C, q_xx, q_zz, q_mumu, M_z, dS_z };

Field parse_field(std::string_view name);
std::string_view to_string(Field f);
ScanAxis parse_axis(std::string_view name);
std::string_view to_string(ScanAxis a);

/// One (T, J1) evaluation. Library errors are caught and stored in `error`
/// so that scans and grids keep going.
struct PointEvaluation {
  double T = 0.0;
  double J1 = 0.0;
  CorrelatorSet correlators;
  MeasureSet measures;
  std::string error;

  bool ok() const { return error.empty(); }
};

PointEvaluation evaluate_point(ModelParams p, double T);

/// NaN for failed points.
double field_value(const PointEvaluation& e, Field f);

struct ScanPoint {
  double x = 0.0;
  PointEvaluation eval;
};

struct ScanSeries {
  ScanAxis axis = ScanAxis::T;
  double fixed = 0.0;  // J1 for temperature scans, T for coupling scans
  ModelParams params;
  double step = 0.0;
  std::vector<ScanPoint> points;
  /// False for series assembled from raw values; detectors then skip the
  /// grid-refinement stage.
  bool refinable = true;

  std::vector<double> axis_values() const;
  std::vector<double> values(Field f) const;
};

/// Sample count of lo, lo + step, ... up to hi (inclusive, with a 1e-9 step
/// slack for rounding).
std::size_t grid_count(double lo, double hi, double step);

/// Points lo + i * step. `fixed` is J1 for axis T and T for axis J1;
/// p.J1 is ignored for temperature scans.
ScanSeries scan(const ModelParams& p, ScanAxis axis, double fixed, double lo,
                double hi, double step);

/// Series for detector tests or external data; not refinable.
ScanSeries synthetic_series(ScanAxis axis, const std::vector<double>& xs,
                            Field f, const std::vector<double>& ys);

/// Central differences inside, one-sided at the ends.
std::vector<double> derivative(const std::vector<double>& xs,
                               const std::vector<double>& ys);
std::vector<double> derivative(const ScanSeries& s, Field f);

struct Divergence {
  double location = 0.0;
  double uncertainty = 0.0;
  /// Peak |derivative| on the original grid and after each refinement.
  std::vector<double> peaks;
};

/// Number of successive 2x refinements in the growth test.
inline constexpr int kRefinementLevels = 3;

/// Candidates are local peaks of |dF/dx| above threshold_ratio times the
/// median. A candidate is kept when its peak keeps growing under every
/// refinement without the increments dying out, which separates log or
/// power-law divergences from finite jumps of the derivative.
std::vector<Divergence> detect_divergence(const ScanSeries& s, Field f,
                                          double threshold_ratio = 10.0);

struct Jump {
  double location = 0.0;
  double uncertainty = 0.0;
  double magnitude = 0.0;  // net change of the field across the jump
};

/// Clusters of increments larger than threshold_ratio times the local median
/// increment. Each cluster is re-sampled at half the step and must persist;
/// its location is the increment-weighted centroid.
std::vector<Jump> detect_sudden_change(const ScanSeries& s, Field f,
                                       double threshold_ratio = 10.0);

/// Crossing of the two Bell branches, N1 = N2, on [t_lo, t_hi]. This is a
/// non-physical kink from the max(), not a transition.
std::optional<double> detect_kink(const ModelParams& p, double t_lo,
                                  double t_hi, double tol = 1e-10);

Region classify_region(const ModelParams& p, double T);

enum class TransitionKind { critical, kink, qpt_jump };

std::string_view to_string(TransitionKind k);

struct TransitionEvent {
  TransitionKind kind = TransitionKind::critical;
  ScanAxis axis = ScanAxis::T;
  double location = 0.0;
  double uncertainty = 0.0;
};

/// Cells are stored row-major with T as the row index:
/// cells[i_t * n_j1 + i_j1].
struct ContourGrid {
  ModelParams params;
  double t_lo = 0.0;
  double t_step = 0.0;
  std::size_t n_t = 0;
  double j1_lo = 0.0;
  double j1_step = 0.0;
  std::size_t n_j1 = 0;
  std::vector<PointEvaluation> cells;

  const PointEvaluation& at(std::size_t i_t, std::size_t i_j1) const {
    return cells[i_t * n_j1 + i_j1];
  }
  double t_at(std::size_t i_t) const { return t_lo + double(i_t) * t_step; }
  double j1_at(std::size_t i_j1) const {
    return j1_lo + double(i_j1) * j1_step;
  }
};

/// threads == 0 picks the hardware concurrency. Results do not depend on
/// the thread count.
ContourGrid contour_grid(const ModelParams& p, double t_lo, double t_hi,
                         double t_step, double j1_lo, double j1_hi,
                         double j1_step, unsigned threads = 0);

struct IsoSegment {
  double j1_a = 0.0;
  double t_a = 0.0;
  double j1_b = 0.0;
  double t_b = 0.0;
};

/// Marching squares on the grid; squares with failed cells are skipped.
std::vector<IsoSegment> isolines(const ContourGrid& g, Field f, double level);

}  // namespace isingbell
