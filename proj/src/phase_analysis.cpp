#include "isingbell/phase_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "isingbell/error.hpp"

namespace isingbell {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Divergence test: every refinement must raise the peak, the last increment
// must be at least this fraction of the first, and the total growth must
// exceed kMinPeakGrowth. A finite derivative jump fails the second test
// because its increments shrink geometrically.
constexpr double kSustainedIncrement = 0.5;
constexpr double kMinPeakGrowth = 1.15;
// Half-width of the refinement window, in original grid steps.
constexpr int kRefineHalfWidth = 3;
// Half-width of the window for the local median increment, in samples.
constexpr std::ptrdiff_t kMedianWindow = 50;

double median(std::vector<double> v) {
  std::erase_if(v, [](double x) { return !std::isfinite(x); });
  if (v.empty()) return kNaN;
  const auto mid = v.begin() + std::ptrdiff_t(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

PointEvaluation evaluate_on_axis(const ScanSeries& s, double x) {
  ModelParams p = s.params;
  if (s.axis == ScanAxis::T) {
    p.J1 = s.fixed;
    return evaluate_point(p, x);
  }
  p.J1 = x;
  return evaluate_point(p, s.fixed);
}

// Field values on x0 + j h, j in [-n, n], clipped to positive T.
std::pair<std::vector<double>, std::vector<double>> resample(
    const ScanSeries& s, Field f, double x0, double h, int n) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (int j = -n; j <= n; ++j) {
    const double x = x0 + j * h;
    if (s.axis == ScanAxis::T && x <= 0.0) continue;
    xs.push_back(x);
    ys.push_back(field_value(evaluate_on_axis(s, x), f));
  }
  return {xs, ys};
}

void require_range(double lo, double hi, double step, const char* where,
                   bool allow_single) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) ||
      !(step > 0.0) || (allow_single ? hi < lo : !(lo < hi))) {
    std::ostringstream os;
    os << where << ": invalid range lo=" << lo << " hi=" << hi
       << " step=" << step;
    fail(ErrorKind::invalid_argument, os.str());
  }
}

}  // namespace

Field parse_field(std::string_view name) {
  static constexpr std::pair<std::string_view, Field> table[] = {
      {"B", Field::B},         {"N1", Field::N1},     {"N2", Field::N2},
      {"C", Field::C},         {"q_xx", Field::q_xx}, {"q_zz", Field::q_zz},
      {"q_mumu", Field::q_mumu}, {"M_z", Field::M_z}, {"dS_z", Field::dS_z}};
  for (auto [n, f] : table)
    if (n == name) return f;
  fail(ErrorKind::invalid_argument, "unknown field '" + std::string(name) + "'");
}

std::string_view to_string(Field f) {
  switch (f) {
    case Field::B: return "B";
    case Field::N1: return "N1";
    case Field::N2: return "N2";
    case Field::C: return "C";
    case Field::q_xx: return "q_xx";
    case Field::q_zz: return "q_zz";
    case Field::q_mumu: return "q_mumu";
    case Field::M_z: return "M_z";
    case Field::dS_z: return "dS_z";
  }
  return "?";
}

ScanAxis parse_axis(std::string_view name) {
  if (name == "T" || name == "t") return ScanAxis::T;
  if (name == "J1" || name == "j1") return ScanAxis::J1;
  fail(ErrorKind::invalid_argument, "unknown axis '" + std::string(name) + "'");
}

std::string_view to_string(ScanAxis a) { return a == ScanAxis::T ? "T" : "J1"; }

std::string_view to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::critical: return "CRITICAL";
    case TransitionKind::kink: return "KINK";
    case TransitionKind::qpt_jump: return "QPT-JUMP";
  }
  return "?";
}

PointEvaluation evaluate_point(ModelParams p, double T) {
  PointEvaluation e;
  e.T = T;
  e.J1 = p.J1;
  try {
    e.correlators = correlators(p, T);
    e.measures = measures_from(p, e.correlators);
  } catch (const Error& err) {
    e.error = err.what();
  }
  return e;
}

double field_value(const PointEvaluation& e, Field f) {
  if (!e.ok()) return kNaN;
  switch (f) {
    case Field::B: return e.measures.B;
    case Field::N1: return e.measures.N1;
    case Field::N2: return e.measures.N2;
    case Field::C: return e.measures.C;
    case Field::q_xx: return e.correlators.q_xx;
    case Field::q_zz: return e.correlators.q_zz;
    case Field::q_mumu: return e.correlators.q_mumu;
    case Field::M_z: return e.correlators.m_z;
    case Field::dS_z: return e.correlators.ds_z;
  }
  return kNaN;
}

std::vector<double> ScanSeries::axis_values() const {
  std::vector<double> xs;
  xs.reserve(points.size());
  for (const auto& pt : points) xs.push_back(pt.x);
  return xs;
}

std::vector<double> ScanSeries::values(Field f) const {
  std::vector<double> ys;
  ys.reserve(points.size());
  for (const auto& pt : points) ys.push_back(field_value(pt.eval, f));
  return ys;
}

std::size_t grid_count(double lo, double hi, double step) {
  require_range(lo, hi, step, "grid_count", true);
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

ScanSeries scan(const ModelParams& p, ScanAxis axis, double fixed, double lo,
                double hi, double step) {
  require_range(lo, hi, step, "scan", false);
  if (axis == ScanAxis::T && !(lo > 0.0))
    fail(ErrorKind::invalid_argument, "scan: temperature axis must start above 0");
  if (axis == ScanAxis::J1 && !(fixed > 0.0))
    fail(ErrorKind::invalid_argument, "scan: fixed temperature must be positive");
  ScanSeries s;
  s.axis = axis;
  s.fixed = fixed;
  s.params = p;
  s.step = step;
  const std::size_t n = grid_count(lo, hi, step);
  s.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.points[i].x = lo + double(i) * step;
    s.points[i].eval = evaluate_on_axis(s, s.points[i].x);
  }
  return s;
}

ScanSeries synthetic_series(ScanAxis axis, const std::vector<double>& xs,
                            Field f, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    fail(ErrorKind::invalid_argument,
         "synthetic_series: need matching axis and value arrays");
  ScanSeries s;
  s.axis = axis;
  s.step = xs[1] - xs[0];
  s.refinable = false;
  s.points.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s.points[i].x = xs[i];
    auto& e = s.points[i].eval;
    switch (f) {
      case Field::B: e.measures.B = ys[i]; break;
      case Field::N1: e.measures.N1 = ys[i]; break;
      case Field::N2: e.measures.N2 = ys[i]; break;
      case Field::C: e.measures.C = ys[i]; break;
      case Field::q_xx: e.correlators.q_xx = ys[i]; break;
      case Field::q_zz: e.correlators.q_zz = ys[i]; break;
      case Field::q_mumu: e.correlators.q_mumu = ys[i]; break;
      case Field::M_z: e.correlators.m_z = ys[i]; break;
      case Field::dS_z: e.correlators.ds_z = ys[i]; break;
    }
  }
  return s;
}

std::vector<double> derivative(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 3 || ys.size() != n)
    fail(ErrorKind::invalid_argument, "derivative: need at least 3 points");
  std::vector<double> d(n);
  d[0] = (ys[1] - ys[0]) / (xs[1] - xs[0]);
  d[n - 1] = (ys[n - 1] - ys[n - 2]) / (xs[n - 1] - xs[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = (ys[i + 1] - ys[i - 1]) / (xs[i + 1] - xs[i - 1]);
  return d;
}

std::vector<double> derivative(const ScanSeries& s, Field f) {
  return derivative(s.axis_values(), s.values(f));
}

std::vector<Divergence> detect_divergence(const ScanSeries& s, Field f,
                                          double threshold_ratio) {
  if (s.points.size() < 3) return {};
  const auto xs = s.axis_values();
  const auto d = derivative(xs, s.values(f));
  std::vector<double> a(d.size());
  std::transform(d.begin(), d.end(), a.begin(),
                 [](double v) { return std::abs(v); });
  double amax = 0.0;
  for (double v : a)
    if (std::isfinite(v)) amax = std::max(amax, v);
  if (!(amax > 0.0)) return {};
  const double threshold = threshold_ratio * median(a);

  std::vector<Divergence> out;
  std::size_t i = 0;
  while (i < a.size()) {
    if (!(a[i] > threshold)) {
      ++i;
      continue;
    }
    std::size_t peak = i;
    while (i < a.size() && a[i] > threshold) {
      if (a[i] > a[peak]) peak = i;
      ++i;
    }

    Divergence div;
    div.location = xs[peak];
    div.uncertainty = s.step;
    div.peaks.push_back(a[peak]);
    if (!s.refinable) {
      out.push_back(div);
      continue;
    }
    for (int r = 1; r <= kRefinementLevels; ++r) {
      const double h = s.step / double(1 << r);
      const int n = kRefineHalfWidth * (1 << r);
      auto [rx, ry] = resample(s, f, xs[peak], h, n);
      if (rx.size() < 3) break;
      const auto rd = derivative(rx, ry);
      double best = -1.0;
      for (std::size_t k = 1; k + 1 < rd.size(); ++k) {
        if (std::isfinite(rd[k]) && std::abs(rd[k]) > best) {
          best = std::abs(rd[k]);
          div.location = rx[k];
        }
      }
      div.peaks.push_back(best);
      div.uncertainty = h;
    }
    if (div.peaks.size() != kRefinementLevels + 1) continue;
    bool rising = true;
    for (int r = 1; r <= kRefinementLevels; ++r)
      rising = rising && div.peaks[r] > div.peaks[r - 1];
    const double first = div.peaks[1] - div.peaks[0];
    const double last = div.peaks[kRefinementLevels] - div.peaks[kRefinementLevels - 1];
    if (rising && last >= kSustainedIncrement * first &&
        div.peaks.back() >= kMinPeakGrowth * div.peaks.front())
      out.push_back(div);
  }
  return out;
}

std::vector<Jump> detect_sudden_change(const ScanSeries& s, Field f,
                                       double threshold_ratio) {
  const std::size_t n = s.points.size();
  if (n < 2) return {};
  const auto xs = s.axis_values();
  const auto ys = s.values(f);
  double ymax = 0.0;
  for (double y : ys)
    if (std::isfinite(y)) ymax = std::max(ymax, std::abs(y));
  const double floor = 1e-8 * std::max(1.0, ymax);

  const std::size_t m = n - 1;
  std::vector<double> inc(m);
  for (std::size_t i = 0; i < m; ++i) inc[i] = std::abs(ys[i + 1] - ys[i]);

  std::vector<double> local_median(m);
  std::vector<char> flagged(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, std::ptrdiff_t(i) - kMedianWindow);
    const auto hi = std::min<std::ptrdiff_t>(std::ptrdiff_t(m),
                                             std::ptrdiff_t(i) + kMedianWindow + 1);
    local_median[i] = median({inc.begin() + lo, inc.begin() + hi});
    flagged[i] = std::isfinite(inc[i]) && inc[i] > floor &&
                 inc[i] > threshold_ratio * local_median[i];
  }

  std::vector<Jump> out;
  std::size_t i = 0;
  while (i < m) {
    if (!flagged[i]) {
      ++i;
      continue;
    }
    // Merge flags separated by gaps of at most two increments.
    std::size_t first = i;
    std::size_t last = i;
    std::size_t gap = 0;
    for (++i; i < m && gap <= 2; ++i) {
      if (flagged[i]) {
        last = i;
        gap = 0;
      } else {
        ++gap;
      }
    }
    i = last + 1;

    double reference = 0.0;
    double wsum = 0.0;
    double xsum = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
      reference = std::max(reference, threshold_ratio * local_median[k]);
      wsum += inc[k];
      xsum += inc[k] * 0.5 * (xs[k] + xs[k + 1]);
    }
    Jump jump;
    jump.location = xsum / wsum;
    jump.uncertainty = s.step;
    jump.magnitude = ys[last + 1] - ys[first];

    if (s.refinable) {
      const double h = 0.5 * s.step;
      const double center = 0.5 * (xs[first] + xs[last + 1]);
      const int half = int(std::ceil((xs[last + 1] - xs[first]) / h / 2.0)) + 2;
      auto [rx, ry] = resample(s, f, center, h, half);
      double rmax = 0.0;
      double rw = 0.0;
      double rxw = 0.0;
      for (std::size_t k = 0; k + 1 < rx.size(); ++k) {
        const double dv = std::abs(ry[k + 1] - ry[k]);
        if (!std::isfinite(dv)) continue;
        rmax = std::max(rmax, dv);
        if (dv > floor) {
          rw += dv;
          rxw += dv * 0.5 * (rx[k] + rx[k + 1]);
        }
      }
      if (!(rmax > std::max(reference, floor))) continue;
      jump.location = rxw / rw;
      jump.uncertainty = h;
    }
    out.push_back(jump);
  }
  return out;
}

std::optional<double> detect_kink(const ModelParams& p, double t_lo,
                                  double t_hi, double tol) {
  if (!(t_lo > 0.0) || !(t_lo < t_hi))
    fail(ErrorKind::invalid_argument, "detect_kink: need 0 < t_lo < t_hi");
  auto gap = [&](double T) {
    const MeasureSet m = measures(p, T);
    return m.N1 - m.N2;
  };
  constexpr int kSamples = 400;
  double prev_t = t_lo;
  double prev_g = gap(t_lo);
  for (int i = 1; i <= kSamples; ++i) {
    const double t = t_lo + (t_hi - t_lo) * double(i) / kSamples;
    const double g = gap(t);
    if ((prev_g > 0.0) != (g > 0.0)) {
      double a = prev_t;
      double b = t;
      const bool a_positive = prev_g > 0.0;
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        ((gap(mid) > 0.0) == a_positive ? a : b) = mid;
      }
      return 0.5 * (a + b);
    }
    prev_t = t;
    prev_g = g;
  }
  return std::nullopt;
}

Region classify_region(const ModelParams& p, double T) {
  return measures(p, T).region;
}

ContourGrid contour_grid(const ModelParams& p, double t_lo, double t_hi,
                         double t_step, double j1_lo, double j1_hi,
                         double j1_step, unsigned threads) {
  require_range(t_lo, t_hi, t_step, "contour_grid (T)", true);
  require_range(j1_lo, j1_hi, j1_step, "contour_grid (J1)", true);
  if (!(t_lo > 0.0))
    fail(ErrorKind::invalid_argument, "contour_grid: temperatures must be positive");
  ContourGrid g;
  g.params = p;
  g.t_lo = t_lo;
  g.t_step = t_step;
  g.n_t = grid_count(t_lo, t_hi, t_step);
  g.j1_lo = j1_lo;
  g.j1_step = j1_step;
  g.n_j1 = grid_count(j1_lo, j1_hi, j1_step);
  g.cells.resize(g.n_t * g.n_j1);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, unsigned(g.n_t));
  auto work = [&g](unsigned first_row, unsigned stride) {
    for (std::size_t it = first_row; it < g.n_t; it += stride) {
      for (std::size_t ij = 0; ij < g.n_j1; ++ij) {
        ModelParams q = g.params;
        q.J1 = g.j1_at(ij);
        g.cells[it * g.n_j1 + ij] = evaluate_point(q, g.t_at(it));
      }
    }
  };
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }
  return g;
}

std::vector<IsoSegment> isolines(const ContourGrid& g, Field f, double level) {
  std::vector<IsoSegment> out;
  if (g.n_t < 2 || g.n_j1 < 2) return out;
  struct Pt {
    double j1, t;
  };
  for (std::size_t it = 0; it + 1 < g.n_t; ++it) {
    for (std::size_t ij = 0; ij + 1 < g.n_j1; ++ij) {
      // Corners: 00 = (t_i, j_k), 01 = (t_i, j_k+1), 10 = (t_i+1, j_k),
      // 11 = (t_i+1, j_k+1).
      const double v00 = field_value(g.at(it, ij), f);
      const double v01 = field_value(g.at(it, ij + 1), f);
      const double v10 = field_value(g.at(it + 1, ij), f);
      const double v11 = field_value(g.at(it + 1, ij + 1), f);
      if (!std::isfinite(v00) || !std::isfinite(v01) || !std::isfinite(v10) ||
          !std::isfinite(v11))
        continue;
      const double t0 = g.t_at(it), t1 = g.t_at(it + 1);
      const double j0 = g.j1_at(ij), j1 = g.j1_at(ij + 1);
      auto above = [level](double v) { return v > level; };
      auto cut = [level](double va, double vb) { return (level - va) / (vb - va); };

      // Edge order: bottom (00-01), right (01-11), top (10-11), left (00-10).
      std::optional<Pt> edge[4];
      if (above(v00) != above(v01))
        edge[0] = Pt{j0 + cut(v00, v01) * (j1 - j0), t0};
      if (above(v01) != above(v11))
        edge[1] = Pt{j1, t0 + cut(v01, v11) * (t1 - t0)};
      if (above(v10) != above(v11))
        edge[2] = Pt{j0 + cut(v10, v11) * (j1 - j0), t1};
      if (above(v00) != above(v10))
        edge[3] = Pt{j0, t0 + cut(v00, v10) * (t1 - t0)};

      auto emit = [&out](const Pt& a, const Pt& b) {
        out.push_back({a.j1, a.t, b.j1, b.t});
      };
      const int count = int(edge[0].has_value()) + int(edge[1].has_value()) +
                        int(edge[2].has_value()) + int(edge[3].has_value());
      if (count == 2) {
        const Pt* pts[2];
        int k = 0;
        for (auto& e : edge)
          if (e) pts[k++] = &*e;
        emit(*pts[0], *pts[1]);
      } else if (count == 4) {
        // Saddle: resolve with the square's mean value.
        const bool center = above(0.25 * (v00 + v01 + v10 + v11));
        if (center == above(v00)) {
          emit(*edge[0], *edge[1]);
          emit(*edge[2], *edge[3]);
        } else {
          emit(*edge[0], *edge[3]);
          emit(*edge[1], *edge[2]);
        }
      }
    }
  }
  return out;
}

}  // namespace isingbell
