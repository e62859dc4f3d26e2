// isingbell-cli: point evaluations, scans, grids, transition finding,
// region boundaries and the oracle self-check, over the C interface.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isingbell/isingbell.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheckFailed = 4;

constexpr const char* kOutputDirEnv = "ISINGBELL_OUTPUT_DIR";
constexpr std::uint64_t kDefaultSeed = 20240917;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LibraryError : std::runtime_error {
  LibraryError(ib_status s, const std::string& what)
      : std::runtime_error(what), status(s) {}
  ib_status status;
};

void check(ib_status s) {
  if (s != IB_OK) throw LibraryError(s, ib_last_error_message());
}

int exit_code_for(ib_status s) {
  return s == IB_ERR_INVALID_ARGUMENT ? kExitConfig : kExitNumerical;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v))
    throw ConfigError("--" + key + ": '" + text + "' is not a finite number");
  return v;
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& text) {
  Int v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ConfigError("--" + key + ": '" + text + "' is not a non-negative integer");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Scalar or lo:hi:step.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  bool scalar = true;

  std::string text() const {
    return scalar ? fmt(lo) : fmt(lo) + ":" + fmt(hi) + ":" + fmt(step);
  }
};

Range parse_range(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(trim(item));
  if (parts.size() == 1) {
    const double v = parse_number(key, parts[0]);
    return {v, v, 0.0, true};
  }
  if (parts.size() != 3)
    throw ConfigError("--" + key + ": expected a number or lo:hi:step, got '" + text + "'");
  Range r{parse_number(key, parts[0]), parse_number(key, parts[1]),
          parse_number(key, parts[2]), false};
  if (!(r.step > 0.0)) throw ConfigError("--" + key + ": step must be positive");
  if (r.hi < r.lo) throw ConfigError("--" + key + ": hi must not be below lo");
  return r;
}

const std::vector<std::string> kKeys = {
    "j",      "delta", "j1",   "t",       "axis",    "from",        "to",    "step",
    "format", "out",   "seed", "samples", "threads", "derivatives", "tol"};

using Settings = std::map<std::string, std::string>;

Settings read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Settings s;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    s[key] = trim(line.substr(eq + 1));
  }
  return s;
}

struct RunConfig {
  std::string command;
  double J = 1.0;
  double Delta = 2.0;
  std::optional<Range> j1;
  std::optional<Range> t;
  std::optional<std::string> axis;
  std::optional<double> from;
  std::optional<double> to;
  double step = 1e-3;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 10000;
  unsigned threads = 0;
  double tol = 1e-10;
  bool derivatives = false;

  ib_params params(double j1_value) const { return {J, Delta, j1_value}; }
  bool json() const { return format == "json"; }
};

RunConfig build_config(const std::string& command, const Settings& s) {
  RunConfig c;
  c.command = command;
  auto get = [&](const char* k) -> const std::string* {
    auto it = s.find(k);
    return it == s.end() ? nullptr : &it->second;
  };
  if (auto v = get("j")) c.J = parse_number("j", *v);
  if (auto v = get("delta")) c.Delta = parse_number("delta", *v);
  if (auto v = get("j1")) c.j1 = parse_range("j1", *v);
  if (auto v = get("t")) c.t = parse_range("t", *v);
  if (auto v = get("axis")) {
    std::string a = *v;
    for (auto& ch : a) ch = char(std::tolower(static_cast<unsigned char>(ch)));
    if (a != "t" && a != "j1") throw ConfigError("--axis must be T or J1");
    c.axis = a;
  }
  if (auto v = get("from")) c.from = parse_number("from", *v);
  if (auto v = get("to")) c.to = parse_number("to", *v);
  if (auto v = get("step")) {
    c.step = parse_number("step", *v);
    if (!(c.step > 0.0)) throw ConfigError("--step must be positive");
  }
  if (auto v = get("format")) {
    if (*v != "csv" && *v != "json") throw ConfigError("--format must be csv or json");
    c.format = *v;
  }
  if (auto v = get("out")) c.out = *v;
  if (auto v = get("seed")) c.seed = parse_integer<std::uint64_t>("seed", *v);
  if (auto v = get("samples")) c.samples = parse_integer<std::size_t>("samples", *v);
  if (auto v = get("threads")) c.threads = parse_integer<unsigned>("threads", *v);
  if (auto v = get("tol")) {
    c.tol = parse_number("tol", *v);
    if (!(c.tol > 0.0)) throw ConfigError("--tol must be positive");
  }
  if (auto v = get("derivatives"))
    c.derivatives = *v == "true" || *v == "1" || *v == "yes" || *v == "on";
  if (c.t && c.t->lo < 0.0) throw ConfigError("--t must not be negative");
  return c;
}

double scalar_or(const std::optional<Range>& r, const char* key, std::optional<double> def) {
  if (!r) {
    if (def) return *def;
    throw ConfigError(std::string("--") + key + " is required");
  }
  if (!r->scalar) throw ConfigError(std::string("--") + key + " must be a scalar here");
  return r->lo;
}

json metadata(const RunConfig& c) {
  json m;
  m["tool"] = "isingbell-cli";
  m["version"] = ib_version();
  m["command"] = c.command;
  json p;
  p["J"] = c.J;
  p["Delta"] = c.Delta;
  auto range_json = [](const Range& r) -> json {
    if (r.scalar) return r.lo;
    return {{"lo", r.lo}, {"hi", r.hi}, {"step", r.step}};
  };
  if (c.j1) p["J1"] = range_json(*c.j1);
  if (c.t) p["T"] = range_json(*c.t);
  if (c.axis) {
    p["axis"] = *c.axis == "t" ? "T" : "J1";
    if (c.from) p["from"] = *c.from;
    if (c.to) p["to"] = *c.to;
    p["step"] = c.step;
  }
  m["parameters"] = p;
  m["seed"] = c.seed;
  return m;
}

/// Output target: --out (relative paths resolve against $ISINGBELL_OUTPUT_DIR)
/// or stdout.
void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::filesystem::path path(c.out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir)
      path = std::filesystem::path(dir) / path;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

void emit_json(const RunConfig& c, const json& doc) { emit(c, doc.dump(2) + "\n"); }

// Unified correlator/measure columns.
const std::vector<std::string> kPointColumns = {"B",    "N1",   "N2",     "C",   "region",
                                                "q_xx", "q_zz", "q_mumu", "M_z", "dS_z",
                                                "K_eff"};

std::vector<std::string> point_cells(const ib_correlators& c, const ib_measures& m) {
  return {fmt(m.B),      fmt(m.N1),     fmt(m.N2),       fmt(m.C),
          ib_region_name(m.region), fmt(c.q_xx), fmt(c.q_zz), fmt(c.q_mumu),
          fmt(c.m_z),    fmt(c.ds_z),   fmt(c.k_eff)};
}

std::vector<std::string> failed_cells() {
  std::vector<std::string> v(kPointColumns.size(), "nan");
  v[4] = "";
  return v;
}

json point_json(const ib_correlators& c, const ib_measures& m) {
  json j;
  j["B"] = m.B;
  j["N1"] = m.N1;
  j["N2"] = m.N2;
  j["C"] = m.C;
  j["region"] = ib_region_name(m.region);
  j["q_xx"] = c.q_xx;
  j["q_zz"] = c.q_zz;
  j["q_mumu"] = c.q_mumu;
  j["M_z"] = c.m_z;
  j["dS_z"] = c.ds_z;
  j["K_eff"] = c.k_eff;
  j["near_critical"] = bool(c.near_critical);
  j["below_validated_temperature"] = bool(c.below_validated_temperature);
  return j;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  return row + "\n";
}

struct Event {
  ib_transition_kind kind;
  ib_axis axis;
  double location;
  double uncertainty;
};

std::string event_line(const Event& e) {
  return std::string(ib_transition_name(e.kind)) + " " +
         (e.axis == IB_AXIS_T ? "T=" : "J1=") + fmt(e.location) + " ±" +
         fmt(e.uncertainty);
}

json events_json(const std::vector<Event>& events) {
  json arr = json::array();
  for (const auto& e : events) {
    json j;
    j["kind"] = ib_transition_name(e.kind);
    j["axis"] = e.axis == IB_AXIS_T ? "T" : "J1";
    j["location"] = e.location;
    j["uncertainty"] = e.uncertainty;
    arr.push_back(j);
  }
  return arr;
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ScanPtr = std::unique_ptr<ib_scan, Deleter<ib_scan, ib_scan_destroy>>;
using ContourPtr = std::unique_ptr<ib_contour, Deleter<ib_contour, ib_contour_destroy>>;
using IsolinesPtr = std::unique_ptr<ib_isolines, Deleter<ib_isolines, ib_isolines_destroy>>;
using ReportPtr =
    std::unique_ptr<ib_check_report, Deleter<ib_check_report, ib_check_report_destroy>>;

std::vector<Event> scan_events(const ib_scan* s, ib_axis axis) {
  std::vector<Event> events;
  auto collect = [&](auto fn) {
    size_t count = 0;
    check(fn(nullptr, 0, &count));
    std::vector<ib_transition> buf(count);
    check(fn(buf.data(), buf.size(), &count));
    for (const auto& t : buf) events.push_back({t.kind, t.axis, t.location, t.uncertainty});
  };
  collect([&](ib_transition* out, size_t cap, size_t* n) {
    return ib_scan_divergences(s, IB_FIELD_B, 10.0, out, cap, n);
  });
  if (axis == IB_AXIS_J1) {
    collect([&](ib_transition* out, size_t cap, size_t* n) {
      return ib_scan_jumps(s, IB_FIELD_B, 10.0, out, cap, n);
    });
  }
  return events;
}

// ---- subcommands ----------------------------------------------------------

int cmd_measures(const RunConfig& c) {
  const double j1 = scalar_or(c.j1, "j1", 0.0);
  const double t = scalar_or(c.t, "t", std::nullopt);
  const ib_params p = c.params(j1);
  ib_correlators corr{};
  ib_measures meas{};
  check(t == 0.0 ? ib_zero_temperature_limits(&p, &corr, &meas)
                 : ib_evaluate(&p, t, &corr, &meas));
  if (c.json()) {
    json doc;
    doc["metadata"] = metadata(c);
    json r;
    r["T"] = t;
    r["J1"] = j1;
    r.update(point_json(corr, meas));
    doc["result"] = r;
    emit_json(c, doc);
  } else {
    std::vector<std::string> header{"T", "J1"};
    header.insert(header.end(), kPointColumns.begin(), kPointColumns.end());
    std::vector<std::string> row{fmt(t), fmt(j1)};
    const auto cells = point_cells(corr, meas);
    row.insert(row.end(), cells.begin(), cells.end());
    emit(c, join_row(header) + join_row(row));
  }
  return kExitOk;
}

struct ScanSpec {
  ib_axis axis;
  double fixed;
  double lo;
  double hi;
  double step;
};

ScanSpec scan_spec(const RunConfig& c) {
  const bool t_range = c.t && !c.t->scalar;
  const bool j1_range = c.j1 && !c.j1->scalar;
  if (c.axis && !c.from && !c.to) {
    // --axis t --t lo:hi:step is the same request as --t lo:hi:step.
    if ((*c.axis == "t" && !t_range) || (*c.axis == "j1" && !j1_range))
      throw ConfigError("--axis needs --from and --to, or a lo:hi:step range on that axis");
  } else if (c.axis) {
    if (!c.from || !c.to) throw ConfigError("--axis needs --from and --to");
    if (*c.to <= *c.from) throw ConfigError("--to must exceed --from");
    if (*c.axis == "t") {
      if (*c.from <= 0.0) throw ConfigError("temperature scans must start above 0");
      return {IB_AXIS_T, scalar_or(c.j1, "j1", 0.0), *c.from, *c.to, c.step};
    }
    const double t = scalar_or(c.t, "t", std::nullopt);
    if (t <= 0.0) throw ConfigError("--t must be positive for a J1 scan");
    return {IB_AXIS_J1, t, *c.from, *c.to, c.step};
  }
  if (t_range && j1_range) throw ConfigError("scan takes one range; use contour for two");
  if (t_range) {
    if (c.t->lo <= 0.0) throw ConfigError("temperature scans must start above 0");
    if (c.t->hi <= c.t->lo) throw ConfigError("--t range is empty");
    return {IB_AXIS_T, scalar_or(c.j1, "j1", 0.0), c.t->lo, c.t->hi, c.t->step};
  }
  if (j1_range) {
    if (c.j1->hi <= c.j1->lo) throw ConfigError("--j1 range is empty");
    const double t = scalar_or(c.t, "t", std::nullopt);
    if (t <= 0.0) throw ConfigError("--t must be positive for a J1 scan");
    return {IB_AXIS_J1, t, c.j1->lo, c.j1->hi, c.j1->step};
  }
  throw ConfigError("scan needs --axis with --from/--to, or a lo:hi:step range for --t or --j1");
}

int cmd_scan(const RunConfig& c) {
  const ScanSpec spec = scan_spec(c);
  const ib_params p = c.params(spec.axis == IB_AXIS_T ? spec.fixed : 0.0);
  ib_scan* raw = nullptr;
  check(ib_scan_create(&p, spec.axis, spec.fixed, spec.lo, spec.hi, spec.step, &raw));
  ScanPtr s(raw);
  const size_t n = ib_scan_size(s.get());
  if (c.derivatives && n < 3) throw ConfigError("derivative columns need at least 3 points");

  const ib_field deriv_fields[] = {IB_FIELD_B, IB_FIELD_N1, IB_FIELD_N2, IB_FIELD_C};
  std::vector<std::vector<double>> derivs;
  if (c.derivatives) {
    for (ib_field f : deriv_fields) {
      derivs.emplace_back(n);
      check(ib_scan_derivative(s.get(), f, derivs.back().data()));
    }
  }

  std::vector<Event> events = scan_events(s.get(), spec.axis);
  if (spec.axis == IB_AXIS_T) {
    double kink = 0.0;
    int found = 0;
    check(ib_detect_kink(&p, spec.lo, spec.hi, c.tol, &kink, &found));
    if (found) events.push_back({IB_TRANSITION_KINK, IB_AXIS_T, kink, c.tol});
  }

  const std::string axis_name = spec.axis == IB_AXIS_T ? "T" : "J1";
  std::vector<std::string> failures;
  if (c.json()) {
    json doc;
    doc["metadata"] = metadata(c);
    json rows = json::array();
    for (size_t i = 0; i < n; ++i) {
      double x = 0.0;
      ib_correlators corr{};
      ib_measures meas{};
      const char* err = nullptr;
      check(ib_scan_point(s.get(), i, &x, &corr, &meas, &err));
      json r;
      r[axis_name] = x;
      if (err) {
        r["error"] = err;
        failures.push_back(axis_name + "=" + fmt(x) + ": " + err);
      } else {
        r.update(point_json(corr, meas));
      }
      for (size_t k = 0; k < derivs.size(); ++k)
        r[std::string("d") + ib_field_name(deriv_fields[k]) + "/d" + axis_name] = derivs[k][i];
      rows.push_back(r);
    }
    doc["points"] = rows;
    doc["transitions"] = events_json(events);
    emit_json(c, doc);
  } else {
    std::vector<std::string> header{axis_name};
    header.insert(header.end(), kPointColumns.begin(), kPointColumns.end());
    for (ib_field f : deriv_fields)
      if (c.derivatives) header.push_back(std::string("d") + ib_field_name(f) + "/d" + axis_name);
    header.push_back("ok");
    std::string text = join_row(header);
    for (size_t i = 0; i < n; ++i) {
      double x = 0.0;
      ib_correlators corr{};
      ib_measures meas{};
      const char* err = nullptr;
      check(ib_scan_point(s.get(), i, &x, &corr, &meas, &err));
      std::vector<std::string> row{fmt(x)};
      const auto cells = err ? failed_cells() : point_cells(corr, meas);
      row.insert(row.end(), cells.begin(), cells.end());
      for (const auto& d : derivs) row.push_back(fmt(d[i]));
      row.push_back(err ? "0" : "1");
      if (err) failures.push_back(axis_name + "=" + fmt(x) + ": " + err);
      text += join_row(row);
    }
    emit(c, text);
    for (const auto& e : events) std::cerr << event_line(e) << "\n";
  }
  for (const auto& f : failures) std::cerr << "warning: " << f << "\n";
  return kExitOk;
}

int cmd_contour(const RunConfig& c) {
  if (!c.t || c.t->scalar || !c.j1 || c.j1->scalar)
    throw ConfigError("contour needs lo:hi:step ranges for both --t and --j1");
  if (c.t->lo <= 0.0) throw ConfigError("contour temperatures must be positive");
  const ib_params p = c.params(0.0);
  ib_contour* raw = nullptr;
  check(ib_contour_create(&p, c.t->lo, c.t->hi, c.t->step, c.j1->lo, c.j1->hi, c.j1->step,
                          c.threads, &raw));
  ContourPtr g(raw);
  size_t n_t = 0, n_j1 = 0;
  check(ib_contour_shape(g.get(), &n_t, &n_j1));

  if (c.json()) {
    json doc;
    doc["metadata"] = metadata(c);
    json grid;
    grid["T"] = {{"lo", c.t->lo}, {"hi", c.t->hi}, {"step", c.t->step}, {"count", n_t}};
    grid["J1"] = {{"lo", c.j1->lo}, {"hi", c.j1->hi}, {"step", c.j1->step}, {"count", n_j1}};
    grid["order"] = "row-major, T outer";
    doc["grid"] = grid;
    json cells = json::array();
    for (size_t it = 0; it < n_t; ++it) {
      for (size_t ij = 0; ij < n_j1; ++ij) {
        double t = 0.0, j1 = 0.0;
        ib_correlators corr{};
        ib_measures meas{};
        const char* err = nullptr;
        check(ib_contour_cell(g.get(), it, ij, &t, &j1, &corr, &meas, &err));
        json r;
        r["T"] = t;
        r["J1"] = j1;
        if (err)
          r["error"] = err;
        else
          r.update(point_json(corr, meas));
        cells.push_back(r);
      }
    }
    doc["cells"] = cells;
    emit_json(c, doc);
    return kExitOk;
  }

  std::string text = "# J=" + fmt(c.J) + " Delta=" + fmt(c.Delta) + " T=" + c.t->text() +
                     " (" + std::to_string(n_t) + " rows) J1=" + c.j1->text() + " (" +
                     std::to_string(n_j1) + " columns)\n";
  std::vector<std::string> header{"T", "J1"};
  header.insert(header.end(), kPointColumns.begin(), kPointColumns.end());
  header.push_back("ok");
  text += join_row(header);
  for (size_t it = 0; it < n_t; ++it) {
    for (size_t ij = 0; ij < n_j1; ++ij) {
      double t = 0.0, j1 = 0.0;
      ib_correlators corr{};
      ib_measures meas{};
      const char* err = nullptr;
      check(ib_contour_cell(g.get(), it, ij, &t, &j1, &corr, &meas, &err));
      std::vector<std::string> row{fmt(t), fmt(j1)};
      const auto cells = err ? failed_cells() : point_cells(corr, meas);
      row.insert(row.end(), cells.begin(), cells.end());
      row.push_back(err ? "0" : "1");
      text += join_row(row);
    }
  }
  emit(c, text);
  return kExitOk;
}

int cmd_critical(const RunConfig& c) {
  std::vector<Event> events;
  if (c.j1 && !c.j1->scalar) {
    const double t = scalar_or(c.t, "t", std::nullopt);
    if (t <= 0.0) throw ConfigError("--t must be positive for a J1 sweep");
    if (c.j1->hi <= c.j1->lo) throw ConfigError("--j1 range is empty");
    const ib_params p = c.params(0.0);
    ib_scan* raw = nullptr;
    check(ib_scan_create(&p, IB_AXIS_J1, t, c.j1->lo, c.j1->hi, c.j1->step, &raw));
    ScanPtr s(raw);
    events = scan_events(s.get(), IB_AXIS_J1);
  } else {
    const double j1 = scalar_or(c.j1, "j1", std::nullopt);
    double lo = 1e-3, hi = 1.0;
    if (c.t) {
      if (c.t->scalar) throw ConfigError("--t for critical is a lo:hi:step kink window");
      lo = c.t->lo;
      hi = c.t->hi;
      if (lo <= 0.0 || hi <= lo) throw ConfigError("kink window must satisfy 0 < lo < hi");
    }
    const ib_params p = c.params(j1);
    double tc = 0.0;
    int found = 0;
    check(ib_critical_temperature(&p, c.tol, &tc, &found));
    if (found) events.push_back({IB_TRANSITION_CRITICAL, IB_AXIS_T, tc, c.tol});
    double t0 = 0.0;
    check(ib_detect_kink(&p, lo, hi, c.tol, &t0, &found));
    if (found) events.push_back({IB_TRANSITION_KINK, IB_AXIS_T, t0, c.tol});
  }
  if (c.json()) {
    json doc;
    doc["metadata"] = metadata(c);
    doc["transitions"] = events_json(events);
    emit_json(c, doc);
  } else {
    std::string text;
    for (const auto& e : events) text += event_line(e) + "\n";
    if (events.empty()) std::cerr << "no transitions found\n";
    emit(c, text);
  }
  return kExitOk;
}

int cmd_classify(const RunConfig& c) {
  const bool grid = c.t && !c.t->scalar && c.j1 && !c.j1->scalar;
  if (!grid) {
    const double j1 = scalar_or(c.j1, "j1", std::nullopt);
    const double t = scalar_or(c.t, "t", std::nullopt);
    const ib_params p = c.params(j1);
    ib_correlators corr{};
    ib_measures meas{};
    check(ib_evaluate(&p, t, &corr, &meas));
    if (c.json()) {
      json doc;
      doc["metadata"] = metadata(c);
      doc["result"] = {{"T", t}, {"J1", j1}, {"region", ib_region_name(meas.region)},
                       {"B", meas.B}, {"C", meas.C}};
      emit_json(c, doc);
    } else {
      emit(c, join_row({"T", "J1", "region", "B", "C"}) +
                  join_row({fmt(t), fmt(j1), ib_region_name(meas.region), fmt(meas.B),
                            fmt(meas.C)}));
    }
    return kExitOk;
  }

  if (c.t->lo <= 0.0) throw ConfigError("classify temperatures must be positive");
  const ib_params p = c.params(0.0);
  ib_contour* raw = nullptr;
  check(ib_contour_create(&p, c.t->lo, c.t->hi, c.t->step, c.j1->lo, c.j1->hi, c.j1->step,
                          c.threads, &raw));
  ContourPtr g(raw);
  struct Boundary {
    const char* name;
    ib_field field;
    double level;
  };
  const Boundary boundaries[] = {{"B=2", IB_FIELD_B, 2.0}, {"C=0", IB_FIELD_C, 0.0}};

  json doc;
  std::string text = join_row({"boundary", "J1_a", "T_a", "J1_b", "T_b"});
  if (c.json()) doc["metadata"] = metadata(c);
  for (const auto& b : boundaries) {
    ib_isolines* lraw = nullptr;
    check(ib_isolines_create(g.get(), b.field, b.level, &lraw));
    IsolinesPtr lines(lraw);
    json segs = json::array();
    for (size_t i = 0; i < ib_isolines_size(lines.get()); ++i) {
      ib_segment seg{};
      check(ib_isolines_segment(lines.get(), i, &seg));
      if (c.json())
        segs.push_back({seg.j1_a, seg.t_a, seg.j1_b, seg.t_b});
      else
        text += join_row({b.name, fmt(seg.j1_a), fmt(seg.t_a), fmt(seg.j1_b), fmt(seg.t_b)});
    }
    if (c.json()) doc["boundaries"][b.name] = segs;
  }
  if (c.json())
    emit_json(c, doc);
  else
    emit(c, text);
  return kExitOk;
}

int cmd_check(const RunConfig& c) {
  ib_check_report* raw = nullptr;
  check(ib_oracle_check(c.seed, c.samples, &raw));
  ReportPtr r(raw);
  const bool passed = ib_check_report_passed(r.get());
  if (c.json()) {
    json doc;
    doc["metadata"] = metadata(c);
    json items = json::array();
    for (size_t i = 0; i < ib_check_report_size(r.get()); ++i) {
      ib_check_item it{};
      check(ib_check_report_item(r.get(), i, &it));
      items.push_back({{"name", it.name},
                       {"passed", bool(it.passed)},
                       {"worst", it.worst},
                       {"tolerance", it.tolerance},
                       {"samples", it.samples},
                       {"detail", it.detail}});
    }
    doc["checks"] = items;
    doc["passed"] = passed;
    emit_json(c, doc);
  } else {
    std::string text = join_row({"check", "status", "worst", "tolerance", "samples", "detail"});
    for (size_t i = 0; i < ib_check_report_size(r.get()); ++i) {
      ib_check_item it{};
      check(ib_check_report_item(r.get(), i, &it));
      text += join_row({it.name, it.passed ? "PASS" : "FAIL", fmt(it.worst),
                        fmt(it.tolerance), std::to_string(it.samples), csv_quote(it.detail)});
    }
    emit(c, text);
  }
  return passed ? kExitOk : kExitCheckFailed;
}

void report_error(bool as_json, const std::string& kind, const std::string& message) {
  if (as_json) {
    json doc;
    doc["error"] = {{"kind", kind}, {"message", message}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cerr << "error (" << kind << "): " << message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlations, Bell nonlocality and entanglement of the decorated "
               "Ising-Heisenberg square lattice"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ib_version()));

  Settings flags;
  std::string config_path;
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Sub subs[] = {
      {"measures", "Correlators and measures at one (J1, T); T = 0 gives the ground-state limit",
       cmd_measures},
      {"scan", "One-dimensional sweep in T or J1, with detected transitions", cmd_scan},
      {"contour", "Full (T, J1) grid", cmd_contour},
      {"critical", "Critical temperature and kink, or jumps along a J1 range", cmd_critical},
      {"classify", "Region of one point, or region boundaries over a grid", cmd_classify},
      {"check", "Oracle self-check suite", cmd_check},
  };
  std::map<CLI::App*, const Sub*> by_app;
  for (const auto& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    by_app[cmd] = &sub;
    auto opt = [&](const std::string& key, const std::string& help) {
      cmd->add_option_function<std::string>(
          "--" + key, [&flags, key](const std::string& v) { flags[key] = v; }, help);
    };
    opt("j", "Heisenberg exchange J (default 1)");
    opt("delta", "Exchange anisotropy Delta (default 2)");
    opt("j1", "Ising-Heisenberg coupling J1: value or lo:hi:step");
    opt("t", "Temperature: value or lo:hi:step");
    opt("axis", "Scan axis, T or J1");
    opt("from", "Scan start");
    opt("to", "Scan end");
    opt("step", "Scan step (default 1e-3)");
    opt("format", "csv or json (default csv)");
    opt("out", "Output file; relative paths resolve against $ISINGBELL_OUTPUT_DIR");
    opt("seed", "Random seed for the check suite");
    opt("samples", "Random states per property check (default 10000)");
    opt("threads", "Worker threads for grids (0 = all cores)");
    opt("tol", "Root-finding tolerance (default 1e-10)");
    cmd->add_flag_function(
        "--derivatives", [&flags](std::int64_t) { flags["derivatives"] = "true"; },
        "Add dF/dx columns to scans");
    cmd->add_option("--config", config_path, "key = value file; flags take precedence");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  const Sub* sub = by_app.at(app.get_subcommands().front());
  bool as_json = flags.count("format") && flags.at("format") == "json";
  try {
    Settings merged = config_path.empty() ? Settings{} : read_config_file(config_path);
    for (const auto& [k, v] : flags) merged[k] = v;
    const RunConfig config = build_config(sub->name, merged);
    as_json = config.json();
    return sub->run(config);
  } catch (const ConfigError& e) {
    report_error(as_json, "config", e.what());
    return kExitConfig;
  } catch (const LibraryError& e) {
    report_error(as_json, ib_status_name(e.status), e.what());
    return exit_code_for(e.status);
  } catch (const std::exception& e) {
    report_error(as_json, "internal", e.what());
    return kExitNumerical;
  }
}
