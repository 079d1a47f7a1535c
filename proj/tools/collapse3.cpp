// collapse3: command-line front end for the three-sphere collapse library.
//
// Every subcommand takes its parameters as flags or from a JSON file given
// with --config (flags win). Output files are accompanied by a manifest that
// can itself be passed back as --config to reproduce the run.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "collapse/crosscheck.hpp"
#include "collapse/equilibria.hpp"
#include "collapse/phase_analysis.hpp"
#include "collapse/trace_analysis.hpp"

#ifndef COLLAPSE_VERSION
#define COLLAPSE_VERSION "unknown"
#endif

using json = nlohmann::ordered_json;
using namespace collapse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options bound to variables, with JSON round-tripping for config files and
// manifests.
class Params {
 public:
  explicit Params(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& key, T& var, const std::string& desc) {
    CLI::Option* o = nullptr;
    if constexpr (std::is_same_v<T, bool>)
      o = app_->add_flag("--" + key, var, desc);
    else
      o = app_->add_option("--" + key, var, desc)->capture_default_str();
    items_.push_back({key, o,
                      [&var, key](const json& j) {
                        try {
                          var = j.get<T>();
                        } catch (const json::exception&) {
                          throw InputError("config value for '" + key + "' has the wrong type");
                        }
                      },
                      [&var]() -> json {
                        if constexpr (std::is_floating_point_v<T>) {
                          if (std::isnan(var)) return nullptr;
                        }
                        return var;
                      }});
    return o;
  }

  void apply(const json& cfg) {
    for (auto& it : items_)
      if (it.opt->count() == 0 && cfg.contains(it.key) && !cfg[it.key].is_null()) it.set(cfg[it.key]);
  }

  bool given(const std::string& key) const {
    for (const auto& it : items_)
      if (it.key == key) return it.opt->count() > 0;
    return false;
  }

  json dump() const {
    json j = json::object();
    for (const auto& it : items_) {
      json v = it.get();
      if (!v.is_null()) j[it.key] = v;
    }
    return j;
  }

 private:
  struct Item {
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> set;
    std::function<json()> get;
  };
  CLI::App* app_;
  std::vector<Item> items_;
};

std::string g17(double x) { return format_real(x); }

json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

json jopt(const std::optional<double>& x) { return x ? jnum(*x) : json(nullptr); }

json jjac(const Jacobian2& J) {
  json e = json::array();
  for (auto z : J.eigenvalues) e.push_back({{"re", z.real()}, {"im", z.imag()}});
  return {{"matrix", {{J.m[0][0], J.m[0][1]}, {J.m[1][0], J.m[1][1]}}},
          {"eigenvalues", e},
          {"spectral_radius", J.spectral_radius},
          {"trace", J.trace()},
          {"det", J.det()}};
}

json load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw InputError("config file must hold a JSON object");
  // A manifest carries its parameters under "config".
  if (j.contains("config") && j["config"].is_object()) {
    if (j.contains("command") && j["command"] != command)
      throw InputError("manifest was written by '" + j["command"].get<std::string>() + "', not '" +
                       command + "'");
    return j["config"];
  }
  if (j.contains(command) && j[command].is_object()) return j[command];
  return j;
}

// Shared (r, alpha|theta, a, b, T) parameter block.
struct MapArgs {
  double r = 0.05;
  double alpha = NAN;
  double theta = NAN;
  double a = NAN;
  double b = 1.0;
  double T = NAN;

  void bind(Params& p) {
    p.add("r", r, "restitution coefficient in (0,1)");
    p.add("alpha", alpha, "angle parameter (1+r)/2 (-cos theta); exclusive with --theta");
    p.add("theta", theta, "limiting angle in radians; exclusive with --alpha");
    p.add("a", a, "limiting |W1|^2 (default b/T)");
    p.add("b", b, "limiting |W2|^2");
    p.add("T", T, "ratio b/a (default 1)");
  }

  MapParams resolve() const {
    const bool has_a = !std::isnan(alpha), has_t = !std::isnan(theta);
    if (has_a == has_t) throw InputError("exactly one of --alpha and --theta is required");
    const double al = has_a ? alpha : MapParams::alpha_from_angle(r, theta);
    MapParams p;
    if (!std::isnan(a) && !std::isnan(T))
      throw InputError("--a and --T are mutually exclusive (T = b/a)");
    if (!std::isnan(a))
      p = MapParams::from_ab(r, al, a, b);
    else
      p = MapParams::from_bT(r, al, b, std::isnan(T) ? 1.0 : T);
    try {
      p.validate();
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    return p;
  }
};

struct LimitArgs {
  int max_steps = 2000;
  double tol = 1e-10;
  int K = 3;
  double blowup = 1e6;

  void bind(Params& p) {
    p.add("max-steps", max_steps, "iteration budget per orbit");
    p.add("tol", tol, "convergence tolerance");
    p.add("K", K, "consecutive steps required inside the tolerance");
    p.add("blowup", blowup, "phi2 (or Y) above this counts as leaving the domain");
  }

  ClassifyLimits get() const {
    if (!(max_steps > 0 && tol > 0 && K > 0 && blowup > 0))
      throw InputError("limits must be positive");
    return {max_steps, tol, K, blowup};
  }
};

json manifest(const std::string& command, const Params& p, const json& extra) {
  json m;
  m["tool"] = "collapse3";
  m["version"] = COLLAPSE_VERSION;
  m["command"] = command;
  m["config"] = p.dump();
  m["float_format"] = "%.17g";
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  return m;
}

// Writes to path, or stdout for "-".
void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

void write_manifest(const std::string& out_path, const std::string& manifest_path, const json& m) {
  std::string path = manifest_path;
  if (path.empty()) {
    if (out_path == "-") return;
    path = out_path + ".manifest.json";
  }
  write_text(path, m.dump(2) + "\n");
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  double r = 0.02;
  int dim = 2;
  std::string initial;
  std::string precision = "high";
  std::size_t max_events = 220;
  double max_time = std::numeric_limits<double>::infinity();
  double min_gap = 0.0;
  std::size_t window = kDefaultPatternWindow;
  std::size_t transient = 20;
  std::string trajectory;
  std::string out = "-";
};

template <class Real>
ParticleSystem<Real> load_initial(const std::string& path, double r) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open initial state '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("positions") || !j.contains("velocities"))
    throw InputError("initial state needs 'positions' and 'velocities' arrays");
  ParticleSystem<Real> s;
  s.r = Real(r);
  auto read = [&](const json& arr, std::array<Vec<Real>, 3>& dst) {
    if (!arr.is_array() || arr.size() != 3) throw InputError("expected three vectors");
    for (int k = 0; k < 3; ++k) {
      std::vector<Real> c;
      // Strings keep full precision for the wide type.
      for (const auto& v : arr[k]) {
        if (!v.is_string()) {
          c.push_back(Real(v.get<double>()));
        } else if constexpr (std::is_same_v<Real, double>) {
          c.push_back(std::stod(v.get<std::string>()));
        } else {
          c.push_back(Real(v.get<std::string>()));
        }
      }
      dst[k] = Vec<Real>(std::move(c));
    }
  };
  read(j["positions"], s.x);
  read(j["velocities"], s.v);
  s.dim = static_cast<int>(s.x[0].size());
  return s;
}

template <class Real>
void write_trajectory(const std::string& path, const RunResult<Real>& res) {
  std::ostringstream os;
  const int dim = res.final_state.dim;
  os << "event,time,pair";
  for (const char* q : {"x", "v"})
    for (int p = 0; p < 3; ++p)
      for (int c = 0; c < dim; ++c) os << ',' << q << p << '_' << c;
  os << ",tau,eta1,eta2,d,phi1,phi2\n";

  std::vector<const ReducedTraceEntry<Real>*> by_event(res.events.size(), nullptr);
  std::vector<ReducedTraceEntry<Real>> trace;
  if (res.diagnostics.pattern.kind == PatternKind::NearlyLinear) {
    trace = extract_reduced_trace(res.events, res.diagnostics.pattern);
    for (const auto& t : trace) by_event[t.event_index] = &t;
  }
  for (std::size_t k = 0; k < res.events.size(); ++k) {
    const auto& e = res.events[k];
    os << k << ',' << g17(static_cast<double>(e.time)) << ',' << e.i << '-' << e.j;
    for (const auto* arr : {&e.x, &e.v})
      for (int p = 0; p < 3; ++p)
        for (int c = 0; c < dim; ++c) os << ',' << g17(static_cast<double>((*arr)[p][c]));
    os << ',' << g17(static_cast<double>(e.tau));
    if (const auto* t = by_event[k]) {
      os << ',' << g17(static_cast<double>(t->eta1)) << ',' << g17(static_cast<double>(t->eta2))
         << ',' << g17(static_cast<double>(t->gap));
      if (t->defined)
        os << ',' << g17(t->phi1) << ',' << g17(t->phi2);
      else
        os << ",,";
    } else {
      os << ",,,,,";
    }
    os << '\n';
  }
  write_text(path, os.str());
}

template <class Real>
json simulate_impl(const SimulateArgs& a) {
  ParticleSystem<Real> s;
  if (a.initial.empty()) {
    s = scripted_collapse_datum(a.r, a.dim).template cast<Real>();
  } else {
    s = load_initial<Real>(a.initial, a.r);
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  StopCriteria stop;
  stop.max_events = a.max_events;
  stop.max_time = a.max_time;
  stop.min_gap = a.min_gap;
  const auto res = run(s, stop, a.window);
  if (!a.trajectory.empty()) write_trajectory(a.trajectory, res);

  const auto& dg = res.diagnostics;
  json j;
  j["events"] = res.events.size();
  j["stop_reason"] = std::string(to_string(res.reason));
  j["final_time"] = format_real(res.final_state.time);
  j["pattern"] = {{"kind", std::string(to_string(dg.pattern.kind))},
                  {"central", dg.pattern.central},
                  {"onset", dg.pattern.onset}};
  j["estimated_tau_star"] =
      dg.estimated_tau_star ? json(format_real(*dg.estimated_tau_star)) : json(nullptr);
  j["nudges"] = res.nudges;
  j["kinetic_energy"] = {{"initial", jnum(static_cast<double>(s.kinetic_energy()))},
                         {"final", jnum(static_cast<double>(res.final_state.kinetic_energy()))}};
  if (dg.pattern.kind == PatternKind::NearlyLinear) {
    const auto an = analyze_collapse(res, a.r, a.transient);
    j["collapse"] = {
        {"tau_ratio", jnum(an.tau_ratio)},
        {"tau_tail_estimate", jnum(an.tau_tail_estimate)},
        {"tau_sum_convergent", an.tau_sum_convergent},
        {"eta_rate", jnum(an.eta_rate)},
        {"eta_rate_bound", jnum(an.eta_rate_bound)},
        {"limits",
         {{"contact", an.limits.contact},
          {"cos_theta_bar", an.limits.cos_theta_bar},
          {"alpha", an.limits.params.alpha},
          {"a", an.limits.params.a},
          {"b", an.limits.params.b},
          {"T", an.limits.params.T}}},
        {"phi1_last", jnum(an.phi1_last)},
        {"phi_minus", jnum(an.phi_minus)},
        {"tracked_steps", an.tracked_steps},
        {"tracking_err_phi1", jnum(an.tracking_err_phi1)},
        {"tracking_err_phi2", jnum(an.tracking_err_phi2)},
        {"max_tau_over_eta", jnum(an.max_tau_over_eta)},
        {"max_phi2_tail", jnum(an.max_phi2_tail)}};
  }
  return j;
}

// ------------------------------------------------------------------ reduce

std::vector<ReducedState> iterate_map(const std::string& map, ReducedState s0, const MapParams& p,
                                      double R, int steps, std::string& stop_note) {
  std::vector<ReducedState> pts{s0};
  ReducedState s = s0;
  for (int k = 0; k < steps; ++k) {
    MapStep st;
    if (map == "one") {
      st = try_one_collision(s, p.r, p.alpha, p.b, p.T);
    } else if (map == "two") {
      st = try_two_collision(s, p);
    } else if (map == "symmetric") {
      st = try_symmetric_map(s, MapParams::symmetric(p.r, p.alpha, p.b));
    } else {
      auto le = try_low_energy_map({s.phi1, s.phi2}, R, p.alpha);
      st.status = le.status;
      st.s = {le.s.X, le.s.Y};
    }
    if (!st.ok()) {
      stop_note = std::string(to_string(st.status)) + " at step " + std::to_string(k + 1);
      break;
    }
    s = st.s;
    pts.push_back(s);
  }
  return pts;
}

int subcommand_main(CLI::App& app, int argc, char** argv);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for inelastic collapse of three hard spheres"};
  app.set_version_flag("--version", COLLAPSE_VERSION);
  app.require_subcommand(1);
  // Global options may also follow the subcommand name.
  app.fallthrough();
  return subcommand_main(app, argc, argv);
}

namespace {

int subcommand_main(CLI::App& app, int argc, char** argv) {
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file or manifest (flags override it)");
  int threads = 0;
  app.add_option("--threads", threads, "worker threads for sweep/separatrix (0 = all cores)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "event-driven run with collapse diagnostics");
  Params sim_p(sim);
  SimulateArgs sa;
  sim_p.add("r", sa.r, "restitution coefficient");
  sim_p.add("dim", sa.dim, "space dimension for the scripted datum");
  sim_p.add("initial", sa.initial, "JSON file with positions and velocities (default: scripted near-collinear datum)");
  sim_p.add("precision", sa.precision, "double or high (400-bit binary float)")
      ->check(CLI::IsMember({"double", "high"}));
  sim_p.add("max-events", sa.max_events, "event budget");
  sim_p.add("max-time", sa.max_time, "time budget");
  sim_p.add("min-gap", sa.min_gap, "stop once an inter-collision time falls below this (0 = off)");
  sim_p.add("window", sa.window, "pattern detection window (>= 6)");
  sim_p.add("transient", sa.transient, "two-collision steps skipped before measuring tracking");
  sim_p.add("trajectory", sa.trajectory, "per-event CSV output");
  sim_p.add("out", sa.out, "summary JSON path ('-' = stdout)");
  std::string sim_manifest;
  sim->add_option("--manifest", sim_manifest, "manifest path (default <trajectory>.manifest.json)");

  // reduce
  auto* red = app.add_subcommand("reduce", "iterate a reduced map from a state");
  Params red_p(red);
  MapArgs red_m;
  red_m.bind(red_p);
  std::string red_map = "two";
  double red_R = NAN, red_x = 0.0, red_y = 0.0;
  int red_steps = 1;
  std::string red_out = "-";
  red_p.add("map", red_map, "one, two, symmetric or low-energy")
      ->check(CLI::IsMember({"one", "two", "symmetric", "low-energy"}));
  red_p.add("R", red_R, "low-energy parameter r/alpha^2 (low-energy map only; default from r)");
  red_p.add("x", red_x, "initial phi1 (or X)");
  red_p.add("y", red_y, "initial phi2 (or Y)");
  red_p.add("steps", red_steps, "number of steps");
  red_p.add("out", red_out, "CSV path ('-' = stdout)");

  // equilibria
  auto* eqc = app.add_subcommand("equilibria", "fixed points and stability certificates");
  Params eq_p(eqc);
  MapArgs eq_m;
  eq_m.bind(eq_p);
  std::string eq_out = "-";
  eq_p.add("out", eq_out, "JSON path ('-' = stdout)");

  // sweep
  auto* swp = app.add_subcommand("sweep", "classify a grid of initial data");
  Params sw_p(swp);
  MapArgs sw_m;
  sw_m.bind(sw_p);
  LimitArgs sw_l;
  sw_l.bind(sw_p);
  std::string sw_map = "two";
  double sw_R = NAN;
  double x_lo = 0.0, x_hi = NAN, y_lo = 0.0, y_hi = NAN;
  int nx = 50, ny = 50;
  std::string sw_out = "sweep.csv", sw_manifest;
  sw_p.add("map", sw_map, "two or low-energy")->check(CLI::IsMember({"two", "low-energy"}));
  sw_p.add("R", sw_R, "low-energy parameter (default r/alpha^2)");
  sw_p.add("x-lo", x_lo, "first axis start");
  sw_p.add("x-hi", x_hi, "first axis end (default alpha, or 1 for low-energy)");
  sw_p.add("nx", nx, "first axis points");
  sw_p.add("y-lo", y_lo, "second axis start");
  sw_p.add("y-hi", y_hi, "second axis end (default 1/(2b), or 10 for low-energy)");
  sw_p.add("ny", ny, "second axis points");
  sw_p.add("out", sw_out, "grid CSV path");
  swp->add_option("--manifest", sw_manifest, "manifest path (default <out>.manifest.json)");

  // separatrix
  auto* sep = app.add_subcommand("separatrix", "bisect the boundary of the convergent region");
  Params se_p(sep);
  MapArgs se_m;
  se_m.bind(se_p);
  LimitArgs se_l;
  se_l.bind(se_p);
  std::string se_map = "two";
  double se_R = NAN, se_lo = 0.0, se_hi = NAN, se_width = 1e-6;
  int se_n = 100, se_scan = 64;
  bool se_zk = false;
  std::string se_out = "separatrix.csv", se_manifest;
  se_p.add("map", se_map, "two or low-energy")->check(CLI::IsMember({"two", "low-energy"}));
  se_p.add("R", se_R, "low-energy parameter (default r/alpha^2)");
  se_p.add("lo", se_lo, "first sample (phi1, or Y for low-energy)");
  se_p.add("hi", se_hi, "end of samples, exclusive (default phi+, or 10)");
  se_p.add("n", se_n, "number of samples");
  se_p.add("bracket-width", se_width, "bisection stopping width");
  se_p.add("scan-points", se_scan, "coarse scan points per column");
  se_p.add("with-zk", se_zk, "also sample the column through the ZK equilibrium");
  se_p.add("out", se_out, "CSV path");
  sep->add_option("--manifest", se_manifest, "manifest path (default <out>.manifest.json)");

  // orbit
  auto* orb = app.add_subcommand("orbit", "forward orbit of the two-collision map");
  Params or_p(orb);
  MapArgs or_m;
  or_m.bind(or_p);
  LimitArgs or_l;
  or_l.bind(or_p);
  double or_x = 0.125, or_y = 1e-2;
  int or_steps = 2000;
  std::string or_out = "-", or_manifest;
  or_p.add("x", or_x, "seed phi1");
  or_p.add("y", or_y, "seed phi2");
  or_p.add("steps", or_steps, "maximum number of steps");
  or_p.add("out", or_out, "CSV path ('-' = stdout)");
  orb->add_option("--manifest", or_manifest, "manifest path (default <out>.manifest.json)");

  // validate
  auto* val = app.add_subcommand("validate", "run the cross-oracle suites");
  Params va_p(val);
  std::uint64_t va_seed = 1;
  int va_samples = 1000;
  std::string va_out = "-";
  va_p.add("seed", va_seed, "random seed");
  va_p.add("samples", va_samples, "samples per suite");
  va_p.add("out", va_out, "JSON path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    auto with_config = [&](Params& p, const std::string& name) {
      if (!config_path.empty()) p.apply(load_config(config_path, name));
    };

    if (*sim) {
      with_config(sim_p, "simulate");
      if (sa.dim < 2) throw InputError("--dim must be at least 2");
      json j = sa.precision == "double" ? simulate_impl<double>(sa) : simulate_impl<HighReal>(sa);
      json out = manifest("simulate", sim_p, {{"summary", j}});
      write_text(sa.out, out.dump(2) + "\n");
      if (!sa.trajectory.empty()) write_manifest(sa.trajectory, sim_manifest, manifest("simulate", sim_p, {}));
      return kExitOk;
    }

    if (*red) {
      with_config(red_p, "reduce");
      const MapParams p = red_m.resolve();
      const double R = std::isnan(red_R) ? p.r / (p.alpha * p.alpha) : red_R;
      if (red_steps < 0) throw InputError("--steps must be non-negative");
      std::string note;
      auto pts = iterate_map(red_map, {red_x, red_y}, p, R, red_steps, note);
      std::ostringstream os;
      os << (red_map == "low-energy" ? "step,X,Y\n" : "step,phi1,phi2\n");
      for (std::size_t k = 0; k < pts.size(); ++k)
        os << k << ',' << g17(pts[k].phi1) << ',' << g17(pts[k].phi2) << '\n';
      write_text(red_out, os.str());
      if (!note.empty()) {
        std::cerr << "map undefined: " << note << '\n';
        return kExitNumerical;
      }
      return kExitOk;
    }

    if (*eqc) {
      with_config(eq_p, "equilibria");
      const MapParams p = eq_m.resolve();
      json j = manifest("equilibria", eq_p, {});
      const auto bf = boundary_fixed_points(p.r, p.alpha);
      j["kind"] = std::string(to_string(bf.kind));
      j["phi_minus"] = jopt(bf.phi_minus);
      j["phi_plus"] = jopt(bf.phi_plus);
      if (bf.phi_minus) {
        const double pm = *bf.phi_minus;
        j["f_prime_phi_minus"] = jnum(phi2zero_derivative(pm, p.r, p.alpha));
        j["lambda1_phi_minus"] = jnum(lambda1(pm, p.r, p.alpha));
        j["lambda2_phi_minus"] = jnum(lambda2(pm, p.r, p.alpha));
        j["jacobian_phi_minus"] = jjac(jacobian_two_collision({pm, 0.0}, p));
      }
      if (bf.phi_plus) j["f_prime_phi_plus"] = jnum(phi2zero_derivative(*bf.phi_plus, p.r, p.alpha));
      try {
        const auto sp = stability_polynomial(p.r, p.alpha);
        j["stability_polynomial"] = {{"coeffs", sp.coeffs},
                                     {"P_zero", sp.P_zero},
                                     {"P_phi_minus", sp.P_minus},
                                     {"P_phi_plus", sp.P_plus},
                                     {"root", sp.root}};
      } catch (const Error& e) {
        j["stability_polynomial"] = {{"error", e.what()}};
      }
      const auto zk = zk_equilibrium(p.r, p.alpha, p.b);
      j["zk_exists"] = zk.exists;
      j["zk"] = {{"margin", zk.margin},
                 {"geometric_exists", zk.geometric_exists}};
      if (zk.geometric_exists) {
        j["zk"]["x0"] = zk.x0;
        j["zk"]["w0"] = zk.w0;
        j["zk"]["phi2_0"] = zk.phi2_0;
        j["zk"]["hyperbola_residual"] = zk.hyperbola_residual;
        j["zk"]["cubic_residual"] = zk.cubic_residual;
        j["zk"]["fixed_point_residual"] = zk.fixed_point_residual;
        j["zk"]["jacobian"] = jjac(zk.jacobian);
        j["zk"]["one_minus_tr_plus_det"] = zk.one_minus_tr_plus_det;
        j["zk"]["unstable"] = zk.unstable;
      }
      const auto pu = p_up_check(p.r, p.alpha, p.b);
      j["p_up"] = {{"phi1", 0.0},
                   {"phi2", p_up(p.b).phi2},
                   {"fixed_residual", pu.fixed_residual},
                   {"dy_f2_below", pu.dy_f2_below},
                   {"perturbed_before", pu.y_before},
                   {"perturbed_after", pu.y_after},
                   {"repelled", pu.repelled}};
      if (!std::isnan(eq_m.theta)) {
        const auto ac = zk_angle_conditions(p.r, eq_m.theta);
        j["angle_conditions"] = {{"exists_ok", ac.exists_ok},
                                 {"stable_ok", ac.stable_ok},
                                 {"exist_bound", ac.exist_bound},
                                 {"stable_bound", ac.stable_bound},
                                 {"minus_cos", ac.minus_cos}};
      }
      j["r_exist"] = r_exist();
      j["r_stabi"] = r_stabi();
      const double R = p.r / (p.alpha * p.alpha);
      const auto le = low_energy_equilibria(R, p.alpha);
      j["low_energy"] = {{"R", R},
                         {"kind", std::string(to_string(le.kind))},
                         {"X_minus", jopt(le.X_minus)},
                         {"X_plus", jopt(le.X_plus)},
                         {"C", jopt(le.C)}};
      write_text(eq_out, j.dump(2) + "\n");
      return kExitOk;
    }

    if (*swp) {
      with_config(sw_p, "sweep");
      const MapParams p = sw_m.resolve();
      const ClassifyLimits lim = sw_l.get();
      if (nx < 1 || ny < 1) throw InputError("--nx and --ny must be positive");
      const bool le = sw_map == "low-energy";
      GridSpec g{{x_lo, std::isnan(x_hi) ? (le ? 1.0 : p.alpha) : x_hi, nx, !le},
                 {y_lo, std::isnan(y_hi) ? (le ? 10.0 : 1.0 / (2 * p.b)) : y_hi, ny, true}};
      const double R = std::isnan(sw_R) ? p.r / (p.alpha * p.alpha) : sw_R;
      const auto grid = le ? sweep_low_energy(g, R, p.alpha, lim, threads) : sweep(g, p, lim, threads);
      std::ostringstream os;
      write_grid_csv(os, grid);
      write_text(sw_out, os.str());
      json counts = json::object();
      for (const auto& c : grid.cells) {
        const std::string k(to_string(c.kind));
        counts[k] = counts.value(k, 0) + 1;
      }
      write_manifest(sw_out, sw_manifest,
                     manifest("sweep", sw_p, {{"outputs", {sw_out}}, {"counts", counts}}));
      std::cout << json({{"cells", grid.cells.size()}, {"counts", counts}}).dump() << '\n';
      return kExitOk;
    }

    if (*sep) {
      with_config(se_p, "separatrix");
      const MapParams p = se_m.resolve();
      SeparatrixOptions opt;
      opt.bracket_width = se_width;
      opt.scan_points = se_scan;
      opt.limits = se_l.get();
      opt.threads = threads;
      if (se_n < 1 || !(se_width > 0)) throw InputError("--n and --bracket-width must be positive");
      std::ostringstream os;
      json info;
      if (se_map == "low-energy") {
        const double R = std::isnan(se_R) ? p.r / (p.alpha * p.alpha) : se_R;
        const double hi = std::isnan(se_hi) ? 10.0 : se_hi;
        std::vector<double> ys;
        for (int k = 0; k < se_n; ++k) ys.push_back(se_lo + (hi - se_lo) * k / se_n);
        const auto rows = estimate_low_energy_separatrix(R, p.alpha, ys, opt);
        os << "Y,X_low,X_high\n";
        for (const auto& row : rows) os << g17(row.Y) << ',' << g17(row.X_low) << ',' << g17(row.X_high) << '\n';
        info = {{"rows", rows.size()}};
      } else {
        const auto bf = boundary_fixed_points(p.r, p.alpha);
        if (bf.kind != FixedPointKind::Pair)
          throw InputError("separatrix estimation needs two boundary fixed points");
        const double hi = std::isnan(se_hi) ? *bf.phi_plus : se_hi;
        std::vector<double> xs;
        for (int k = 0; k < se_n; ++k) xs.push_back(se_lo + (hi - se_lo) * k / se_n);
        std::optional<ZkEquilibrium> zk;
        if (se_zk && p.T == 1.0) {
          zk = zk_equilibrium(p.r, p.alpha, p.b);
          if (zk->geometric_exists) xs.push_back(zk->x0);
        }
        const auto est = estimate_separatrix(p, xs, opt);
        write_separatrix_csv(os, est);
        info = {{"columns", est.columns.size()},
                {"skipped", est.skipped},
                {"monotonic_violations", est.monotonic_violations},
                {"axis_intercept", jopt(est.axis_intercept)},
                {"phi_plus", *bf.phi_plus}};
        if (zk && zk->geometric_exists) {
          info["zk"] = {{"x0", zk->x0}, {"phi2_0", zk->phi2_0}};
          for (const auto& c : est.columns)
            if (c.phi1 == zk->x0) {
              info["zk"]["phi2_low"] = c.phi2_low;
              info["zk"]["phi2_high"] = c.phi2_high;
            }
        }
      }
      write_text(se_out, os.str());
      write_manifest(se_out, se_manifest,
                     manifest("separatrix", se_p, {{"outputs", {se_out}}, {"result", info}}));
      std::cout << info.dump() << '\n';
      return kExitOk;
    }

    if (*orb) {
      with_config(or_p, "orbit");
      const MapParams p = or_m.resolve();
      if (or_steps < 0) throw InputError("--steps must be non-negative");
      const auto poly = trace_invariant_curve(p, {or_x, or_y}, or_steps, or_l.get());
      std::ostringstream os;
      write_orbit_csv(os, poly.points);
      write_text(or_out, os.str());
      json res = {{"outcome", std::string(to_string(poly.outcome.kind))},
                  {"steps", poly.outcome.steps},
                  {"last_phi1", poly.outcome.last_state.phi1},
                  {"last_phi2", poly.outcome.last_state.phi2}};
      write_manifest(or_out, or_manifest, manifest("orbit", or_p, {{"outputs", {or_out}}, {"result", res}}));
      if (or_out != "-") std::cout << res.dump() << '\n';
      return kExitOk;
    }

    if (*val) {
      with_config(va_p, "validate");
      if (va_samples < 1) throw InputError("--samples must be positive");
      const auto results = run_validation_suite(va_seed, va_samples);
      json j = manifest("validate", va_p, {});
      bool all = true;
      for (const auto& r : results) {
        all = all && r.pass;
        j["checks"].push_back({{"name", r.name},
                               {"pass", r.pass},
                               {"max_error", r.max_error},
                               {"tolerance", r.tolerance},
                               {"samples", r.samples},
                               {"detail", r.detail}});
      }
      j["all_pass"] = all;
      write_text(va_out, j.dump(2) + "\n");
      return all ? kExitOk : kExitNumerical;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidArgument || e.code() == Errc::Overlapping ||
        e.code() == Errc::NotInContact) {
      std::cerr << "input error: " << e.what() << '\n';
      return kExitInput;
    }
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace
