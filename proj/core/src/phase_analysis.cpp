#include "collapse/phase_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "collapse/scalar.hpp"

namespace collapse {

std::string_view to_string(OrbitKind k) noexcept {
  switch (k) {
    case OrbitKind::ConvergedToPMinus: return "ConvergedToPMinus";
    case OrbitKind::LeftDomain: return "LeftDomain";
    case OrbitKind::IllDefined: return "IllDefined";
    case OrbitKind::ConvergedToOther: return "ConvergedToOther";
    case OrbitKind::Undecided: return "Undecided";
  }
  return "Unknown";
}

namespace {

bool negative(ReducedState s) { return s.phi1 < 0.0 || s.phi2 < 0.0; }

OrbitClass classify_impl(const std::function<MapStep(ReducedState)>& step, ReducedState s0,
                         std::optional<ReducedState> target, const ClassifyLimits& lim,
                         std::vector<ReducedState>* record) {
  OrbitClass out;
  out.last_state = s0;
  if (record) record->push_back(s0);
  if (negative(s0)) {
    out.kind = OrbitKind::LeftDomain;
    return out;
  }
  ReducedState s = s0;
  int conv = 0;
  int stag = 0;
  for (int n = 1; n <= lim.max_steps; ++n) {
    const MapStep st = step(s);
    out.steps = n;
    if (!st.ok() || !std::isfinite(st.s.phi1) || !std::isfinite(st.s.phi2)) {
      out.kind = OrbitKind::IllDefined;
      out.last_state = s;
      return out;
    }
    const ReducedState ns = st.s;
    if (record) record->push_back(ns);
    if (s.phi2 != 0.0) out.last_phi2_ratio = std::abs(ns.phi2 / s.phi2);
    out.last_state = ns;
    if (negative(st.mid) || negative(ns) || ns.phi2 > lim.blowup) {
      out.kind = OrbitKind::LeftDomain;
      return out;
    }
    if (target && std::hypot(ns.phi1 - target->phi1, ns.phi2 - target->phi2) < lim.tol_conv) {
      stag = 0;
      if (++conv >= lim.K) {
        out.kind = OrbitKind::ConvergedToPMinus;
        return out;
      }
    } else {
      conv = 0;
      const double scale = std::max(1.0, std::hypot(ns.phi1, ns.phi2));
      // Much stricter than tol_conv so slow convergence to the target is not
      // mistaken for a different limit.
      if (std::hypot(ns.phi1 - s.phi1, ns.phi2 - s.phi2) < 1e-3 * lim.tol_conv * scale) {
        if (++stag >= lim.K) {
          out.kind = OrbitKind::ConvergedToOther;
          return out;
        }
      } else {
        stag = 0;
      }
    }
    s = ns;
  }
  out.kind = OrbitKind::Undecided;
  return out;
}

std::optional<ReducedState> p_minus_target(double r, double alpha) {
  BoundaryFixedPoints bf = boundary_fixed_points(r, alpha);
  if (bf.kind == FixedPointKind::None) return std::nullopt;
  return ReducedState{*bf.phi_minus, 0.0};
}

std::function<MapStep(ReducedState)> low_energy_step(double R, double alpha) {
  return [R, alpha](ReducedState s) {
    LowEnergyStep le = try_low_energy_map({s.phi1, s.phi2}, R, alpha);
    MapStep st;
    st.mid = s;
    st.stage = 1;
    st.status = le.status;
    st.s = {le.s.X, le.s.Y};
    return st;
  };
}

std::optional<ReducedState> low_energy_target(double R) {
  if (1.0 - 4.0 * R < 0.0) return std::nullopt;
  const double plus = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * R)));
  return ReducedState{R / plus, 0.0};
}

}  // namespace

OrbitClass classify_with(const std::function<MapStep(ReducedState)>& step, ReducedState s0,
                         std::optional<ReducedState> target, const ClassifyLimits& limits) {
  return classify_impl(step, s0, target, limits, nullptr);
}

OrbitClass classify_orbit(ReducedState s0, const MapParams& p, const ClassifyLimits& limits) {
  return classify_impl([&p](ReducedState s) { return try_two_collision(s, p); }, s0,
                       p_minus_target(p.r, p.alpha), limits, nullptr);
}

OrbitClass classify_low_energy(LowEnergyState s0, double R, double alpha,
                               const ClassifyLimits& limits) {
  return classify_impl(low_energy_step(R, alpha), {s0.X, s0.Y}, low_energy_target(R), limits,
                       nullptr);
}

double Axis::at(int i) const {
  if (n <= 1) return lo;
  const int div = include_hi ? n - 1 : n;
  return lo + (hi - lo) * static_cast<double>(i) / div;
}

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = at(i);
  return v;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

ClassificationGrid run_grid(const GridSpec& spec, const std::function<MapStep(ReducedState)>& step,
                            std::optional<ReducedState> target, const ClassifyLimits& limits,
                            int threads) {
  ClassificationGrid g;
  g.phi1_axis = spec.phi1.values();
  g.phi2_axis = spec.phi2.values();
  const std::size_t n1 = g.phi1_axis.size();
  g.cells.resize(n1 * g.phi2_axis.size());
  parallel_for(g.cells.size(), threads, [&](std::size_t idx) {
    const ReducedState s0{g.phi1_axis[idx % n1], g.phi2_axis[idx / n1]};
    g.cells[idx] = classify_impl(step, s0, target, limits, nullptr);
  });
  return g;
}

}  // namespace

ClassificationGrid sweep(const GridSpec& grid, const MapParams& p, const ClassifyLimits& limits,
                         int threads) {
  ClassificationGrid g =
      run_grid(grid, [&p](ReducedState s) { return try_two_collision(s, p); },
               p_minus_target(p.r, p.alpha), limits, threads);
  g.map = GridMap::TwoCollision;
  g.params = p;
  return g;
}

ClassificationGrid sweep_low_energy(const GridSpec& grid, double R, double alpha,
                                    const ClassifyLimits& limits, int threads) {
  ClassificationGrid g =
      run_grid(grid, low_energy_step(R, alpha), low_energy_target(R), limits, threads);
  g.map = GridMap::LowEnergy;
  g.params.alpha = alpha;
  g.params.r = R * alpha * alpha;
  g.R = R;
  return g;
}

double necessary_domain_bound(double phi1, const MapParams& p) {
  const double invT = 1.0 / p.T;
  const double num = p.alpha * (phi1 + invT);
  const double den = p.alpha + invT - p.r;
  return 1.0 / (2.0 * p.b) - num * num / (2.0 * p.b * den * den);
}

SeparatrixColumn separatrix_column(double phi1, const MapParams& p, const SeparatrixOptions& opt) {
  auto converges = [&](double y) {
    return classify_orbit({phi1, y}, p, opt.limits).kind == OrbitKind::ConvergedToPMinus;
  };
  if (!converges(0.0))
    throw Error(Errc::NoBracket, "column phi1 = " + format_real(phi1) + " has no convergent base");
  const double top = 1.0 / (2.0 * p.b);
  double lo = 0.0;
  double hi = -1.0;
  for (int k = 1; k <= opt.scan_points; ++k) {
    const double y = top * k / opt.scan_points;
    if (!converges(y)) {
      hi = y;
      break;
    }
    lo = y;
  }
  if (hi < 0.0)
    throw Error(Errc::NoBracket, "column phi1 = " + format_real(phi1) + " converges throughout");
  while (hi - lo > opt.bracket_width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (converges(mid) ? lo : hi) = mid;
  }
  return {phi1, lo, hi};
}

std::optional<double> separatrix_axis_intercept(const MapParams& p, const SeparatrixOptions& opt) {
  auto converges = [&](double x) {
    return classify_orbit({x, 0.0}, p, opt.limits).kind == OrbitKind::ConvergedToPMinus;
  };
  double lo = 0.0;
  double hi = p.alpha;
  if (!converges(lo) || converges(hi)) return std::nullopt;
  while (hi - lo > opt.bracket_width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (converges(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SeparatrixEstimate estimate_separatrix(const MapParams& p, const std::vector<double>& samples,
                                       const SeparatrixOptions& opt) {
  std::vector<double> xs = samples;
  std::sort(xs.begin(), xs.end());
  std::vector<std::optional<SeparatrixColumn>> cols(xs.size());
  parallel_for(xs.size(), opt.threads, [&](std::size_t k) {
    try {
      cols[k] = separatrix_column(xs[k], p, opt);
    } catch (const Error& e) {
      if (e.code() != Errc::NoBracket) throw;
    }
  });
  SeparatrixEstimate est;
  est.bracket_width = opt.bracket_width;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (cols[k])
      est.columns.push_back(*cols[k]);
    else
      est.skipped.push_back(xs[k]);
  }
  for (std::size_t k = 0; k + 1 < est.columns.size(); ++k) {
    if (est.columns[k + 1].Phi() > est.columns[k].Phi() + opt.bracket_width)
      ++est.monotonic_violations;
  }
  est.axis_intercept = separatrix_axis_intercept(p, opt);
  return est;
}

std::optional<double> separatrix_at(const SeparatrixEstimate& est, double phi1) {
  const auto& c = est.columns;
  if (c.empty() || phi1 < c.front().phi1 || phi1 > c.back().phi1) return std::nullopt;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k].phi1 == phi1) return c[k].Phi();
    if (k + 1 < c.size() && c[k].phi1 < phi1 && phi1 < c[k + 1].phi1) {
      const double t = (phi1 - c[k].phi1) / (c[k + 1].phi1 - c[k].phi1);
      return (1.0 - t) * c[k].Phi() + t * c[k + 1].Phi();
    }
  }
  return std::nullopt;
}

std::vector<LowEnergySeparatrixRow> estimate_low_energy_separatrix(
    double R, double alpha, const std::vector<double>& Y_samples, const SeparatrixOptions& opt) {
  std::vector<std::optional<LowEnergySeparatrixRow>> rows(Y_samples.size());
  parallel_for(Y_samples.size(), opt.threads, [&](std::size_t k) {
    const double Y = Y_samples[k];
    auto converges = [&](double X) {
      return classify_low_energy({X, Y}, R, alpha, opt.limits).kind ==
             OrbitKind::ConvergedToPMinus;
    };
    double lo = 0.0;
    double hi = 1.0 - 0.5 * R;
    if (!converges(lo) || converges(hi)) return;
    while (hi - lo > opt.bracket_width) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (converges(mid) ? lo : hi) = mid;
    }
    rows[k] = LowEnergySeparatrixRow{Y, lo, hi};
  });
  std::vector<LowEnergySeparatrixRow> out;
  for (auto& r : rows)
    if (r) out.push_back(*r);
  return out;
}

Polyline trace_invariant_curve(const MapParams& p, ReducedState seed, int steps,
                               const ClassifyLimits& limits) {
  Polyline pl;
  ClassifyLimits lim = limits;
  lim.max_steps = steps;
  pl.outcome = classify_impl([&p](ReducedState s) { return try_two_collision(s, p); }, seed,
                             p_minus_target(p.r, p.alpha), lim, &pl.points);
  return pl;
}

int count_monotone_segments(const std::vector<ReducedState>& pts, int coord, double tol) {
  int segments = 0;
  int dir = 0;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double d = coord == 0 ? pts[k].phi1 - pts[k - 1].phi1 : pts[k].phi2 - pts[k - 1].phi2;
    if (std::abs(d) <= tol) continue;
    const int nd = d > 0.0 ? 1 : -1;
    if (nd != dir) {
      ++segments;
      dir = nd;
    }
  }
  return segments;
}

void write_grid_csv(std::ostream& os, const ClassificationGrid& g) {
  os << (g.map == GridMap::LowEnergy ? "X,Y,class,steps\n" : "phi1,phi2,class,steps\n");
  const std::size_t n1 = g.phi1_axis.size();
  for (std::size_t j = 0; j < g.phi2_axis.size(); ++j)
    for (std::size_t i = 0; i < n1; ++i) {
      const OrbitClass& c = g.cells[j * n1 + i];
      os << format_real(g.phi1_axis[i]) << ',' << format_real(g.phi2_axis[j]) << ','
         << to_string(c.kind) << ',' << c.steps << '\n';
    }
}

void write_separatrix_csv(std::ostream& os, const SeparatrixEstimate& est) {
  os << "phi1,phi2_low,phi2_high\n";
  for (const auto& c : est.columns)
    os << format_real(c.phi1) << ',' << format_real(c.phi2_low) << ','
       << format_real(c.phi2_high) << '\n';
}

void write_orbit_csv(std::ostream& os, const std::vector<ReducedState>& pts) {
  os << "step,phi1,phi2\n";
  for (std::size_t k = 0; k < pts.size(); ++k)
    os << k << ',' << format_real(pts[k].phi1) << ',' << format_real(pts[k].phi2) << '\n';
}

}  // namespace collapse
