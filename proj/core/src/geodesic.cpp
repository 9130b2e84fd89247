#include "lorentz/geodesic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <functional>

#include "lorentz/frechet.hpp"

namespace lorentz {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

struct ChartExit {
  double t;
};

// Geodesic equation, optionally augmented with the variational equation for
// Y = d x / d v(0):  Y' = Z,  Z' = -(dG[.](v, v)) Y - 2 G(v, Z).
class GeodesicSystem {
 public:
  GeodesicSystem(const SmoothSpacetime& st, bool variational, double bound)
      : st_(st), n_(st.dim()), variational_(variational), bound_(bound) {}

  void operator()(const State& y, State& dy, double t) const {
    const int n = n_;
    Event x(n);
    for (int i = 0; i < n; ++i) x[i] = y[i];
    if (!x.allFinite() || !st_.in_domain(x)) throw ChartExit{t};
    for (int i = 0; i < 2 * n; ++i)
      if (std::abs(y[static_cast<std::size_t>(i)]) > bound_) throw ChartExit{t};
    Connection c;
    st_.connection(x, c, variational_);
    const double* v = y.data() + n;
    for (int k = 0; k < n; ++k) {
      dy[k] = v[k];
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += c.gamma[k][i][j] * v[i] * v[j];
      dy[n + k] = -acc;
    }
    if (!variational_) return;
    double A[kMaxDim][kMaxDim], B[kMaxDim][kMaxDim];
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) {
        double a = 0.0, b = 0.0;
        for (int i = 0; i < n; ++i) {
          b += 2.0 * c.gamma[k][i][m] * v[i];
          for (int j = 0; j < n; ++j) a += c.dgamma[m][k][i][j] * v[i] * v[j];
        }
        A[k][m] = a;
        B[k][m] = b;
      }
    const double* Y = y.data() + 2 * n;
    const double* Z = Y + n * n;
    double* dY = dy.data() + 2 * n;
    double* dZ = dY + n * n;
    for (int k = 0; k < n; ++k)
      for (int col = 0; col < n; ++col) {
        dY[k * n + col] = Z[k * n + col];
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += A[k][m] * Y[m * n + col] + B[k][m] * Z[m * n + col];
        dZ[k * n + col] = -s;
      }
  }

 private:
  const SmoothSpacetime& st_;
  int n_;
  bool variational_;
  double bound_;
};

// Integrates from the state at times.front() and reports every node in
// `times` to `observe`. Chart exits stop the integration and are recorded.
IntegratorMeta run_ode(const SmoothSpacetime& st, bool variational, State y, const std::vector<double>& times,
                       const IntegratorOptions& opts, const std::function<void(const State&, double)>& observe) {
  IntegratorMeta meta;
  GeodesicSystem sys(st, variational, opts.coordinate_bound);
  const double dir = times.back() >= times.front() ? 1.0 : -1.0;
  auto obs = [&](const State& s, double t) { observe(s, t); };
  try {
    // Few output times: high-order steps straight to each time. Sampled
    // traces: dense output between steps.
    if (times.size() <= 3) {
      auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_fehlberg78<State>());
      meta.steps = odeint::integrate_times(stepper, std::cref(sys), y, times.begin(), times.end(),
                                           dir * opts.initial_step, obs, odeint::max_step_checker(opts.max_steps));
    } else {
      auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());
      meta.steps = odeint::integrate_times(stepper, std::cref(sys), y, times.begin(), times.end(),
                                           dir * opts.initial_step, obs, odeint::max_step_checker(opts.max_steps));
    }
  } catch (const ChartExit& e) {
    meta.exited_chart = true;
    meta.exit_param = e.t;
  } catch (const odeint::step_adjustment_error& e) {
    throw IntegratorError(std::string("geodesic integration: step underflow: ") + e.what());
  } catch (const odeint::odeint_error& e) {
    throw IntegratorError(std::string("geodesic integration: ") + e.what());
  }
  return meta;
}

std::vector<double> uniform_grid(double t_max, int nodes) {
  if (nodes < 2) throw DomainError("geodesic: at least two grid nodes required");
  std::vector<double> g(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) g[static_cast<std::size_t>(i)] = t_max * i / (nodes - 1);
  g.back() = t_max;
  return g;
}

double norm_drift(const SmoothSpacetime& st, const std::vector<Event>& xs, const std::vector<Tangent>& vs) {
  if (xs.empty()) return 0.0;
  const double g0 = st.inner(xs.front(), vs.front(), vs.front());
  double drift = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) drift = std::max(drift, std::abs(st.inner(xs[i], vs[i], vs[i]) - g0));
  return drift;
}

void check_initial(const SmoothSpacetime& st, const Event& p, const Tangent& v) {
  st.check_domain(p);
  if (v.size() != st.dim() || !v.allFinite()) throw DomainError(st.name() + ": invalid tangent vector");
}

}  // namespace

double speed_squared(const SmoothSpacetime& st, const GeodesicSolution& sol) {
  return st.inner(sol.initial_point, sol.initial_velocity, sol.initial_velocity);
}

double lg_length(const SmoothSpacetime& st, const GeodesicSolution& sol) {
  const double g = speed_squared(st, sol);
  return g < 0.0 ? std::sqrt(-g) * std::abs(sol.t_max) : 0.0;
}

bool is_timelike_future(const SmoothSpacetime& st, const Event& p, const Tangent& v) {
  return v[0] > 0.0 && st.inner(p, v, v) < -1e-12 * v.squaredNorm();
}

GeodesicSolution integrate_geodesic(const SmoothSpacetime& st, const Event& p, const Tangent& v, double t_max,
                                    int nodes, const IntegratorOptions& opts) {
  check_initial(st, p, v);
  if (!(t_max > 0.0)) throw DomainError("integrate_geodesic: t_max must be positive");
  const int n = st.dim();
  GeodesicSolution sol;
  sol.initial_point = p;
  sol.initial_velocity = v;
  sol.t_max = t_max;
  const auto times = uniform_grid(t_max, nodes);
  State y(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = p[i];
    y[static_cast<std::size_t>(n + i)] = v[i];
  }
  sol.meta = run_ode(st, false, y, times, opts, [&](const State& s, double t) {
    Event x(n);
    Tangent w(n);
    for (int i = 0; i < n; ++i) {
      x[i] = s[static_cast<std::size_t>(i)];
      w[i] = s[static_cast<std::size_t>(n + i)];
    }
    sol.grid.push_back(t);
    sol.positions.push_back(x);
    sol.velocities.push_back(w);
  });
  sol.meta.norm_drift = norm_drift(st, sol.positions, sol.velocities);
  const double g0 = std::abs(st.inner(p, v, v));
  if (sol.meta.norm_drift > opts.norm_tol * std::max(1.0, t_max) * std::max(1.0, g0))
    throw IntegratorError("integrate_geodesic: g(v, v) not conserved within tolerance");
  return sol;
}

GeodesicSolution trace_geodesic(const SmoothSpacetime& st, const Event& p, const Tangent& v, double t_max,
                                int nodes, const IntegratorOptions& opts) {
  if (!st.has_exact_flow()) return integrate_geodesic(st, p, v, t_max, nodes, opts);
  check_initial(st, p, v);
  GeodesicSolution sol;
  sol.initial_point = p;
  sol.initial_velocity = v;
  sol.t_max = t_max;
  sol.grid = uniform_grid(t_max, nodes);
  sol.meta.closed_form = true;
  for (double t : sol.grid) {
    const FlowState s = st.exact_flow(p, v, t);
    sol.positions.push_back(s.x);
    sol.velocities.push_back(s.v);
  }
  sol.meta.norm_drift = norm_drift(st, sol.positions, sol.velocities);
  return sol;
}

VariationalTrace integrate_variational(const SmoothSpacetime& st, const Event& p, const Tangent& v,
                                       const std::vector<double>& grid, const IntegratorOptions& opts) {
  check_initial(st, p, v);
  if (grid.size() < 2 || grid.front() != 0.0) throw DomainError("integrate_variational: grid must start at 0");
  const int n = st.dim();
  const std::size_t nn = static_cast<std::size_t>(n);
  VariationalTrace out;
  State y(2 * nn + 2 * nn * nn, 0.0);
  for (std::size_t i = 0; i < nn; ++i) {
    y[i] = p[static_cast<Eigen::Index>(i)];
    y[nn + i] = v[static_cast<Eigen::Index>(i)];
    y[2 * nn + nn * nn + i * nn + i] = 1.0;  // Z(0) = Id
  }
  out.meta = run_ode(st, true, y, grid, opts, [&](const State& s, double t) {
    Event x(n);
    Tangent w(n);
    Mat Y(n, n), Z(n, n);
    for (int i = 0; i < n; ++i) {
      x[i] = s[static_cast<std::size_t>(i)];
      w[i] = s[static_cast<std::size_t>(n + i)];
      for (int c = 0; c < n; ++c) {
        Y(i, c) = s[static_cast<std::size_t>(2 * n + i * n + c)];
        Z(i, c) = s[static_cast<std::size_t>(2 * n + n * n + i * n + c)];
      }
    }
    out.grid.push_back(t);
    out.positions.push_back(x);
    out.velocities.push_back(w);
    out.Y.push_back(Y);
    out.Z.push_back(Z);
  });
  out.meta.norm_drift = norm_drift(st, out.positions, out.velocities);
  return out;
}

ExpResult exponential(const SmoothSpacetime& st, const Event& p, const Tangent& v, bool with_jacobian,
                      bool allow_exact, const IntegratorOptions& opts) {
  ExpResult r;
  const int n = st.dim();
  if (!v.allFinite()) return r;
  if (allow_exact && st.has_exact_flow()) {
    r.x = st.exact_flow(p, v, 1.0).x;
    r.ok = r.x.allFinite();
    if (r.ok && with_jacobian) {
      r.jacobian.resize(n, n);
      const double h = 1e-6 * std::max(1.0, v.norm());
      for (int c = 0; c < n; ++c) {
        Tangent vp = v, vm = v;
        vp[c] += h;
        vm[c] -= h;
        r.jacobian.col(c) = (st.exact_flow(p, vp, 1.0).x - st.exact_flow(p, vm, 1.0).x) / (2.0 * h);
      }
    }
    return r;
  }
  try {
    if (with_jacobian) {
      const VariationalTrace tr = integrate_variational(st, p, v, {0.0, 1.0}, opts);
      if (tr.meta.exited_chart || tr.grid.size() != 2) return r;
      r.x = tr.positions.back();
      r.jacobian = tr.Y.back();
    } else {
      const int nodes = 2;
      const std::vector<double> times{0.0, 1.0};
      State y(static_cast<std::size_t>(2 * n));
      for (int i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = p[i];
        y[static_cast<std::size_t>(n + i)] = v[i];
      }
      int seen = 0;
      const IntegratorMeta meta = run_ode(st, false, y, times, opts, [&](const State& s, double) {
        if (++seen == nodes) {
          r.x.resize(n);
          for (int i = 0; i < n; ++i) r.x[i] = s[static_cast<std::size_t>(i)];
        }
      });
      if (meta.exited_chart || seen != nodes) return r;
    }
  } catch (const IntegratorError&) {
    return r;
  }
  r.ok = r.x.allFinite();
  return r;
}

std::vector<Tangent> seed_lattice(const SmoothSpacetime& st, const Event& p, const Tangent& reference,
                                  const ShootingOptions& opts) {
  const int n = st.dim();
  const Mat g = st.metric(p);
  const double gvv = reference.dot(g * reference);
  // Directions g-orthogonal to the reference, orthonormalized in the chart.
  std::vector<Vec> normals;
  for (int k = 0; k < n && static_cast<int>(normals.size()) < n - 1; ++k) {
    Vec w = Vec::Unit(n, k);
    if (std::abs(gvv) > 1e-14 * reference.squaredNorm()) {
      w -= (w.dot(g * reference) / gvv) * reference;
    } else {
      w -= (w.dot(reference) / reference.squaredNorm()) * reference;
    }
    for (const Vec& u : normals) w -= w.dot(u) * u;
    if (w.norm() < 1e-8) continue;
    normals.push_back(w.normalized());
  }
  std::vector<double> scales = opts.seed_scales;
  if (scales.empty()) {
    const int per_scale = 2 * static_cast<int>(normals.size());
    const int count = per_scale > 0 ? (opts.seeds + per_scale - 1) / per_scale : 0;
    for (int i = 0; i < count; ++i) scales.push_back(0.2 / std::pow(2.0, i));
  }
  std::vector<Tangent> seeds;
  const double size = reference.norm();
  for (double s : scales)
    for (const Vec& w : normals)
      for (double sign : {1.0, -1.0}) seeds.push_back(reference + sign * s * size * w);
  if (opts.seed_scales.empty() && static_cast<int>(seeds.size()) > opts.seeds)
    seeds.resize(static_cast<std::size_t>(std::max(0, opts.seeds)));
  return seeds;
}

std::optional<Tangent> shoot(const SmoothSpacetime& st, const Event& p, const Event& q, const Tangent& seed,
                             const ShootingOptions& opts) {
  Tangent v = seed;
  ExpResult r = exponential(st, p, v, true, opts.use_exact_flow, opts.integrator);
  if (!r.ok) return std::nullopt;
  double res = (r.x - q).norm();
  const double floor = 1e-14 * (1.0 + q.norm());
  const double blowup = 20.0 * (1.0 + seed.norm());
  for (int it = 0; it < opts.max_iterations && res > floor; ++it) {
    // Line-search trials are position-only; the Jacobian is recomputed once
    // per accepted step.
    if (r.jacobian.size() == 0) {
      r = exponential(st, p, v, true, opts.use_exact_flow, opts.integrator);
      if (!r.ok) break;
    }
    Eigen::JacobiSVD<Mat> svd(r.jacobian, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12);
    const Tangent dv = -svd.solve(Vec(r.x - q));
    if (!dv.allFinite()) break;
    bool accepted = false;
    double lam = 1.0;
    for (int ls = 0; ls < 12; ++ls, lam *= 0.5) {
      const Tangent trial = v + lam * dv;
      if (trial.norm() > blowup) continue;
      ExpResult rt = exponential(st, p, trial, false, opts.use_exact_flow, opts.integrator);
      if (!rt.ok) continue;
      const double rr = (rt.x - q).norm();
      if (rr < res) {
        v = trial;
        r = std::move(rt);
        res = rr;
        accepted = true;
        break;
      }
    }
    if (!accepted || v.norm() > blowup) break;
    if (lam * dv.norm() <= 1e-15 * v.norm()) break;
  }
  if (res > opts.residual_tol) return std::nullopt;
  if (res > floor) {
    if (r.jacobian.size() == 0) r = exponential(st, p, v, true, opts.use_exact_flow, opts.integrator);
    if (!r.ok) return std::nullopt;
    Eigen::JacobiSVD<Mat> svd(r.jacobian, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12);
    const Tangent dv = svd.solve(Vec(r.x - q));
    if (!dv.allFinite() || dv.norm() > opts.step_tol * (1.0 + v.norm())) return std::nullopt;
  }
  return v;
}

bool same_geodesic(const SmoothSpacetime& st, const Event& p, const Event& q, const Tangent& u, const Tangent& v,
                   const ShootingOptions& opts) {
  if ((u - v).norm() <= opts.dedup_tol * std::max(u.norm(), v.norm())) return true;
  for (double lam : {0.25, 0.5, 0.75}) {
    const ExpResult r = exponential(st, p, Tangent((1.0 - lam) * u + lam * v), false, opts.use_exact_flow,
                                    opts.integrator);
    if (!r.ok || (r.x - q).norm() > opts.merge_tol) return false;
  }
  return true;
}

std::vector<GeodesicSolution> solve_bvp(const SmoothSpacetime& st, const Event& p, const Event& q,
                                        const Tangent& reference, const ShootingOptions& opts) {
  st.check_domain(p);
  st.check_domain(q);
  if ((q - p).norm() == 0.0) throw DegenerateInputError("solve_bvp: p and q coincide");
  std::vector<Tangent> seeds{reference};
  for (Tangent& s : seed_lattice(st, p, reference, opts)) seeds.push_back(std::move(s));

  std::vector<std::pair<Tangent, Tangent>> found;  // (velocity, seed)
  for (const Tangent& seed : seeds) {
    const auto v = shoot(st, p, q, seed, opts);
    if (!v) continue;
    if (opts.timelike_only && !is_timelike_future(st, p, *v)) continue;
    bool duplicate = false;
    for (const auto& f : found) {
      if (same_geodesic(st, p, q, f.first, *v, opts)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) found.emplace_back(*v, seed);
    if (opts.max_solutions > 0 && static_cast<int>(found.size()) >= opts.max_solutions) break;
  }

  std::vector<GeodesicSolution> out;
  for (const auto& [v, seed] : found) {
    GeodesicSolution sol;
    try {
      sol = opts.use_exact_flow ? trace_geodesic(st, p, v, 1.0, opts.nodes, opts.integrator)
                                : integrate_geodesic(st, p, v, 1.0, opts.nodes, opts.integrator);
    } catch (const IntegratorError&) {
      continue;
    }
    if (sol.truncated()) continue;
    sol.seed = seed;
    out.push_back(std::move(sol));
  }
  std::sort(out.begin(), out.end(), [&](const GeodesicSolution& a, const GeodesicSolution& b) {
    const double la = lg_length(st, a), lb = lg_length(st, b);
    if (std::abs(la - lb) > 1e-12 * std::max(1.0, la)) return la > lb;
    const auto& va = a.initial_velocity;
    const auto& vb = b.initial_velocity;
    return std::lexicographical_compare(va.data(), va.data() + va.size(), vb.data(), vb.data() + vb.size());
  });
  return out;
}

std::vector<GeodesicSolution> solve_bvp(const SmoothSpacetime& st, const Event& p, const Event& q,
                                        const ShootingOptions& opts) {
  return solve_bvp(st, p, q, Tangent(q - p), opts);
}

double local_time_separation(const SmoothSpacetime& st, const Event& p, const Event& q, const Tangent& reference,
                             const ShootingOptions& opts) {
  if (auto exact = st.exact_time_separation(p, q)) return *exact;
  if ((q - p).norm() == 0.0) return 0.0;
  double best = 0.0;
  for (const auto& sol : solve_bvp(st, p, q, reference, opts)) best = std::max(best, lg_length(st, sol));
  return best;
}

bool local_maximizer_check(const SmoothSpacetime& st, const GeodesicSolution& sol, double window, double tol,
                           const ShootingOptions& opts) {
  const double T = sol.t_max;
  if (!(window > 0.0) || window > T * (1.0 + 1e-12))
    throw DomainError("local_maximizer_check: window must lie in (0, t_max]");
  if (!is_timelike_future(st, sol.initial_point, sol.initial_velocity))
    throw ClassificationError("local_maximizer_check: geodesic is not future timelike");
  std::vector<double> starts;
  for (double a = 0.0; a + window <= T * (1.0 + 1e-12); a += 0.5 * window) starts.push_back(std::min(a, T - window));
  if (starts.back() < T - window - 1e-12) starts.push_back(T - window);

  auto state_at = [&](double s) -> FlowState {
    if (s == 0.0) return {sol.initial_point, sol.initial_velocity};
    if (st.has_exact_flow()) return st.exact_flow(sol.initial_point, sol.initial_velocity, s);
    const GeodesicSolution seg = integrate_geodesic(st, sol.initial_point, sol.initial_velocity, s, 2, opts.integrator);
    return {seg.positions.back(), seg.velocities.back()};
  };
  for (double a : starts) {
    const FlowState s0 = state_at(a);
    const FlowState s1 = state_at(a + window);
    const Tangent v = s0.v * window;
    const double g = st.inner(s0.x, v, v);
    const double L = g < 0.0 ? std::sqrt(-g) : 0.0;
    const double tau = local_time_separation(st, s0.x, s1.x, v, opts);
    if (!(std::abs(L - tau) <= tol * std::max(1.0, L))) return false;
  }
  return true;
}

ConvergenceReport convergence_experiment(const SmoothSpacetime& st, const std::vector<GeodesicSolution>& family,
                                         const GeodesicSolution& limit, double threshold, double extension) {
  ConvergenceReport rep;
  rep.threshold = threshold;
  rep.extension = extension;
  constexpr int kNodes = 65;
  // Samples on [-extension, t_max + extension].
  auto extended = [&](const GeodesicSolution& s) {
    const double T = s.t_max;
    const auto fwd = trace_geodesic(st, s.initial_point, s.initial_velocity, T + extension * T, kNodes);
    const auto bwd = trace_geodesic(st, s.initial_point, Tangent(-s.initial_velocity), extension * T, 9);
    std::vector<Event> pts(bwd.positions.rbegin(), bwd.positions.rend() - 1);
    pts.insert(pts.end(), fwd.positions.begin(), fwd.positions.end());
    return pts;
  };
  const auto ref = extended(limit);
  for (const auto& member : family) {
    const auto pts = extended(member);
    double sup = 0.0;
    for (std::size_t i = 0; i < std::min(pts.size(), ref.size()); ++i) sup = std::max(sup, (pts[i] - ref[i]).norm());
    rep.c0.push_back(sup);
    rep.velocity.push_back(std::sqrt((member.initial_point - limit.initial_point).squaredNorm() +
                                     (member.initial_velocity - limit.initial_velocity).squaredNorm()));
    rep.dgamma.push_back(d_gamma(st, member, limit));
  }
  auto converges = [&](const std::vector<double>& s) { return !s.empty() && s.back() <= threshold; };
  rep.c0_converges = converges(rep.c0);
  rep.velocity_converges = converges(rep.velocity);
  rep.dgamma_converges = converges(rep.dgamma);
  rep.consistent = rep.c0_converges == rep.velocity_converges && rep.velocity_converges == rep.dgamma_converges;
  const double speed = std::sqrt(std::max(0.0, -speed_squared(st, limit)));
  double window = limit.t_max;
  if (speed > 0.0) window = std::min(window, st.convexity_window() / speed);
  try {
    rep.limit_is_geodesic = local_maximizer_check(st, limit, window);
  } catch (const Error&) {
    rep.limit_is_geodesic = false;
  }
  return rep;
}

}  // namespace lorentz
