#include "lorentz/conjugate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "lorentz/frechet.hpp"
#include "lorentz/parallel.hpp"

namespace lorentz {
namespace {

// Initial velocity of sol rescaled to the parameter interval [0, 1].
Tangent unit_interval_velocity(const GeodesicSolution& sol) { return sol.initial_velocity * sol.t_max; }

void require_timelike(const SmoothSpacetime& st, const GeodesicSolution& sol, const char* who) {
  if (sol.positions.empty() || !is_timelike_future(st, sol.initial_point, sol.initial_velocity))
    throw PreconditionError(std::string(who) + ": geodesic must be future timelike");
}

// Basis of the g-orthogonal complement of v at p, orthonormal in the chart.
Mat normal_complement(const SmoothSpacetime& st, const Event& p, const Tangent& v) {
  const int n = st.dim();
  const Mat g = st.metric(p);
  const double gvv = v.dot(g * v);
  Mat out(n, n - 1);
  int found = 0;
  for (int k = 0; k < n && found < n - 1; ++k) {
    Vec w = Vec::Unit(n, k);
    w -= (w.dot(g * v) / gvv) * v;
    for (int j = 0; j < found; ++j) w -= w.dot(out.col(j)) * Vec(out.col(j));
    if (w.norm() < 1e-8) continue;
    out.col(found++) = w.normalized();
  }
  return out;
}

double normalized_det(const Mat& Y, double t) { return Y.determinant() / std::pow(t, static_cast<double>(Y.rows())); }

double scaled_sigma_min(const Mat& Y, double t) {
  Eigen::JacobiSVD<Mat> svd(Y);
  return svd.singularValues()(Y.rows() - 1) / t;
}


std::vector<GeodesicSolution> solve_quiet(const SmoothSpacetime& st, const Event& p, const Event& q,
                                          const Tangent& reference, const ShootingOptions& opts) {
  try {
    if (!st.in_domain(p) || !st.in_domain(q) || (q - p).norm() == 0.0) return {};
    return solve_bvp(st, p, q, reference, opts);
  } catch (const Error&) {
    return {};
  }
}

// Offsets {0, +-eps e_k}; the zero offset comes first.
std::vector<Vec> ring_offsets(int n, double eps) {
  std::vector<Vec> out{Vec::Zero(n)};
  for (int k = 0; k < n; ++k)
    for (double sign : {1.0, -1.0}) out.push_back(sign * eps * Vec::Unit(n, k));
  return out;
}

struct PairOutcome {
  double deviation = kInf;
  std::optional<Witness> witness;
};

// Best pair of distinct solutions close to gamma between p and q.
PairOutcome best_pair(const SmoothSpacetime& st, const GeodesicSolution& gamma, const Event& p, const Event& q,
                      const ShootingOptions& opts, const DetectorConfig& cfg) {
  PairOutcome out;
  const Tangent ref = unit_interval_velocity(gamma) + (q - gamma.endpoint()) - (p - gamma.initial_point);
  const auto sols = solve_quiet(st, p, q, ref, opts);
  if (sols.size() < 2) return out;
  std::vector<double> dg(sols.size());
  for (std::size_t i = 0; i < sols.size(); ++i) dg[i] = d_gamma(st, sols[i], gamma);
  for (std::size_t i = 0; i < sols.size(); ++i)
    for (std::size_t j = i + 1; j < sols.size(); ++j) {
      const double m = std::max(dg[i], dg[j]);
      if (m >= out.deviation) continue;
      if (discrete_frechet(sols[i].positions, sols[j].positions) <= cfg.distinct_tol) continue;
      Witness w;
      w.p = p;
      w.q = q;
      w.seed_a = sols[i].seed;
      w.seed_b = sols[j].seed;
      w.velocity_a = sols[i].initial_velocity;
      w.velocity_b = sols[j].initial_velocity;
      w.dgamma_a = dg[i];
      w.dgamma_b = dg[j];
      out.deviation = m;
      out.witness = w;
    }
  return out;
}

// Runs the ring schedule over endpoint pairs produced by `pairs(eps)`.
DetectorResult ring_search(const SmoothSpacetime& st, const GeodesicSolution& gamma, const DetectorConfig& cfg,
                           const std::function<std::vector<std::pair<Event, Event>>(double)>& pairs) {
  DetectorResult res;
  for (int i = 0; i < cfg.rings; ++i) {
    const double eps = cfg.eps0 / std::pow(2.0, i);
    const double delta = cfg.delta0 / std::pow(2.0, i);
    res.eps.push_back(eps);
    res.delta.push_back(delta);
    ShootingOptions opts = cfg.shooting;
    opts.seed_scales = seed_ladder(delta, cfg.max_seed_scale);
    const auto targets = pairs(eps);
    // Chunks of `workers` targets; the first target (in index order) whose
    // pair is within delta decides the ring, which keeps the outcome
    // independent of the worker count.
    const std::size_t chunk = static_cast<std::size_t>(std::max(1, cfg.workers));
    PairOutcome best;
    bool decided = false;
    for (std::size_t start = 0; start < targets.size() && !decided; start += chunk) {
      const std::size_t count = std::min(chunk, targets.size() - start);
      const auto outcomes = parallel_map<PairOutcome>(count, cfg.workers, [&](std::size_t k) {
        return best_pair(st, gamma, targets[start + k].first, targets[start + k].second, opts, cfg);
      });
      for (const auto& o : outcomes) {
        if (o.deviation <= delta) {
          best = o;
          decided = true;
          break;
        }
        if (o.deviation < best.deviation) best = o;
      }
    }
    res.deviation.push_back(best.deviation);
    if (best.witness) {
      best.witness->ring = i;
      res.witnesses.push_back(*best.witness);
    }
    if (!std::isfinite(best.deviation)) break;  // no witness: the flag is false at this resolution
  }
  res.flag = static_cast<int>(res.deviation.size()) == cfg.rings && deviations_converge(res.deviation, res.eps, res.delta, cfg);
  return res;
}

// solve_bvp sorts by decreasing length, so the first solution is the
// maximizing member.
std::optional<GeodesicSolution> longest(std::vector<GeodesicSolution> sols) {
  if (sols.empty()) return std::nullopt;
  return std::move(sols.front());
}

}  // namespace

std::vector<double> seed_ladder(double delta, double max_scale) {
  std::vector<double> scales;
  for (double s = 0.5 * delta; s <= max_scale * (1.0 + 1e-12); s *= std::numbers::sqrt2) scales.push_back(s);
  if (scales.empty()) scales.push_back(max_scale);
  return scales;
}

Mat propagator(const SmoothSpacetime& st, const Event& p, const Tangent& v, double t, const IntegratorOptions& opts) {
  const int n = st.dim();
  if (t == 0.0) return Mat::Zero(n, n);
  if (st.has_exact_flow()) {
    Mat Y(n, n);
    const double h = 1e-6 * std::max(1.0, v.norm());
    for (int c = 0; c < n; ++c) {
      Tangent vp = v, vm = v;
      vp[c] += h;
      vm[c] -= h;
      Y.col(c) = (st.exact_flow(p, vp, t).x - st.exact_flow(p, vm, t).x) / (2.0 * h);
    }
    return Y;
  }
  const VariationalTrace tr = integrate_variational(st, p, v, {0.0, t}, opts);
  if (tr.meta.exited_chart || tr.Y.size() != 2) throw IntegratorError("propagator: geodesic left the chart");
  return tr.Y.back();
}

JacobiSystem jacobi_system(const SmoothSpacetime& st, const GeodesicSolution& sol, double t_end, int samples,
                           const IntegratorOptions& opts) {
  if (samples < 2) throw DomainError("jacobi_system: at least two samples required");
  if (!(t_end > 0.0)) throw DomainError("jacobi_system: scan length must be positive");
  const Event& p = sol.initial_point;
  const Tangent& v = sol.initial_velocity;
  JacobiSystem sys;
  sys.base = sol;
  sys.normal_basis = normal_complement(st, p, v);
  for (int i = 0; i <= samples; ++i) sys.grid.push_back(t_end * i / samples);
  if (st.has_exact_flow()) {
    for (double t : sys.grid) sys.Y.push_back(propagator(st, p, v, t, opts));
    return sys;
  }
  VariationalTrace tr = integrate_variational(st, p, v, sys.grid, opts);
  if (tr.meta.exited_chart) throw IntegratorError("jacobi_system: geodesic left the chart");
  sys.Y = std::move(tr.Y);
  sys.Z = std::move(tr.Z);
  return sys;
}

std::vector<double> jacobi_scan(const SmoothSpacetime& st, const GeodesicSolution& sol, const JacobiScanOptions& opts) {
  require_timelike(st, sol, "jacobi_scan");
  const double t_end = opts.t_end > 0.0 ? opts.t_end : sol.t_max;
  const JacobiSystem sys = jacobi_system(st, sol, t_end, opts.samples, opts.integrator);
  const Event& p = sol.initial_point;
  const Tangent& v = sol.initial_velocity;
  auto det_at = [&](double t) { return normalized_det(propagator(st, p, v, t, opts.integrator), t); };
  auto sig_at = [&](double t) { return scaled_sigma_min(propagator(st, p, v, t, opts.integrator), t); };

  const std::size_t m = sys.grid.size();
  std::vector<double> D(m, 0.0), S(m, 0.0), scale(m, 1.0);
  for (std::size_t i = 1; i < m; ++i) {
    const double t = sys.grid[i];
    D[i] = normalized_det(sys.Y[i], t);
    Eigen::JacobiSVD<Mat> svd(sys.Y[i]);
    S[i] = svd.singularValues()(sys.Y[i].rows() - 1) / t;
    scale[i] = std::max(1.0, svd.singularValues()(0) / t);
  }

  std::vector<double> roots;
  std::vector<bool> bracketed(m, false);
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (D[i] == 0.0) {
      roots.push_back(sys.grid[i]);
      bracketed[i] = true;
      continue;
    }
    if (D[i] * D[i + 1] >= 0.0) continue;
    double a = sys.grid[i], b = sys.grid[i + 1], fa = D[i];
    while (b - a > opts.tol) {
      const double c = 0.5 * (a + b);
      const double fc = det_at(c);
      if (fc == 0.0) {
        a = b = c;
        break;
      }
      if ((fc < 0.0) == (fa < 0.0)) {
        a = c;
        fa = fc;
      } else {
        b = c;
      }
    }
    roots.push_back(0.5 * (a + b));
    bracketed[i] = bracketed[i + 1] = true;
  }

  // Even multiplicity: the determinant touches zero without changing sign.
  constexpr double kGolden = 0.6180339887498949;
  for (std::size_t i = 2; i + 1 < m; ++i) {
    if (bracketed[i - 1] || bracketed[i] || bracketed[i + 1]) continue;
    if (!(S[i] <= S[i - 1] && S[i] <= S[i + 1]) || S[i] > 0.05 * scale[i]) continue;
    double a = sys.grid[i - 1], b = sys.grid[i + 1];
    double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
    double fc = sig_at(c), fd = sig_at(d);
    while (b - a > opts.tol) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kGolden * (b - a);
        fc = sig_at(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kGolden * (b - a);
        fd = sig_at(d);
      }
    }
    const double t = 0.5 * (a + b);
    if (sig_at(t) <= 1e-4 * scale[i]) roots.push_back(t);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

bool deviations_converge(const std::vector<double>& deviation, const std::vector<double>& eps,
                         const std::vector<double>& delta, const DetectorConfig& cfg) {
  if (deviation.empty() || deviation.size() != eps.size() || deviation.size() != delta.size()) return false;
  for (double m : deviation)
    if (!std::isfinite(m)) return false;
  if (deviation.back() <= delta.back()) return true;
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(2, cfg.tail)), deviation.size());
  if (k < 2) return false;
  const std::size_t first = deviation.size() - k;
  for (std::size_t i = first + 1; i < deviation.size(); ++i)
    if (!(deviation[i] < deviation[i - 1])) return false;
  if (deviation[first] <= 0.0 || deviation.back() <= 0.0) return true;
  const double slope = std::log(deviation.back() / deviation[first]) / std::log(eps.back() / eps[first]);
  return slope >= cfg.min_slope;
}

DetectorResult one_sided_search(const SmoothSpacetime& st, const GeodesicSolution& sol, const DetectorConfig& cfg) {
  require_timelike(st, sol, "one_sided_search");
  const Event p = sol.initial_point;
  const Event q = sol.endpoint();
  return ring_search(st, sol, cfg, [&](double eps) {
    std::vector<std::pair<Event, Event>> out;
    for (const Vec& b : ring_offsets(st.dim(), eps)) out.emplace_back(p, Event(q + b));
    return out;
  });
}

DetectorResult symmetric_search(const SmoothSpacetime& st, const GeodesicSolution& sol, const DetectorConfig& cfg) {
  // Fixing p_i = p gives a one-sided witness; those pairs are tried first.
  DetectorResult fixed = one_sided_search(st, sol, cfg);
  if (fixed.flag) return fixed;
  const Event p = sol.initial_point;
  const Event q = sol.endpoint();
  return ring_search(st, sol, cfg, [&](double eps) {
    std::vector<std::pair<Event, Event>> out;
    const auto offsets = ring_offsets(st.dim(), eps);
    for (std::size_t a = 1; a < offsets.size(); ++a)
      for (const Vec& b : offsets) out.emplace_back(Event(p + offsets[a]), Event(q + b));
    return out;
  });
}

double replay_witness(const SmoothSpacetime& st, const Witness& w, const ShootingOptions& opts) {
  const auto a = shoot(st, w.p, w.q, w.seed_a, opts);
  const auto b = shoot(st, w.p, w.q, w.seed_b, opts);
  if (!a || !b) return kInf;
  return std::max((*a - w.velocity_a).norm(), (*b - w.velocity_b).norm());
}

TimelikeFamily build_family(const SmoothSpacetime& st, const GeodesicSolution& sol, const FamilyGrid& grid,
                            const DetectorConfig& cfg) {
  require_timelike(st, sol, "build_family");
  const int n = st.dim();
  const Event p = sol.initial_point;
  const Event q = sol.endpoint();
  const Tangent v = unit_interval_velocity(sol);

  // Center: exactly one maximizer, and it is sol.
  ShootingOptions center_opts = cfg.shooting;
  center_opts.seed_scales = seed_ladder(cfg.delta0, cfg.max_seed_scale);
  const auto center = solve_quiet(st, p, q, v, center_opts);
  if (center.empty()) throw PreconditionError("build_family: no connecting geodesic at the center");
  double tau = lg_length(st, center.front());
  if (auto exact = st.exact_time_separation(p, q)) tau = *exact;
  if (!std::isfinite(tau)) throw PreconditionError("build_family: endpoints are not joined by a maximizer");
  const double tol = 1e-6 * std::max(1.0, tau);
  int maximizers = 0;
  for (const auto& s : center)
    if (std::abs(lg_length(st, s) - tau) <= tol) ++maximizers;
  if (maximizers != 1) throw PreconditionError("build_family: maximizer at the center is not unique");
  if (d_gamma(st, center.front(), sol) > 1e3 * cfg.distinct_tol)
    throw PreconditionError("build_family: geodesic is not the maximizer between its endpoints");
  if (!local_maximizer_check(st, center.front(), center.front().t_max, 1e-6, center_opts))
    throw PreconditionError("build_family: geodesic fails the maximizer check");

  TimelikeFamily fam;
  fam.center = center.front();
  std::vector<double> axis;
  for (int k = 0; k < grid.per_axis; ++k)
    axis.push_back(grid.per_axis == 1 ? 0.0 : -grid.radius + 2.0 * grid.radius * k / (grid.per_axis - 1));
  std::vector<Vec> offsets{Vec::Zero(n)};
  for (int d = 0; d < n; ++d) {
    std::vector<Vec> next;
    for (const Vec& o : offsets)
      for (double a : axis) {
        Vec w = o;
        w[d] = a;
        next.push_back(w);
      }
    offsets = std::move(next);
  }
  for (const Vec& o : offsets) {
    fam.grid_u.push_back(p + o);
    fam.grid_v.push_back(q + o);
  }

  // Nodes use the same ladder as the center so that maximizers leaving gamma
  // through a caustic are still found.
  const ShootingOptions& node_opts = center_opts;
  auto member = [&](const Event& a, const Event& b) {
    const Tangent ref = v + (b - q) - (a - p);
    return longest(solve_quiet(st, a, b, ref, node_opts));
  };

  const std::size_t nu = fam.grid_u.size(), nv = fam.grid_v.size();
  fam.nodes = parallel_map<FamilyNode>(nu * nv, grid.workers, [&](std::size_t k) {
    FamilyNode node;
    node.p = fam.grid_u[k / nv];
    node.q = fam.grid_v[k % nv];
    if (auto g = member(node.p, node.q)) {
      node.ok = true;
      node.geodesic = std::move(*g);
    }
    return node;
  });
  for (const auto& node : fam.nodes)
    if (!node.ok) ++fam.missing;

  std::vector<double> delta;
  for (int j = 0; j < grid.rings; ++j) {
    const double r = grid.radius / std::pow(2.0, j);
    fam.ring_radius.push_back(r);
    delta.push_back(cfg.delta0 / std::pow(2.0, j));
    const auto ring = ring_offsets(n, r);
    std::vector<std::pair<Event, Event>> pairs;
    for (const Vec& a : ring)
      for (const Vec& b : ring)
        if (a.norm() + b.norm() > 0.0) pairs.emplace_back(Event(p + a), Event(q + b));
    const auto dev = parallel_map<double>(pairs.size(), grid.workers, [&](std::size_t k) {
      const auto g = member(pairs[k].first, pairs[k].second);
      return g ? d_gamma(st, *g, fam.center) : kInf;
    });
    fam.continuity.push_back(*std::max_element(dev.begin(), dev.end()));
  }
  fam.continuous = deviations_converge(fam.continuity, fam.ring_radius, delta, cfg);
  return fam;
}

EmbeddabilityResult embeddability_check(const SmoothSpacetime& st, const GeodesicSolution& sol,
                                        const DetectorConfig& cfg, EmbeddingScheme scheme) {
  require_timelike(st, sol, "embeddability_check");
  const Event p = sol.initial_point;
  const Event q = sol.endpoint();
  const Tangent v = unit_interval_velocity(sol);
  EmbeddabilityResult res;
  std::vector<double> delta;

  if (scheme != EmbeddingScheme::rings) {
    // A second geodesic sigma between the same endpoints, the farthest one
    // within a few closeness radii of gamma.
    ShootingOptions opts = cfg.shooting;
    opts.seed_scales = seed_ladder(cfg.delta0, cfg.max_seed_scale);
    double best = 0.0;
    for (auto& s : solve_quiet(st, p, q, v, opts)) {
      const double df = discrete_frechet(s.positions, sol.positions);
      if (df <= cfg.distinct_tol || d_gamma(st, s, sol) > 2.5 * cfg.delta0) continue;
      if (df > best) {
        best = df;
        res.neighbor = std::move(s);
      }
    }
  }

  if (res.neighbor) {
    res.scheme = "neighbor";
    const GeodesicSolution& sigma = *res.neighbor;
    const Tangent w = unit_interval_velocity(sigma);
    for (int i = 0; i < cfg.rings; ++i) {
      const double eps = cfg.eps0 / std::pow(2.0, i);
      res.eps.push_back(eps);
      delta.push_back(cfg.delta0 / std::pow(2.0, i));
      const double lam = std::min(0.25, eps / w.norm());
      const Event a = trace_geodesic(st, p, w, lam, 2, cfg.shooting.integrator).endpoint();
      const Event b = trace_geodesic(st, p, w, 1.0 - lam, 2, cfg.shooting.integrator).endpoint();
      ShootingOptions opts = cfg.shooting;
      opts.seed_scales = seed_ladder(delta.back(), cfg.max_seed_scale);
      double m = kInf;
      for (const auto& s : solve_quiet(st, a, b, Tangent(w * (1.0 - 2.0 * lam)), opts))
        m = std::min(m, d_gamma(st, s, sol));
      res.deviation.push_back(m);
    }
  } else if (scheme == EmbeddingScheme::neighbor) {
    res.scheme = "neighbor";
    return res;  // no second geodesic: nothing witnesses unreachability
  } else {
    res.scheme = "rings";
    ShootingOptions direct = cfg.shooting;
    direct.seeds = 0;
    direct.seed_scales.clear();
    for (int i = 0; i < cfg.rings; ++i) {
      const double eps = cfg.eps0 / std::pow(2.0, i);
      res.eps.push_back(eps);
      delta.push_back(cfg.delta0 / std::pow(2.0, i));
      // Only existence matters here: the ladder stops at its first solution,
      // smallest seed offsets first.
      ShootingOptions ladder = cfg.shooting;
      ladder.seed_scales = seed_ladder(delta.back(), cfg.max_seed_scale);
      ladder.max_solutions = 1;
      const auto offsets = ring_offsets(st.dim(), eps);
      std::vector<std::pair<Event, Event>> pairs;
      for (const Vec& a : offsets)
        for (const Vec& b : offsets) pairs.emplace_back(Event(p + a), Event(q + b));
      const auto nearest = parallel_map<double>(pairs.size(), cfg.workers, [&](std::size_t k) {
        const auto& [a, b] = pairs[k];
        const Tangent ref = v + (b - q) - (a - p);
        auto sols = solve_quiet(st, a, b, ref, direct);
        if (sols.empty()) sols = solve_quiet(st, a, b, ref, ladder);
        double m = kInf;
        for (const auto& s : sols) m = std::min(m, d_gamma(st, s, sol));
        return m;
      });
      res.deviation.push_back(*std::max_element(nearest.begin(), nearest.end()));
      if (!std::isfinite(res.deviation.back())) break;
    }
  }
  res.unreachable = !(static_cast<int>(res.deviation.size()) == cfg.rings &&
                      deviations_converge(res.deviation, res.eps, delta, cfg));
  return res;
}

ConjugateReport classify(const SmoothSpacetime& st, const GeodesicSolution& sol, const ClassifyConfig& cfg) {
  require_timelike(st, sol, "classify");
  ConjugateReport rep;
  JacobiScanOptions jopts = cfg.jacobi;
  if (!(jopts.t_end > 0.0)) jopts.t_end = sol.t_max * 1.01;
  rep.jacobi_parameters = jacobi_scan(st, sol, jopts);
  for (double t : rep.jacobi_parameters)
    if (std::abs(t - sol.t_max) <= cfg.endpoint_tol * sol.t_max) rep.jacobi = true;
  rep.one_sided_result = one_sided_search(st, sol, cfg.detector);
  rep.one_sided = rep.one_sided_result.flag;
  rep.symmetric_result = rep.one_sided ? rep.one_sided_result : symmetric_search(st, sol, cfg.detector);
  rep.symmetric = rep.symmetric_result.flag;
  rep.embeddability = embeddability_check(st, sol, cfg.detector, cfg.scheme);
  rep.unreachable = rep.embeddability.unreachable;
  rep.ultimate = rep.unreachable || rep.symmetric;
  rep.consistent = rep.jacobi == rep.one_sided && rep.one_sided == rep.symmetric;
  if (!rep.consistent)
    rep.notes.push_back("jacobi, one-sided and symmetric detectors disagree; treated as a resolution artifact");
  if (rep.unreachable && !rep.jacobi)
    rep.notes.push_back("unreachable without a Jacobi conjugate parameter at the endpoint");
  return rep;
}

namespace {

enum class NodeStatus { unique, cut, none };

struct TargetEval {
  double tau = 0.0;
  int maximizers = 0;
};

TargetEval evaluate_target(const SmoothSpacetime& st, const Event& p, const Event& q, const Tangent& ref,
                           const CutScanOptions& opts) {
  TargetEval out;
  const auto sols = solve_quiet(st, p, q, ref, opts.shooting);
  double tau = 0.0;
  if (auto exact = st.exact_time_separation(p, q)) {
    tau = *exact;
  } else {
    for (const auto& s : sols) tau = std::max(tau, lg_length(st, s));
  }
  out.tau = tau;
  if (!std::isfinite(tau) || !(tau > 0.0)) return out;
  const double tol = opts.maximizer_tol * std::max(1.0, tau);
  for (const auto& s : sols)
    if (std::abs(lg_length(st, s) - tau) <= tol) ++out.maximizers;
  return out;
}

NodeStatus status_of(int maximizers) {
  if (maximizers == 1) return NodeStatus::unique;
  return maximizers >= 2 ? NodeStatus::cut : NodeStatus::none;
}

// Unit future timelike vector of rapidity r in an orthonormal frame at p.
Tangent frame_direction(const SmoothSpacetime& st, const Event& p, double r) {
  const int n = st.dim();
  const Mat g = st.metric(p);
  Tangent e0 = Vec::Unit(n, 0);
  const double g00 = e0.dot(g * e0);
  if (!(g00 < 0.0)) throw DomainError("cut_scan: coordinate time direction is not timelike");
  e0 /= std::sqrt(-g00);
  Tangent e1 = Vec::Unit(n, 1);
  e1 += e1.dot(g * e0) * e0;
  e1 /= std::sqrt(e1.dot(g * e1));
  return std::cosh(r) * e0 + std::sinh(r) * e1;
}

}  // namespace

CutScan cut_scan(const SmoothSpacetime& st, const Event& p, const std::vector<double>& param_grid,
                 const CutScanOptions& opts) {
  st.check_domain(p);
  std::vector<double> grid = param_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::remove_if(grid.begin(), grid.end(), [](double s) { return !(s > 0.0); }), grid.end());
  CutScan scan;
  scan.p = p;
  struct Job {
    double r, s;
    Tangent u;
  };
  std::vector<Job> jobs;
  for (double r : opts.rapidities) {
    const Tangent u = frame_direction(st, p, r);
    for (double s : grid) jobs.push_back({r, s, u});
  }
  auto endpoint = [&](const Tangent& u, double s) -> std::optional<Event> {
    try {
      const auto g = trace_geodesic(st, p, u, s, 2, opts.shooting.integrator);
      if (g.truncated()) return std::nullopt;
      return g.endpoint();
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  scan.targets = parallel_map<CutTarget>(jobs.size(), opts.workers, [&](std::size_t k) {
    CutTarget t;
    t.rapidity = jobs[k].r;
    t.param = jobs[k].s;
    const auto q = endpoint(jobs[k].u, jobs[k].s);
    if (!q) return t;
    t.q = *q;
    const TargetEval e = evaluate_target(st, p, *q, Tangent(jobs[k].u * jobs[k].s), opts);
    t.tau = e.tau;
    t.maximizers = e.maximizers;
    t.cut = e.maximizers >= 2;
    return t;
  });

  for (std::size_t d = 0; d < opts.rapidities.size(); ++d) {
    CutDirection dir;
    dir.rapidity = opts.rapidities[d];
    const Tangent u = frame_direction(st, p, dir.rapidity);
    std::optional<double> last_unique;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const CutTarget& t = scan.targets[d * grid.size() + k];
      if (t.q.size() == 0) break;
      const NodeStatus s = status_of(t.maximizers);
      if (s == NodeStatus::unique) {
        last_unique = t.param;
        continue;
      }
      if (s == NodeStatus::cut) {
        dir.initial_cut_param = t.param;
        dir.initial_cut_point = t.q;
      } else if (last_unique) {
        // Uniqueness is lost between two nodes: bisect for the transition.
        double a = *last_unique, b = t.param;
        while (b - a > 1e-6 * b) {
          const double c = 0.5 * (a + b);
          const auto q = endpoint(u, c);
          if (!q) {
            b = c;
            continue;
          }
          const TargetEval e = evaluate_target(st, p, *q, Tangent(u * c), opts);
          if (status_of(e.maximizers) == NodeStatus::unique)
            a = c;
          else
            b = c;
        }
        dir.initial_cut_param = b;
        dir.initial_cut_point = endpoint(u, b);
        dir.bisected = true;
      }
      break;
    }
    if (dir.initial_cut_point)
      scan.initial_cut_distance = std::min(scan.initial_cut_distance, (*dir.initial_cut_point - p).norm());
    scan.directions.push_back(std::move(dir));
  }
  return scan;
}

InjectivityReport injectivity_radii(const SmoothSpacetime& st, const std::vector<Event>& sample_points,
                                    const std::vector<double>& param_grid, const std::vector<double>& radius_grid,
                                    const CutScanOptions& opts) {
  if (radius_grid.empty()) throw DomainError("injectivity_radii: empty radius grid");
  InjectivityReport rep;
  double first_failure = kInf;
  for (const Event& p : sample_points) {
    CutScan scan = cut_scan(st, p, param_grid, opts);
    rep.ini_inj.push_back(scan.initial_cut_distance);
    rep.ini_inj_space = std::min(rep.ini_inj_space, scan.initial_cut_distance);
    for (const auto& t : scan.targets)
      if (t.q.size() > 0 && t.maximizers != 1) first_failure = std::min(first_failure, (t.q - p).norm());
    rep.scans.push_back(std::move(scan));
  }
  std::vector<double> radii = radius_grid;
  std::sort(radii.begin(), radii.end());
  rep.resolution = radii.front();
  for (std::size_t i = 1; i < radii.size(); ++i) rep.resolution = std::max(rep.resolution, radii[i] - radii[i - 1]);
  if (std::isinf(first_failure)) {
    rep.unique_inj_space = kInf;
  } else {
    rep.unique_inj_space = 0.0;
    for (double r : radii)
      if (r < first_failure) rep.unique_inj_space = r;
  }
  if (std::isinf(rep.ini_inj_space) && std::isinf(rep.unique_inj_space))
    rep.gap = 0.0;
  else
    rep.gap = std::abs(rep.ini_inj_space - rep.unique_inj_space);
  rep.consistent = rep.gap <= rep.resolution;
  return rep;
}

}  // namespace lorentz
