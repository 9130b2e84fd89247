#include "lorentz/comparison.hpp"

#include <algorithm>
#include <cmath>

#include "lorentz/frechet.hpp"
#include "lorentz/parallel.hpp"

namespace lorentz {
namespace {

std::array<int, 2> side_ends(Side s) {
  switch (s) {
    case Side::xy:
      return {0, 1};
    case Side::yz:
      return {1, 2};
    default:
      return {0, 2};
  }
}

int side_index(Side s) { return s == Side::xy ? 0 : (s == Side::yz ? 1 : 2); }

int third_vertex(Side s) {
  const auto e = side_ends(s);
  return 3 - e[0] - e[1];
}

TauFunction tau_or_default(const PreLengthSpace& space, const TauFunction& tau) {
  if (tau) return tau;
  return [&space](const Event& a, const Event& b) { return space.time_separation(a, b); };
}

// Ambient geometry of a model plane: points, unit geodesic velocities and
// b-orthonormal frames. For K = 0 the ambient space is the chart and points
// enter frame coordinates relative to a base point.
class Plane {
 public:
  explicit Plane(const ModelSpace& m) : m_(m), K_(m.curvature()), R_(m.radius()) {}

  AmbientVec point(const Event& x) const { return m_.to_ambient(x); }
  double b(const AmbientVec& u, const AmbientVec& w) const { return m_.b(u, w); }

  // Unit initial velocity of the geodesic from A to B of length L.
  AmbientVec start_velocity(const AmbientVec& A, const AmbientVec& B, double L) const {
    if (K_ == 0.0) return (B - A) / L;
    return (B - C(L) * A) / S(L);
  }
  // Unit velocity on arrival at B.
  AmbientVec end_velocity(const AmbientVec& A, const AmbientVec& B, double L) const {
    const AmbientVec W = start_velocity(A, B, L);
    if (K_ == 0.0) return W;
    const double dC = K_ < 0.0 ? -std::sin(L / R_) / R_ : std::sinh(L / R_) / R_;
    return dC * A + C(L) * W;
  }

  // b-unit spacelike vector tangent at P and orthogonal to the unit
  // timelike tangent u.
  AmbientVec normal(const AmbientVec& P, const AmbientVec& u) const {
    const int n = static_cast<int>(P.size());
    std::vector<AmbientVec> basis{u};
    if (K_ != 0.0) basis.push_back(P);
    AmbientVec best;
    double best_norm = -1.0;
    for (int k = 0; k < n; ++k) {
      AmbientVec w = AmbientVec::Unit(n, k);
      for (const auto& f : basis) w -= (b(w, f) / b(f, f)) * f;
      const double q = b(w, w);
      if (q > best_norm) {
        best_norm = q;
        best = w;
      }
    }
    return best / std::sqrt(best_norm);
  }

 private:
  double C(double L) const { return K_ < 0.0 ? std::cos(L / R_) : std::cosh(L / R_); }
  double S(double L) const { return K_ < 0.0 ? R_ * std::sin(L / R_) : R_ * std::sinh(L / R_); }

  const ModelSpace& m_;
  double K_;
  double R_;
};

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

TimelikeTriangle make_triangle(std::shared_ptr<const PreLengthSpace> space, const Event& x, const Event& y,
                               const Event& z, int samples, const TauFunction& tau_in, double tol) {
  if (!space) throw DomainError("make_triangle: missing space");
  if (samples < 1) throw DomainError("make_triangle: at least one segment per side required");
  const TauFunction tau = tau_or_default(*space, tau_in);
  TimelikeTriangle t;
  t.x = x;
  t.y = y;
  t.z = z;
  const double a = tau(x, y), b = tau(y, z), c = tau(x, z);
  const double ct = space->chronology_tolerance();
  if (!(a > ct && b > ct)) throw InvalidTriangleError("make_triangle: vertices are not chronologically ordered");
  if (!std::isfinite(c)) throw InvalidTriangleError("make_triangle: infinite time separation");
  if (c < a + b - tol * std::max(1.0, c)) throw InvalidTriangleError("make_triangle: reverse triangle inequality fails");
  t.side_lengths = {a, b, c};
  const std::array<std::pair<Event, Event>, 3> ends{{{x, y}, {y, z}, {x, z}}};
  for (int k = 0; k < 3; ++k) {
    std::vector<Event> pts;
    for (int j = 0; j <= samples; ++j)
      pts.push_back(space->interpolate(ends[k].first, ends[k].second, static_cast<double>(j) / samples));
    SampledCurve side(space, std::move(pts));
    double L = 0.0;
    for (std::size_t j = 1; j < side.points().size(); ++j) L += tau(side.points()[j - 1], side.points()[j]);
    if (std::abs(L - t.side_lengths[k]) > tol * std::max(1.0, L))
      throw InvalidTriangleError("make_triangle: side " + std::to_string(k) + " is not a maximizer");
    t.sides.push_back(std::move(side));
  }
  return t;
}

TriangleRealization realize_triangle(double a, double b, double c, double K) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c)) || a < 0.0 || b < 0.0 || !(c > 0.0))
    throw InvalidTriangleError("realize_triangle: side lengths must be finite, a, b >= 0 and c > 0");
  if (c < a + b - 1e-12 * std::max(1.0, c))
    throw InvalidTriangleError("realize_triangle: reverse triangle inequality c >= a + b fails");
  const double D = timelike_diameter(K);
  if (c >= D) throw DiameterError("realize_triangle: longest side reaches the timelike diameter");

  TriangleRealization t;
  t.K = K;
  t.model = std::make_shared<const ModelSpace>(K, 2);
  t.lengths = {a, b, c};
  t.x = make_vec({0.0, 0.0});
  t.z = make_vec({c, 0.0});
  if (a == 0.0) {
    t.y = t.x;
    return t;
  }
  if (b == 0.0) {
    t.y = t.z;
    return t;
  }
  if (K == 0.0) {
    const double s = (c * c + a * a - b * b) / (2.0 * c);
    t.y = make_vec({s, std::sqrt(std::max(0.0, (s - a) * (s + a)))});
    return t;
  }
  // Hyperbolic angle at x from the law of cosines of the plane.
  const double R = t.model->radius();
  double ch;
  if (K < 0.0)
    ch = (std::cos(b / R) - std::cos(a / R) * std::cos(c / R)) / (std::sin(a / R) * std::sin(c / R));
  else
    ch = (std::cosh(a / R) * std::cosh(c / R) - std::cosh(b / R)) / (std::sinh(a / R) * std::sinh(c / R));
  const double beta = std::acosh(std::max(1.0, ch));
  t.y = t.model->exact_flow(t.x, make_vec({a * std::cosh(beta), a * std::sinh(beta)}), 1.0).x;
  return t;
}

Event comparison_point(const TriangleRealization& t, Side side, double s) {
  const auto e = side_ends(side);
  const Event& A = t.vertex(e[0]);
  const Event& B = t.vertex(e[1]);
  const double L = t.lengths[static_cast<std::size_t>(side_index(side))];
  if (s <= 0.0) return A;
  if (s >= L) return B;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (t.model->time_separation(A, t.model->interpolate(A, B, mid)) < s)
      lo = mid;
    else
      hi = mid;
  }
  return t.model->interpolate(A, B, 0.5 * (lo + hi));
}

ComparisonReport curvature_bound_test(const PreLengthSpace& space, const TimelikeTriangle& triangle, double K,
                                      int side_samples, BoundSense sense, double tol, const TauFunction& tau_in) {
  if (triangle.sides.size() != 3) throw DomainError("curvature_bound_test: triangle has no sides");
  if (side_samples < 1) throw DomainError("curvature_bound_test: at least one segment per side required");
  const TauFunction tau = tau_or_default(space, tau_in);
  const auto& L = triangle.side_lengths;
  const TriangleRealization bar = realize_triangle(L[0], L[1], L[2], K);

  struct Sample {
    Event p, p_bar;
  };
  std::vector<Sample> samples;
  const std::array<Side, 3> sides{Side::xy, Side::yz, Side::xz};
  for (int k = 0; k < 3; ++k) {
    const SampledCurve& c = triangle.sides[static_cast<std::size_t>(k)];
    for (int j = 0; j <= side_samples; ++j) {
      const double u = static_cast<double>(j) / side_samples;
      const Event p = c.at(u);
      double s = 0.0;
      if (j == side_samples)
        s = L[static_cast<std::size_t>(k)];
      else if (j > 0)
        s = tau(c.front(), p);
      samples.push_back({p, comparison_point(bar, sides[static_cast<std::size_t>(k)], s)});
    }
  }

  ComparisonReport rep;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < samples.size(); ++j) {
      if (i == j) continue;
      const double t = tau(samples[i].p, samples[j].p);
      const double t_bar = bar.model->time_separation(samples[i].p_bar, samples[j].p_bar);
      // tau is only Hoelder-1/2 at the light cone, so rounding in the
      // comparison points shows up as sqrt(eps) there; the margin is scaled
      // by min(1, tau + tau_bar) to compare squared separations instead.
      const double raw = sense == BoundSense::above ? t - t_bar : t_bar - t;
      const double margin = raw * std::min(1.0, t + t_bar);
      ++rep.pairs;
      rep.worst_margin = std::min(rep.worst_margin, margin);
      if (margin < -tol) ++rep.violations;
    }
  rep.passed = rep.violations == 0;
  return rep;
}

StackReport stack_triangles(const TriangleRealization& t1, const TriangleRealization& t2, const StackSpec& spec,
                            double threshold) {
  if (t1.K != t2.K) throw IncompatibleError("stack_triangles: realizations live in different planes");
  const double L1 = t1.lengths[static_cast<std::size_t>(side_index(spec.first))];
  const double L2 = t2.lengths[static_cast<std::size_t>(side_index(spec.second))];
  if (std::abs(L1 - L2) > 1e-9 * std::max(1.0, L1))
    throw IncompatibleError("stack_triangles: shared sides have different lengths");
  if (!(L1 > 0.0)) throw IncompatibleError("stack_triangles: shared side is degenerate");

  const ModelSpace& m = *t1.model;
  const Plane plane(m);
  const bool flat = t1.K == 0.0;
  const auto e1 = side_ends(spec.first);
  const auto e2 = side_ends(spec.second);
  const int c1 = third_vertex(spec.first), c2 = third_vertex(spec.second);

  // Frames at the earlier shared endpoint: (point, side direction, normal).
  const AmbientVec A1 = plane.point(t1.vertex(e1[0])), B1 = plane.point(t1.vertex(e1[1]));
  const AmbientVec A2 = plane.point(t2.vertex(e2[0])), B2 = plane.point(t2.vertex(e2[1]));
  const AmbientVec u1 = plane.start_velocity(A1, B1, L1), u2 = plane.start_velocity(A2, B2, L2);
  const AmbientVec n1 = plane.normal(A1, u1), n2 = plane.normal(A2, u2);
  auto rel = [&](const AmbientVec& P, const AmbientVec& base) { return flat ? AmbientVec(P - base) : P; };
  const AmbientVec C1 = plane.point(t1.vertex(c1));
  const AmbientVec C2 = plane.point(t2.vertex(c2));
  double s_n = -sign_of(plane.b(rel(C1, A1), n1)) * sign_of(plane.b(rel(C2, A2), n2));
  if (s_n == 0.0) s_n = 1.0;

  // Isometry taking the frame of t2 onto the frame of t1, flipping the normal
  // so the third vertices end up on opposite sides.
  auto map = [&](const AmbientVec& P) {
    const AmbientVec X = rel(P, A2);
    AmbientVec out = flat ? AmbientVec(A1) : AmbientVec(AmbientVec::Zero(P.size()));
    out += -plane.b(X, u2) * u1 + s_n * plane.b(X, n2) * n1;
    if (!flat) out += (plane.b(X, A2) / plane.b(A2, A2)) * A1;
    return out;
  };

  const bool at_end = spec.pivot == Pivot::end;
  const int v1 = at_end ? e1[1] : e1[0];
  const int o1 = at_end ? e1[0] : e1[1];
  const int v2 = at_end ? e2[1] : e2[0];
  const Event V = t1.vertex(v1);
  const Event far = m.from_ambient(map(C2), V);
  // Outer sides at the pivot must form a causal chain U -> V -> W.
  const bool first_incoming = c1 < v1;
  const bool second_incoming = c2 < v2;
  if (first_incoming == second_incoming)
    throw DomainError("stack_triangles: outer sides at the pivot do not form a causal chain");
  const Event U = first_incoming ? Event(t1.vertex(c1)) : far;
  const Event W = first_incoming ? far : Event(t1.vertex(c1));

  const AmbientVec PV = plane.point(V), PU = plane.point(U), PW = plane.point(W), PO = plane.point(t1.vertex(o1));
  const AmbientVec u_in = plane.end_velocity(PU, PV, m.time_separation(U, V));
  const AmbientVec u_out = plane.start_velocity(PV, PW, m.time_separation(V, W));
  const double LO = L1;
  const AmbientVec w_o = at_end ? AmbientVec(-plane.end_velocity(PO, PV, LO)) : plane.start_velocity(PV, PO, LO);
  AmbientVec f = plane.normal(PV, u_in);
  if (plane.b(w_o, f) < 0.0) f = -f;

  StackReport rep;
  rep.defect = -std::asinh(plane.b(u_out, f));
  rep.concave = rep.defect >= -threshold;
  rep.outer = {U, V, W};
  rep.second_far = far;
  return rep;
}

RauchTable rauch_experiment(const SmoothSpacetime& st, double K, const std::vector<double>& lengths,
                            const RauchOptions& opts) {
  RauchTable table;
  table.diameter = timelike_diameter(K);
  table.margin = std::isfinite(table.diameter) ? opts.margin_fraction * table.diameter : 0.0;
  const Event base = opts.base.size() == st.dim() ? opts.base : Event(Vec::Zero(st.dim()));
  st.check_domain(base);
  const Mat g = st.metric(base);
  const double g00 = g(0, 0);
  if (!(g00 < 0.0)) throw DomainError("rauch_experiment: coordinate time direction is not timelike");
  const Tangent e0 = Vec::Unit(st.dim(), 0) / std::sqrt(-g00);
  table.rows = parallel_map<RauchRow>(lengths.size(), opts.detector.workers, [&](std::size_t k) {
    RauchRow row;
    row.length = lengths[k];
    const GeodesicSolution sol = trace_geodesic(st, base, Tangent(e0 * row.length), 1.0, opts.detector.shooting.nodes,
                                                opts.detector.shooting.integrator);
    DetectorConfig cfg = opts.detector;
    cfg.workers = 1;
    row.symmetric = symmetric_search(st, sol, cfg).flag;
    row.violation = row.symmetric && row.length < table.diameter - table.margin;
    return row;
  });
  for (const auto& row : table.rows) table.ok = table.ok && !row.violation;
  return table;
}

CartanHadamardReport cartan_hadamard_experiment(const SmoothSpacetime& st, const GeodesicSolution& sol,
                                                const FamilyGrid& grid, const ClassifyConfig& cfg) {
  CartanHadamardReport rep;
  rep.family = build_family(st, sol, grid, cfg.detector);
  rep.family_exists = true;
  rep.complete = rep.family.complete();
  rep.continuous = rep.family.continuous;

  const DetectorConfig& det = cfg.detector;
  ShootingOptions opts = det.shooting;
  opts.seed_scales = seed_ladder(det.delta0, det.max_seed_scale);
  const double near = 2.5 * det.delta0;
  const auto& nodes = rep.family.nodes;
  const auto dev = parallel_map<double>(nodes.size(), grid.workers, [&](std::size_t k) {
    const FamilyNode& node = nodes[k];
    if (!node.ok) return 0.0;
    double worst = 0.0;
    std::vector<GeodesicSolution> sols;
    try {
      sols = solve_bvp(st, node.p, node.q, Tangent(node.geodesic.initial_velocity * node.geodesic.t_max), opts);
    } catch (const Error&) {
      return 0.0;
    }
    for (const auto& s : sols)
      if (d_gamma(st, s, rep.family.center) <= near) worst = std::max(worst, d_gamma(st, s, node.geodesic));
    return worst;
  });
  for (double d : dev) rep.max_uniqueness_deviation = std::max(rep.max_uniqueness_deviation, d);
  if (rep.max_uniqueness_deviation > 1e-6)
    throw PreconditionError("cartan_hadamard_experiment: a second geodesic near the family member was found");
  rep.unique = true;

  const ConjugateReport cls = classify(st, sol, cfg);
  rep.reachable = !cls.unreachable;
  rep.ultimate = cls.ultimate;
  return rep;
}

}  // namespace lorentz
