#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "lorentz/spacetime.hpp"

namespace lorentz {

struct IntegratorOptions {
  double abs_tol = 1e-11;
  double rel_tol = 1e-11;
  double initial_step = 1e-3;
  std::size_t max_steps = 200'000;
  // Positions or velocities beyond this magnitude count as leaving the chart.
  double coordinate_bound = 1e6;
  // Allowed drift of g(v, v) per unit parameter, relative to max(1, |g(v, v)|).
  double norm_tol = 1e-8;
};

struct IntegratorMeta {
  std::size_t steps = 0;
  double norm_drift = 0.0;
  bool closed_form = false;
  bool exited_chart = false;
  double exit_param = std::numeric_limits<double>::quiet_NaN();
};

struct GeodesicSolution {
  Event initial_point;
  Tangent initial_velocity;
  double t_max = 1.0;
  std::vector<double> grid;
  std::vector<Event> positions;
  std::vector<Tangent> velocities;
  IntegratorMeta meta;
  // Shooting seed that produced this solution, empty when not shot.
  Tangent seed;

  const Event& endpoint() const { return positions.back(); }
  bool truncated() const { return meta.exited_chart; }
};

double speed_squared(const SmoothSpacetime& st, const GeodesicSolution& sol);
// Lorentzian length sqrt(-g(v, v)) * t_max; zero for non-timelike solutions.
double lg_length(const SmoothSpacetime& st, const GeodesicSolution& sol);
bool is_timelike_future(const SmoothSpacetime& st, const Event& p, const Tangent& v);

// Adaptive Dormand-Prince integration of the geodesic equation on [0, t_max],
// sampled at `nodes` uniform parameters. Throws IntegratorError if g(v, v)
// drifts beyond IntegratorOptions::norm_tol.
GeodesicSolution integrate_geodesic(const SmoothSpacetime& st, const Event& p, const Tangent& v,
                                    double t_max, int nodes = 65, const IntegratorOptions& opts = {});

// Same samples, from the closed-form flow when the spacetime provides one.
GeodesicSolution trace_geodesic(const SmoothSpacetime& st, const Event& p, const Tangent& v,
                                double t_max, int nodes = 65, const IntegratorOptions& opts = {});

// Geodesic together with the propagator Y(t) = d gamma(t) / d v and its
// derivative Z(t), i.e. Jacobi fields with J(0) = 0, J'(0) = e_c as columns.
struct VariationalTrace {
  std::vector<double> grid;
  std::vector<Event> positions;
  std::vector<Tangent> velocities;
  std::vector<Mat> Y;
  std::vector<Mat> Z;
  IntegratorMeta meta;
};

VariationalTrace integrate_variational(const SmoothSpacetime& st, const Event& p, const Tangent& v,
                                       const std::vector<double>& grid, const IntegratorOptions& opts = {});

struct ExpResult {
  bool ok = false;
  Event x;
  Mat jacobian;  // d exp_p(v) / d v, when requested
};

ExpResult exponential(const SmoothSpacetime& st, const Event& p, const Tangent& v, bool with_jacobian,
                      bool allow_exact = true, const IntegratorOptions& opts = {});

struct ShootingOptions {
  // Number of perturbed seeds around the reference velocity when seed_scales
  // is empty.
  int seeds = 8;
  // Relative perturbation sizes; each scale contributes 2 (n - 1) seeds.
  std::vector<double> seed_scales;
  double residual_tol = 1e-8;
  // A run that stops above the residual floor is accepted only if the
  // remaining Newton correction is below step_tol * (1 + |v|); this rejects
  // stalls near degenerate roots.
  double step_tol = 1e-6;
  // Velocities closer than dedup_tol * |v| are the same geodesic.
  double dedup_tol = 1e-4;
  // Two solutions are also merged when the residual stays below merge_tol on
  // the straight segment between their velocities (degenerate roots).
  double merge_tol = 1e-7;
  int max_iterations = 40;
  // Stop after this many distinct solutions; 0 means no limit.
  int max_solutions = 0;
  bool use_exact_flow = true;
  bool timelike_only = true;
  int nodes = 65;
  IntegratorOptions integrator;
};

std::vector<Tangent> seed_lattice(const SmoothSpacetime& st, const Event& p, const Tangent& reference,
                                  const ShootingOptions& opts);

// Single damped Newton run on the initial velocity from `seed`.
std::optional<Tangent> shoot(const SmoothSpacetime& st, const Event& p, const Event& q, const Tangent& seed,
                             const ShootingOptions& opts);

// All distinct connecting geodesics found from the seed lattice around
// `reference`, sorted by decreasing length.
std::vector<GeodesicSolution> solve_bvp(const SmoothSpacetime& st, const Event& p, const Event& q,
                                        const Tangent& reference, const ShootingOptions& opts);
// Reference velocity q - p.
std::vector<GeodesicSolution> solve_bvp(const SmoothSpacetime& st, const Event& p, const Event& q,
                                        const ShootingOptions& opts = {});

bool same_geodesic(const SmoothSpacetime& st, const Event& p, const Event& q, const Tangent& u,
                   const Tangent& v, const ShootingOptions& opts);

// Closed form when available, otherwise the longest timelike connecting
// geodesic found by shooting around `reference` (zero when none exists).
double local_time_separation(const SmoothSpacetime& st, const Event& p, const Event& q,
                             const Tangent& reference, const ShootingOptions& opts = {});

// Sliding parameter windows of length `window` (half overlapping) must have
// Lorentzian length equal to the time separation of their endpoints.
bool local_maximizer_check(const SmoothSpacetime& st, const GeodesicSolution& sol, double window,
                           double tol = 1e-6, const ShootingOptions& opts = {});

struct ConvergenceReport {
  std::vector<double> c0;        // sup-distance on the extended parameter domain
  std::vector<double> velocity;  // |(p_n, v_n) - (p, v)|
  std::vector<double> dgamma;
  double threshold = 1e-3;
  bool c0_converges = false;
  bool velocity_converges = false;
  bool dgamma_converges = false;
  bool consistent = false;
  bool limit_is_geodesic = false;
  double extension = 0.1;
};

ConvergenceReport convergence_experiment(const SmoothSpacetime& st, const std::vector<GeodesicSolution>& family,
                                         const GeodesicSolution& limit, double threshold = 1e-3,
                                         double extension = 0.1);

}  // namespace lorentz
