#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lorentz/geodesic.hpp"

namespace lorentz {

// Propagator of the Jacobi equation along a geodesic: Y(t) = d gamma(t) / d v,
// so the columns are the Jacobi fields with J(0) = 0 and J'(0) = e_c.
struct JacobiSystem {
  GeodesicSolution base;
  std::vector<double> grid;
  std::vector<Mat> Y;
  std::vector<Mat> Z;  // dY/dt; left empty when the space has an exact flow
  // Basis of the g-orthogonal complement of the initial velocity.
  Mat normal_basis;
};

// Y(t) for a single parameter; finite differences of the closed-form flow
// when available, otherwise the variational equation.
Mat propagator(const SmoothSpacetime& st, const Event& p, const Tangent& v, double t,
               const IntegratorOptions& opts = {});

JacobiSystem jacobi_system(const SmoothSpacetime& st, const GeodesicSolution& sol, double t_end, int samples,
                           const IntegratorOptions& opts = {});

struct JacobiScanOptions {
  // Scan [0, t_end]; t_end <= 0 means the parameter range of the solution.
  double t_end = 0.0;
  int samples = 256;
  double tol = 1e-6;
  IntegratorOptions integrator;
};

// Conjugate parameters along sol: sign changes of det Y(t) / t^n refined by
// bisection, together with isolated zeros of the smallest singular value of
// Y(t) / t (even multiplicity).
std::vector<double> jacobi_scan(const SmoothSpacetime& st, const GeodesicSolution& sol,
                                const JacobiScanOptions& opts = {});

// Shrinking schedules shared by the synthetic detectors.
struct DetectorConfig {
  int rings = 6;
  double eps0 = 0.1;    // endpoint ring radius eps_i = eps0 / 2^i
  double delta0 = 0.2;  // d_Gamma closeness delta_i = delta0 / 2^i
  // Two witnesses are distinct when the Frechet distance of their samples
  // exceeds this.
  double distinct_tol = 1e-4;
  // A deviation sequence m_i converges when it is finite and either ends
  // below delta_last, or decreases over the last `tail` rings with log-log
  // slope against eps_i of at least min_slope.
  double min_slope = 0.2;
  int tail = 3;
  // Per-ring seed ladder: relative offsets from delta_i / 2 up to this value
  // in steps of sqrt(2).
  double max_seed_scale = 0.4;
  int workers = 1;
  ShootingOptions shooting;
};

struct Witness {
  int ring = 0;
  Event p, q;
  Tangent seed_a, seed_b;
  Tangent velocity_a, velocity_b;
  double dgamma_a = 0.0;
  double dgamma_b = 0.0;
};

struct DetectorResult {
  bool flag = false;
  std::vector<double> eps;
  std::vector<double> delta;
  // Per ring: the best witness deviation max(d_Gamma(eta_i, gamma),
  // d_Gamma(gamma_i, gamma)), infinite when the ring has no witness pair.
  std::vector<double> deviation;
  std::vector<Witness> witnesses;
};

// Relative seed offsets delta / 2, delta / sqrt(2), ... up to max_scale.
std::vector<double> seed_ladder(double delta, double max_scale);

// True when the deviation sequence converges under the configured schedule.
bool deviations_converge(const std::vector<double>& deviation, const std::vector<double>& eps,
                         const std::vector<double>& delta, const DetectorConfig& cfg);

DetectorResult one_sided_search(const SmoothSpacetime& st, const GeodesicSolution& sol,
                                const DetectorConfig& cfg = {});
DetectorResult symmetric_search(const SmoothSpacetime& st, const GeodesicSolution& sol,
                                const DetectorConfig& cfg = {});

// Re-runs the Newton iteration from the stored seeds; returns the larger
// velocity deviation.
double replay_witness(const SmoothSpacetime& st, const Witness& w, const ShootingOptions& opts);

struct FamilyGrid {
  double radius = 0.1;
  int per_axis = 5;
  // Continuity rings at radius / 2^j.
  int rings = 4;
  int workers = 1;
};

struct FamilyNode {
  Event p, q;
  bool ok = false;
  GeodesicSolution geodesic;
};

struct TimelikeFamily {
  GeodesicSolution center;
  std::vector<Event> grid_u;
  std::vector<Event> grid_v;
  // Row-major over (grid_u, grid_v).
  std::vector<FamilyNode> nodes;
  std::size_t missing = 0;
  std::vector<double> ring_radius;
  std::vector<double> continuity;  // max d_Gamma(F(p_j, q_j), gamma) per ring
  bool continuous = false;

  bool complete() const { return missing == 0; }
};

// Family of maximizers around sol. Throws PreconditionError unless sol is the
// unique maximizer between its endpoints at the configured resolution.
TimelikeFamily build_family(const SmoothSpacetime& st, const GeodesicSolution& sol, const FamilyGrid& grid = {},
                            const DetectorConfig& cfg = {});

enum class EmbeddingScheme { automatic, rings, neighbor };

struct EmbeddabilityResult {
  bool unreachable = false;
  std::string scheme;
  std::vector<double> eps;
  std::vector<double> deviation;  // worst over ring pairs of the nearest solution
  std::optional<GeodesicSolution> neighbor;
};

// Rings scheme: every perturbed endpoint pair needs some connecting timelike
// geodesic close to sol. Neighbor scheme: endpoint pairs are taken on a
// second geodesic sigma between the same endpoints.
EmbeddabilityResult embeddability_check(const SmoothSpacetime& st, const GeodesicSolution& sol,
                                        const DetectorConfig& cfg = {},
                                        EmbeddingScheme scheme = EmbeddingScheme::automatic);

struct ClassifyConfig {
  DetectorConfig detector;
  JacobiScanOptions jacobi;
  // A conjugate parameter within this relative distance of the endpoint
  // counts as conjugacy at the endpoint.
  double endpoint_tol = 1e-4;
  EmbeddingScheme scheme = EmbeddingScheme::automatic;
};

struct ConjugateReport {
  bool jacobi = false;
  bool one_sided = false;
  bool symmetric = false;
  bool unreachable = false;
  bool ultimate = false;
  // jacobi, one_sided and symmetric agree.
  bool consistent = true;
  std::vector<double> jacobi_parameters;
  DetectorResult one_sided_result;
  DetectorResult symmetric_result;
  EmbeddabilityResult embeddability;
  std::vector<std::string> notes;
};

ConjugateReport classify(const SmoothSpacetime& st, const GeodesicSolution& sol, const ClassifyConfig& cfg = {});

struct CutScanOptions {
  // Initial directions as rapidities of unit timelike vectors in the
  // orthonormal frame at p, tilted along the first spatial axis.
  std::vector<double> rapidities{-0.5, 0.0, 0.5};
  // Tau-tolerance for counting a connecting geodesic as a maximizer.
  double maximizer_tol = 1e-6;
  int workers = 1;
  ShootingOptions shooting;
};

struct CutTarget {
  double rapidity = 0.0;
  double param = 0.0;  // proper time along the direction
  Event q;
  double tau = 0.0;
  int maximizers = 0;
  bool cut = false;
};

struct CutDirection {
  double rapidity = 0.0;
  // First parameter at which uniqueness of maximizers is lost: a grid cut
  // point, or the bisected transition between a unique node and a node
  // without a unique maximizer.
  std::optional<double> initial_cut_param;
  std::optional<Event> initial_cut_point;
  bool bisected = false;
};

struct CutScan {
  Event p;
  std::vector<CutTarget> targets;
  std::vector<CutDirection> directions;
  // Chart distance from p to the nearest initial cut point, infinite if none.
  double initial_cut_distance = kInf;
};

CutScan cut_scan(const SmoothSpacetime& st, const Event& p, const std::vector<double>& param_grid,
                 const CutScanOptions& opts = {});

struct InjectivityReport {
  std::vector<double> ini_inj;  // per base point
  double ini_inj_space = kInf;
  double unique_inj_space = kInf;
  double resolution = 0.0;
  double gap = 0.0;
  bool consistent = false;
  std::vector<CutScan> scans;
};

InjectivityReport injectivity_radii(const SmoothSpacetime& st, const std::vector<Event>& sample_points,
                                    const std::vector<double>& param_grid, const std::vector<double>& radius_grid,
                                    const CutScanOptions& opts = {});

}  // namespace lorentz
