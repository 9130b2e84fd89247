#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "lorentz/curve.hpp"
#include "lorentz/geodesic.hpp"

namespace lorentz {

using GroundMetric = std::function<double(const Event&, const Event&)>;

double euclidean_distance(const Event& x, const Event& y);

// Index pairs (i, j) from (0, 0) to (N, M); every step advances i, j or both
// by one.
struct MonotoneCoupling {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  bool valid(std::size_t last_a, std::size_t last_b) const;
};

// Sampled reparametrization pair (phi, psi) over a parameter grid.
struct ParamPath {
  std::vector<double> params;
  std::vector<double> phi;
  std::vector<double> psi;
};

struct FrechetCoupling {
  double value = 0.0;
  MonotoneCoupling coupling;
};

// Discrete Frechet distance of two sample sequences (rolling-row dynamic
// program, O(N M) time, O(M) memory).
double discrete_frechet(const std::vector<Event>& a, const std::vector<Event>& b,
                        const GroundMetric& d = euclidean_distance);
// Same value plus an optimal coupling (full table).
FrechetCoupling discrete_frechet_coupling(const std::vector<Event>& a, const std::vector<Event>& b,
                                          const GroundMetric& d = euclidean_distance);
double coupling_cost(const std::vector<Event>& a, const std::vector<Event>& b, const MonotoneCoupling& c,
                     const GroundMetric& d = euclidean_distance);

// Throws IncompatibleError unless both curves live over the same ground metric.
double discrete_frechet(const CurveClass& a, const CurveClass& b);
double discrete_frechet(const SampledCurve& a, const SampledCurve& b);

double d_gamma(const CurveClass& a, const CurveClass& b);
// Geodesics of a smooth spacetime: chart-Euclidean Frechet distance of the
// samples plus the difference of Lorentzian lengths.
double d_gamma(const SmoothSpacetime& st, const GeodesicSolution& a, const GeodesicSolution& b);

// Reparametrizes alpha by the generalized inverse of s = phi + psi; the output
// is defined on [0, 2] and satisfies phi + psi = u at every sample.
ParamPath normalize_monotone(const ParamPath& alpha, std::size_t min_samples = 0);

struct RefineResult {
  double value = 0.0;
  double certified_gap = 0.0;
  int refinements = 0;
  bool converged = false;
};

// Sample sequence of a curve at `segments + 1` points.
using CurveSampler = std::function<std::vector<Event>(std::size_t segments)>;

RefineResult frechet_refine(const CurveSampler& a, const CurveSampler& b, std::size_t initial_segments,
                            double target_gap, int max_refinements = 10, const GroundMetric& d = euclidean_distance);
// Refines both canonical grids by midpoint insertion in the curves' space.
RefineResult frechet_refine(const CurveClass& a, const CurveClass& b, double target_gap, int max_refinements = 10);

}  // namespace lorentz
