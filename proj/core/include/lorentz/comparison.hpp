#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "lorentz/conjugate.hpp"
#include "lorentz/curve.hpp"
#include "lorentz/model_space.hpp"

namespace lorentz {

using TauFunction = std::function<double(const Event&, const Event&)>;

enum class Side { xy, yz, xz };

// x << y << z with maximizing sides; lengths are (tau(x,y), tau(y,z), tau(x,z)).
struct TimelikeTriangle {
  Event x, y, z;
  std::vector<SampledCurve> sides;  // xy, yz, xz
  std::array<double, 3> side_lengths{};
};

// Sides sampled along the space's geodesic interpolation. Throws
// InvalidTriangleError unless x << y << z, the reverse triangle inequality
// holds and every side is a maximizer within tol.
TimelikeTriangle make_triangle(std::shared_ptr<const PreLengthSpace> space, const Event& x, const Event& y,
                               const Event& z, int samples = 16, const TauFunction& tau = {}, double tol = 1e-6);

struct TriangleRealization {
  double K = 0.0;
  std::shared_ptr<const ModelSpace> model;  // the plane of curvature K
  Event x, y, z;
  std::array<double, 3> lengths{};

  const Event& vertex(int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

// x at the origin, z on the time axis, y with nonnegative spatial coordinate.
// Throws InvalidTriangleError if c < a + b and DiameterError if c >= D_K.
TriangleRealization realize_triangle(double a, double b, double c, double K);

// Point on the realized side at time separation s from the side's start,
// located by bisection along the side to 1e-12.
Event comparison_point(const TriangleRealization& t, Side side, double s);

enum class BoundSense { above, below };

struct ComparisonReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  // Smallest tau - tau_bar (above) or tau_bar - tau (below), multiplied by
  // min(1, tau + tau_bar) so that near-null pairs are compared in squared
  // separation.
  double worst_margin = kInf;
  bool passed = false;
};

// tau(p, q) >= tau_bar(p_bar, q_bar) (above) or <= (below) within tol for
// all sampled pairs of side points.
ComparisonReport curvature_bound_test(const PreLengthSpace& space, const TimelikeTriangle& triangle, double K,
                                      int side_samples, BoundSense sense, double tol = 1e-9,
                                      const TauFunction& tau = {});

enum class Pivot { start, end };

struct StackSpec {
  Side first = Side::yz;   // shared side in the first triangle
  Side second = Side::xy;  // shared side in the second triangle
  // Shared endpoint at which the outer boundary is tested.
  Pivot pivot = Pivot::end;
};

struct StackReport {
  // Set for the configuration certified under an upper curvature bound.
  bool concave = false;
  // Hyperbolic angle by which the outer boundary turns away from the other
  // end of the shared side at the pivot; negative values bend towards it.
  double defect = 0.0;
  // Outer boundary in the first triangle's chart: incoming vertex, pivot,
  // outgoing vertex, and the far vertex of the second triangle.
  std::vector<Event> outer;
  Event second_far;
};

StackReport stack_triangles(const TriangleRealization& t1, const TriangleRealization& t2, const StackSpec& spec = {},
                            double threshold = 1e-9);

struct RauchRow {
  double length = 0.0;
  bool symmetric = false;
  bool violation = false;  // positive while length < D_K - margin
};

struct RauchTable {
  double diameter = kInf;
  double margin = 0.0;
  std::vector<RauchRow> rows;
  bool ok = true;
};

struct RauchOptions {
  Event base;  // defaults to the chart origin
  // Margin as a fraction of D_K.
  double margin_fraction = 0.05;
  DetectorConfig detector;
};

// Symmetric-conjugacy detection along geodesics of tau-length L from the base
// point in the coordinate time direction.
RauchTable rauch_experiment(const SmoothSpacetime& st, double K, const std::vector<double>& lengths,
                            const RauchOptions& opts = {});

struct CartanHadamardReport {
  bool family_exists = false;
  bool complete = false;
  bool continuous = false;
  bool unique = false;
  bool reachable = false;
  bool ultimate = false;
  double max_uniqueness_deviation = 0.0;
  TimelikeFamily family;
};

// Family of maximizers about sol, uniqueness of nearby shooting solutions at
// every node, and the conjugacy classification. Throws PreconditionError when
// a second nearby geodesic is found.
CartanHadamardReport cartan_hadamard_experiment(const SmoothSpacetime& st, const GeodesicSolution& sol,
                                                const FamilyGrid& grid = {}, const ClassifyConfig& cfg = {});

}  // namespace lorentz
