#include <gtest/gtest.h>

#include <map>
#include <random>

#include "lorentz/comparison.hpp"
#include "lorentz/factory.hpp"
#include "oracles.hpp"

using namespace lorentz;
using oracle::kPi;

namespace {

// Separation in the model plane of curvature K, from the ambient oracles.
double model_tau_oracle_k(double K, const Event& x, const Event& y) {
  if (K == 0.0) return oracle::minkowski_tau(x, y);
  return K < 0.0 ? oracle::ads_tau(1.0 / std::sqrt(-K), x, y) : oracle::ds_tau(1.0 / std::sqrt(K), x, y);
}

TimelikeTriangle triangle_in(double K, double a, double b, double c, int samples = 12) {
  const auto r = realize_triangle(a, b, c, K);
  return make_triangle(r.model, r.x, r.y, r.z, samples);
}

}  // namespace

TEST(Realize, FlatExamples) {
  const auto t = realize_triangle(1, 1, 3, 0.0);
  EXPECT_TRUE(t.x.isApprox(make_vec({0, 0})));
  EXPECT_TRUE(t.z.isApprox(make_vec({3, 0})));
  EXPECT_NEAR(t.y[0], 1.5, 1e-12);
  EXPECT_NEAR(t.y[1], std::sqrt(1.25), 1e-9);

  const auto degenerate = realize_triangle(1, 2, 3, 0.0);
  EXPECT_LT((degenerate.y - make_vec({1, 0})).norm(), 1e-9);
}

TEST(Realize, RejectsInvalidSides) {
  EXPECT_THROW(realize_triangle(2, 2, 3, 0.0), InvalidTriangleError);
  EXPECT_THROW(realize_triangle(-1, 2, 3, 0.0), InvalidTriangleError);
  EXPECT_THROW(realize_triangle(1, 1, kPi, -1.0), DiameterError);
  EXPECT_THROW(realize_triangle(1, 1, 2.0, -4.0), DiameterError);  // D = pi / 2
}

// Property: realized vertices reproduce the prescribed side lengths.
TEST(Realize, SideLengthsMatchOracle) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (double K : {0.0, -1.0, 1.0, -4.0, 0.3}) {
    for (int i = 0; i < 30; ++i) {
      const double a = u(rng), b = u(rng);
      double c = (a + b) * (1.0 + u(rng));
      if (K < 0.0) c = std::min(c, 0.95 * timelike_diameter(K));
      if (c < a + b) continue;
      const auto t = realize_triangle(a, b, c, K);
      EXPECT_NEAR(model_tau_oracle_k(K, t.x, t.y), a, 1e-9) << "K=" << K;
      EXPECT_NEAR(model_tau_oracle_k(K, t.y, t.z), b, 1e-9) << "K=" << K;
      EXPECT_NEAR(model_tau_oracle_k(K, t.x, t.z), c, 1e-9) << "K=" << K;
      EXPECT_GE(t.y[1], -1e-12);
    }
  }
}

TEST(ComparisonPoint, HasPrescribedSeparationFromSideStart) {
  for (double K : {0.0, -1.0, 1.0}) {
    const auto t = realize_triangle(0.7, 0.8, 2.0, K);
    for (double s : {0.0, 0.2, 0.5, 0.7}) {
      const Event p = comparison_point(t, Side::xy, s);
      EXPECT_NEAR(t.model->time_separation(t.x, p), s, 1e-9);
      EXPECT_NEAR(t.model->time_separation(p, t.y), 0.7 - s, 1e-9);
    }
    const Event q = comparison_point(t, Side::xz, 1.3);
    EXPECT_NEAR(t.model->time_separation(t.x, q), 1.3, 1e-9);
  }
}

TEST(MakeTriangle, RejectsNonMaximizingOrUnorderedVertices) {
  auto h = make_model_space(0.0, 2);
  EXPECT_THROW(make_triangle(h.prelength, make_vec({0, 0}), make_vec({1, 2}), make_vec({3, 0})), InvalidTriangleError);
  EXPECT_THROW(make_triangle(h.prelength, make_vec({0, 0}), make_vec({2, 0}), make_vec({1, 0})), InvalidTriangleError);
  const auto t = make_triangle(h.prelength, make_vec({0, 0}), make_vec({1.2, 0.5}), make_vec({3, 0.2}));
  EXPECT_NEAR(t.side_lengths[2], oracle::minkowski_tau(make_vec({0, 0}), make_vec({3, 0.2})), 1e-12);
  EXPECT_EQ(t.sides.size(), 3u);
}

// Property: a constant-curvature plane compared with its own K passes in both
// senses with margin near zero.
TEST(CurvatureBound, SelfComparisonPassesBothSenses) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  for (double K : {0.0, -1.0, 1.0}) {
    for (int i = 0; i < 6; ++i) {
      const double a = u(rng), b = u(rng);
      double c = (a + b) * (1.0 + 0.5 * u(rng));
      if (K < 0.0) c = std::min(c, 0.9 * kPi);
      const auto tri = triangle_in(K, a, b, c, 8);
      auto space = make_model_space(K, 2);
      for (BoundSense sense : {BoundSense::above, BoundSense::below}) {
        const auto rep = curvature_bound_test(*space.prelength, tri, K, 8, sense, 1e-6);
        EXPECT_TRUE(rep.passed) << "K=" << K << " worst " << rep.worst_margin;
        EXPECT_GE(rep.worst_margin, -1e-6);
      }
    }
  }
}

// Flat space satisfies tau >= tau_bar against negative K (bounded above) and
// tau <= tau_bar against positive K (bounded below), and fails the reverse.
TEST(CurvatureBound, MinkowskiAgainstCurvedPlanes) {
  auto flat = make_model_space(0.0, 2);
  const auto tri = triangle_in(0.0, 1.0, 1.0, 3.0, 10);
  const auto above_neg = curvature_bound_test(*flat.prelength, tri, -1.0, 10, BoundSense::above);
  const auto below_neg = curvature_bound_test(*flat.prelength, tri, -1.0, 10, BoundSense::below);
  EXPECT_TRUE(above_neg.passed);
  EXPECT_FALSE(below_neg.passed);
  EXPECT_LT(below_neg.worst_margin, -0.1);

  const auto tri_small = triangle_in(0.0, 0.6, 0.7, 1.6, 10);
  EXPECT_TRUE(curvature_bound_test(*flat.prelength, tri_small, 1.0, 10, BoundSense::below).passed);
  EXPECT_FALSE(curvature_bound_test(*flat.prelength, tri_small, 1.0, 10, BoundSense::above).passed);
}

TEST(CurvatureBound, CountsAllOrderedPairs) {
  auto flat = make_model_space(0.0, 2);
  const auto tri = triangle_in(0.0, 1.0, 1.0, 2.5, 4);
  const auto rep = curvature_bound_test(*flat.prelength, tri, 0.0, 4, BoundSense::above);
  const std::size_t points = 3 * 5;
  EXPECT_EQ(rep.pairs, points * (points - 1));
}

TEST(Stacking, CollinearFlatTrianglesAreConcave) {
  const auto t1 = realize_triangle(1.0, 1.0, 2.0, 0.0);
  const auto t2 = realize_triangle(1.0, 1.0, 2.0, 0.0);
  const auto rep = stack_triangles(t1, t2);
  EXPECT_TRUE(rep.concave);
  EXPECT_NEAR(rep.defect, 0.0, 1e-9);
  EXPECT_LT((rep.second_far - make_vec({3, 0})).norm(), 1e-9);
}

// Place an explicit fourth event W across the shared side YZ of the flat
// (1, 1, 3) triangle, realize (Y, Z, W) from its lengths alone and compare the
// stacked configuration with the angle computed directly from W.
TEST(Stacking, FlatStackMatchesDirectAngle) {
  const Event X = make_vec({0, 0}), Y = make_vec({1.5, std::sqrt(1.25)}), Z = make_vec({3, 0});
  const auto t1 = realize_triangle(1.0, 1.0, 3.0, 0.0);
  for (double w1 : {-0.3, 0.3}) {
    const Event W = Z + make_vec({2.0, w1});
    const double zw = oracle::minkowski_tau(Z, W), yw = oracle::minkowski_tau(Y, W);
    const auto t2 = realize_triangle(oracle::minkowski_tau(Y, Z), zw, yw, 0.0);
    const auto rep = stack_triangles(t1, t2);
    EXPECT_LT((rep.second_far - W).norm(), 1e-9);
    // Unit normal to XZ at Z pointing towards Y is (0, 1); b(u_out, f) is the
    // spatial component of the unit outgoing tangent.
    const double direct = -std::asinh(w1 / zw);
    EXPECT_NEAR(rep.defect, direct, 1e-9);
    EXPECT_EQ(rep.concave, direct >= 0.0);
    ASSERT_EQ(rep.outer.size(), 3u);
    EXPECT_LT((rep.outer[0] - X).norm(), 1e-12);
  }
}

// A straight flat configuration X, Y, Z, W with W on the continuation of XZ.
// Realizing its two triangles in a curved plane bends the outer boundary:
// concave under K < 0, convex under K > 0.
TEST(Stacking, StraightFlatConfigurationBendsWithCurvature) {
  const Event X = make_vec({0, 0}), Y = make_vec({0.75, std::sqrt(0.3125)}), Z = make_vec({1.5, 0}),
              W = make_vec({2.5, 0});
  const double xy = oracle::minkowski_tau(X, Y), yz = oracle::minkowski_tau(Y, Z), xz = oracle::minkowski_tau(X, Z);
  const double zw = oracle::minkowski_tau(Z, W), yw = oracle::minkowski_tau(Y, W);
  std::map<double, double> defect;
  for (double K : {-1.0, 0.0, 1.0}) {
    const auto rep = stack_triangles(realize_triangle(xy, yz, xz, K), realize_triangle(yz, zw, yw, K));
    defect[K] = rep.defect;
  }
  EXPECT_NEAR(defect[0.0], 0.0, 1e-9);
  EXPECT_GT(defect[-1.0], 1e-3);
  EXPECT_LT(defect[1.0], -1e-3);
}

TEST(Stacking, RejectsMismatchedInputs) {
  const auto t1 = realize_triangle(1.0, 1.0, 2.5, -1.0);
  const auto t2 = realize_triangle(1.0, 1.0, 2.5, 0.0);
  EXPECT_THROW(stack_triangles(t1, t2), IncompatibleError);
  const auto t3 = realize_triangle(1.2, 1.0, 2.5, -1.0);
  EXPECT_THROW(stack_triangles(t1, t3), IncompatibleError);
}

TEST(Rauch, AdsRowsFlipAtTheDiameter) {
  for (double K : {-1.0, -4.0}) {
    auto h = make_model_space(K, 2);
    const double D = timelike_diameter(K);
    RauchOptions opts;
    opts.detector.rings = 4;
    const auto table = rauch_experiment(*h.spacetime, K, {0.3 * D, 0.8 * D, D}, opts);
    ASSERT_EQ(table.rows.size(), 3u);
    EXPECT_FALSE(table.rows[0].symmetric);
    EXPECT_FALSE(table.rows[1].symmetric);
    EXPECT_TRUE(table.rows[2].symmetric);
    EXPECT_TRUE(table.ok);
    EXPECT_NEAR(table.margin, 0.05 * D, 1e-12);
  }
}

TEST(CartanHadamard, MinkowskiGeodesicsAreUniqueAndReachable) {
  auto h = make_model_space(0.0, 2);
  FamilyGrid grid;
  grid.per_axis = 3;
  ClassifyConfig cfg;
  cfg.detector.rings = 4;
  for (double L : {1.0, 10.0}) {
    const auto sol = trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, 0}), L, 65);
    const auto r = cartan_hadamard_experiment(*h.spacetime, sol, grid, cfg);
    EXPECT_TRUE(r.family_exists && r.complete && r.continuous && r.unique && r.reachable);
    EXPECT_FALSE(r.ultimate);
  }
}
