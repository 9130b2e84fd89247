#include <gtest/gtest.h>

#include <random>

#include "lorentz/factory.hpp"
#include "lorentz/frechet.hpp"
#include "lorentz/geodesic.hpp"
#include "oracles.hpp"

using namespace lorentz;
using oracle::kPi;

namespace {

SpaceHandle sphere_product(double radius = 1.0) {
  SpaceDescriptor d;
  d.space = "product";
  d.fiber = "sphere";
  d.radius = radius;
  return make_space(d);
}

}  // namespace

TEST(Integrate, MinkowskiStraightLine) {
  auto h = make_model_space(0.0, 2);
  const auto sol = integrate_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, 0}), 5.0, 11);
  for (std::size_t i = 0; i < sol.grid.size(); ++i) EXPECT_LT((sol.positions[i] - make_vec({sol.grid[i], 0})).norm(), 1e-12);
  const auto exact = trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, 0}), 3.0, 5);
  EXPECT_TRUE(exact.meta.closed_form);
  EXPECT_TRUE(exact.endpoint().isApprox(make_vec({3, 0})));
}

TEST(Integrate, SphereProductFollowsGreatCircles) {
  for (double r : {1.0, 2.0}) {
    auto h = sphere_product(r);
    const double th0 = 1.2, ph0 = 0.3, dth = 0.4 / r, dph = -0.5 / r;
    const auto sol = integrate_geodesic(*h.spacetime, make_vec({0.5, th0, ph0}), make_vec({2.0, dth, dph}), 1.5, 7);
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
      const double s = sol.grid[i];
      const auto gc = oracle::great_circle(th0, ph0, dth, dph, s);
      EXPECT_NEAR(sol.positions[i][0], 0.5 + 2.0 * s, 1e-9);
      EXPECT_NEAR(sol.positions[i][1], gc[0], 1e-8);
      EXPECT_NEAR(std::remainder(sol.positions[i][2] - gc[1], 2 * kPi), 0.0, 1e-8);
    }
  }
}

TEST(Integrate, ConservesSpeed) {
  auto h = sphere_product();
  const auto sol = integrate_geodesic(*h.spacetime, make_vec({0, 1.0, 0}), make_vec({1.5, 0.3, 0.7}), 3.0, 33);
  const double g0 = sol.velocities.front().dot(h.spacetime->metric(sol.positions.front()) * sol.velocities.front());
  for (std::size_t i = 0; i < sol.grid.size(); ++i) {
    const double gi = sol.velocities[i].dot(h.spacetime->metric(sol.positions[i]) * sol.velocities[i]);
    EXPECT_NEAR(gi, g0, 1e-8);
  }
}

TEST(Integrate, FlagsChartExit) {
  auto h = make_model_space(0.0, 2);
  IntegratorOptions opts;
  opts.coordinate_bound = 10.0;
  const auto sol = integrate_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, 0.5}), 100.0, 9, opts);
  EXPECT_TRUE(sol.truncated());
  EXPECT_LT(sol.meta.exit_param, 100.0);
}

TEST(Exponential, JacobianMatchesFiniteDifferences) {
  auto h = sphere_product();
  const Event p = make_vec({0, 1.1, 0.2});
  const Tangent v = make_vec({1.3, 0.2, -0.4});
  const auto e = exponential(*h.spacetime, p, v, true);
  ASSERT_TRUE(e.ok);
  const double step = 1e-6;
  for (int c = 0; c < 3; ++c) {
    Tangent dv = Tangent::Zero(3);
    dv[c] = step;
    const auto plus = exponential(*h.spacetime, p, Tangent(v + dv), false);
    const auto minus = exponential(*h.spacetime, p, Tangent(v - dv), false);
    const Vec fd = (plus.x - minus.x) / (2 * step);
    EXPECT_LT((fd - e.jacobian.col(c)).norm(), 1e-5);
  }
}

TEST(Shooting, MinkowskiBvpIsUniqueStraightLine) {
  auto h = make_model_space(0.0, 3);
  const Event p = make_vec({0, 0, 0}), q = make_vec({2, 0.5, -0.3});
  const auto sols = solve_bvp(*h.spacetime, p, q);
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_LT((sols[0].initial_velocity - (q - p)).norm(), 1e-8);
  EXPECT_NEAR(lg_length(*h.spacetime, sols[0]), oracle::minkowski_tau(p, q), 1e-9);
}

TEST(Shooting, NumericFlowHitsTargetOnSphereProduct) {
  auto h = sphere_product();
  const Event p = make_vec({0, 1.2, 0.1}), q = make_vec({2.0, 1.0, 0.8});
  ShootingOptions opts;
  opts.use_exact_flow = false;
  const auto sols = solve_bvp(*h.spacetime, p, q, opts);
  ASSERT_FALSE(sols.empty());
  EXPECT_LT((sols[0].endpoint() - q).norm(), 1e-7);
  // Lengths come out sorted longest first.
  for (std::size_t i = 1; i < sols.size(); ++i)
    EXPECT_GE(lg_length(*h.spacetime, sols[i - 1]), lg_length(*h.spacetime, sols[i]));
}

TEST(Shooting, AdsLengthEqualsClosedFormTau) {
  auto h = make_model_space(-1.0, 2);
  const Event p = make_vec({0, 0.2}), q = make_vec({1.8, -0.1});
  ShootingOptions opts;
  opts.use_exact_flow = false;
  const auto sols = solve_bvp(*h.spacetime, p, q, opts);
  ASSERT_FALSE(sols.empty());
  EXPECT_NEAR(lg_length(*h.spacetime, sols[0]), oracle::ads_tau(1.0, p, q), 1e-7);
}

TEST(Shooting, SameGeodesicDetectsDuplicates) {
  auto h = make_model_space(0.0, 2);
  const Event p = make_vec({0, 0}), q = make_vec({2, 0.4});
  ShootingOptions opts;
  EXPECT_TRUE(same_geodesic(*h.spacetime, p, q, q - p, Tangent((q - p) * (1 + 1e-9)), opts));
  EXPECT_FALSE(same_geodesic(*h.spacetime, p, q, q - p, make_vec({2, -0.4}), opts));
}

TEST(LocalTimeSeparation, UsesClosedFormWhenAvailable) {
  auto h = make_model_space(-1.0, 2);
  const Event p = make_vec({0, 0}), q = make_vec({1.0, 0.3});
  EXPECT_NEAR(local_time_separation(*h.spacetime, p, q, q - p), oracle::ads_tau(1.0, p, q), 1e-12);
}

TEST(MaximizerCheck, GeodesicsAreLocalMaximizers) {
  for (double K : {0.0, -1.0, 1.0}) {
    auto h = make_model_space(K, 2);
    const auto sol = trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1.0, 0.2}), 2.5, 33);
    EXPECT_TRUE(local_maximizer_check(*h.spacetime, sol, h.spacetime->convexity_window())) << "K=" << K;
  }
}

// Property: Lorentzian length of a traced geodesic equals tau between its
// endpoints below the diameter.
TEST(LengthProperty, GeodesicLengthEqualsTau) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> rap(-1.0, 1.0), len(0.2, 2.5);
  for (double K : {0.0, -1.0, 1.0}) {
    auto h = make_model_space(K, 2);
    for (int i = 0; i < 20; ++i) {
      const double r = rap(rng), T = len(rng);
      const auto sol = trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({std::cosh(r), std::sinh(r)}), T, 17);
      EXPECT_NEAR(lg_length(*h.spacetime, sol), T, 1e-9);
      EXPECT_NEAR(h.prelength->time_separation(sol.initial_point, sol.endpoint()), T, 1e-8) << "K=" << K;
    }
  }
}

// Property: C0, initial-velocity and d_Gamma convergence happen together.
TEST(ConvergenceProperty, SequencesVanishTogether) {
  for (double K : {0.0, -1.0}) {
    auto h = make_model_space(K, 2);
    const auto limit = trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, 0}), 2.0, 33);
    std::vector<GeodesicSolution> family;
    for (int n = 0; n < 12; ++n)
      family.push_back(trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, std::ldexp(0.2, -n)}), 2.0, 33));
    const auto rep = convergence_experiment(*h.spacetime, family, limit);
    EXPECT_TRUE(rep.c0_converges);
    EXPECT_TRUE(rep.velocity_converges);
    EXPECT_TRUE(rep.dgamma_converges);
    EXPECT_TRUE(rep.consistent);
    EXPECT_TRUE(rep.limit_is_geodesic);

    // A family that stays away converges in none of the three senses.
    std::vector<GeodesicSolution> apart(4, trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, 0.3}), 2.0, 33));
    const auto far = convergence_experiment(*h.spacetime, apart, limit);
    EXPECT_FALSE(far.c0_converges || far.velocity_converges || far.dgamma_converges);
    EXPECT_TRUE(far.consistent);
  }
}

TEST(DGammaGeodesic, ZeroOnlyForTheSameGeodesic) {
  auto h = make_model_space(-1.0, 2);
  const auto a = trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, 0}), 1.0, 17);
  const auto b = trace_geodesic(*h.spacetime, make_vec({0, 0}), make_vec({1, 0.1}), 1.0, 17);
  EXPECT_EQ(d_gamma(*h.spacetime, a, a), 0.0);
  EXPECT_GT(d_gamma(*h.spacetime, a, b), 1e-3);
  EXPECT_EQ(d_gamma(*h.spacetime, a, b), d_gamma(*h.spacetime, b, a));
}
