#include <gtest/gtest.h>

#include <random>

#include "lorentz/factory.hpp"
#include "lorentz/frechet.hpp"
#include "oracles.hpp"

using namespace lorentz;

TEST(DiscreteFrechet, MatchesRecursiveOracle) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> len(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = 1 + trial % 3;
    const auto a = oracle::random_walk(rng, len(rng), dim);
    const auto b = oracle::random_walk(rng, len(rng), dim);
    EXPECT_EQ(discrete_frechet(a, b), oracle::frechet_recursive(a, b));
  }
}

TEST(DiscreteFrechet, CouplingIsValidAndOptimal) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_walk(rng, 3 + trial % 9, 2);
    const auto b = oracle::random_walk(rng, 2 + trial % 7, 2);
    const auto fc = discrete_frechet_coupling(a, b);
    EXPECT_TRUE(fc.coupling.valid(a.size() - 1, b.size() - 1));
    EXPECT_EQ(fc.value, discrete_frechet(a, b));
    EXPECT_EQ(coupling_cost(a, b, fc.coupling), fc.value);
  }
}

TEST(MonotoneCoupling, ValidityRules) {
  MonotoneCoupling c;
  c.pairs = {{0, 0}, {1, 1}, {1, 2}, {2, 2}};
  EXPECT_TRUE(c.valid(2, 2));
  c.pairs = {{0, 0}, {2, 1}, {2, 2}};
  EXPECT_FALSE(c.valid(2, 2));  // skips an index
  c.pairs = {{0, 0}, {1, 1}};
  EXPECT_FALSE(c.valid(2, 2));  // does not end at (N, M)
}

TEST(DiscreteFrechet, KnownValues) {
  const std::vector<Event> a{make_vec({0, 0}), make_vec({1, 0}), make_vec({2, 0})};
  const std::vector<Event> b{make_vec({0, 1}), make_vec({2, 1})};
  EXPECT_DOUBLE_EQ(discrete_frechet(a, b), std::sqrt(2.0));
  const std::vector<Event> c{make_vec({0, 1}), make_vec({1, 1}), make_vec({2, 1})};
  EXPECT_DOUBLE_EQ(discrete_frechet(a, c), 1.0);
  EXPECT_EQ(discrete_frechet(a, a), 0.0);
  EXPECT_THROW(discrete_frechet(std::vector<Event>{}, a), DegenerateCurveError);
}

// Property: symmetry is exact and the triangle inequality holds to rounding.
TEST(DiscreteFrechet, MetricAxiomsOnRandomTriples) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> len(2, 15);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = oracle::random_walk(rng, len(rng), 2);
    const auto b = oracle::random_walk(rng, len(rng), 2);
    const auto c = oracle::random_walk(rng, len(rng), 2);
    const double ab = discrete_frechet(a, b), ba = discrete_frechet(b, a);
    EXPECT_EQ(ab, ba);
    EXPECT_LE(discrete_frechet(a, c), ab + discrete_frechet(b, c) + 1e-12);
    EXPECT_GE(ab, 0.0);
  }
}

TEST(CurveFrechet, ReparametrizationInvariantViaCanonicalForm) {
  auto h = make_model_space(0.0, 2);
  const std::vector<Event> pts{make_vec({0, 0}), make_vec({1, 0.3}), make_vec({2, 0.1})};
  SampledCurve a(h.prelength, {0.0, 0.3, 1.0}, pts);
  SampledCurve b(h.prelength, {0.0, 0.9, 1.0}, pts);
  EXPECT_EQ(discrete_frechet(canonicalize(a), canonicalize(b)), 0.0);
  EXPECT_EQ(d_gamma(canonicalize(a), canonicalize(b)), 0.0);
}

TEST(CurveFrechet, DifferentGroundsAreIncompatible) {
  auto m = make_model_space(0.0, 2);
  auto e = make_space(SpaceDescriptor{"euclidean"});
  SampledCurve a(m.prelength, {make_vec({0, 0}), make_vec({1, 0})});
  SampledCurve b(e.prelength, {make_vec({0, 0}), make_vec({1, 0})});
  EXPECT_THROW(discrete_frechet(a, b), IncompatibleError);
}

TEST(DGamma, AddsTauLengthDiscrepancy) {
  auto h = make_model_space(0.0, 2);
  SampledCurve a(h.prelength, {make_vec({0, 0}), make_vec({1, 0})});
  SampledCurve b(h.prelength, {make_vec({0, 0}), make_vec({2, 0})});
  const double df = discrete_frechet(canonicalize(a), canonicalize(b));
  EXPECT_NEAR(d_gamma(canonicalize(a), canonicalize(b)), df + 1.0, 1e-12);
}

TEST(FrechetRefine, ConvergesForSegments) {
  auto h = make_model_space(0.0, 2);
  SampledCurve a(h.prelength, {make_vec({0, 0}), make_vec({2, 0})});
  SampledCurve b(h.prelength, {make_vec({0, 0.5}), make_vec({1, 0.9}), make_vec({2, 0.5})});
  const auto r = frechet_refine(canonicalize(a), canonicalize(b), 1e-4);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.certified_gap, 1e-4);
  EXPECT_NEAR(r.value, 0.9, 1e-3);
}

TEST(FrechetRefine, SamplerVersionCertifiesGap) {
  auto line = [](double offset) {
    return [offset](std::size_t segs) {
      std::vector<Event> pts;
      for (std::size_t i = 0; i <= segs; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(segs);
        pts.push_back(make_vec({t, offset + 0.1 * std::sin(6.0 * t)}));
      }
      return pts;
    };
  };
  const auto r = frechet_refine(line(0.0), line(0.25), 4, 1e-6);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 0.25, 1e-6);
}

// Property: the normalized path is sum-norm 1-Lipschitz at sample resolution
// and its samples lie on the image of the input path.
TEST(NormalizeMonotone, LipschitzAndImagePreserving) {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> step(0.0, 1.0);
  std::bernoulli_distribution flat(0.3);
  for (int trial = 0; trial < 100; ++trial) {
    ParamPath p;
    double phi = 0.0, psi = 0.0;
    const int K = 5 + trial % 20;
    for (int k = 0; k < K; ++k) {
      p.params.push_back(static_cast<double>(k) / (K - 1));
      p.phi.push_back(phi);
      p.psi.push_back(psi);
      phi += flat(rng) ? 0.0 : step(rng);
      psi += flat(rng) ? 0.0 : step(rng);
    }
    const double sphi = p.phi.back(), spsi = p.psi.back();
    if (sphi + spsi == 0.0) continue;
    for (auto& x : p.phi) x /= (sphi + spsi) / 2.0;
    for (auto& x : p.psi) x /= (sphi + spsi) / 2.0;

    const auto n = normalize_monotone(p);
    ASSERT_GE(n.params.size(), 2u);
    EXPECT_NEAR(n.params.back(), 2.0, 1e-12);
    for (std::size_t i = 0; i < n.params.size(); ++i) {
      EXPECT_NEAR(n.phi[i] + n.psi[i], n.params[i], 1e-12);
      if (i > 0) {
        const double du = n.params[i] - n.params[i - 1];
        EXPECT_LE(std::abs(n.phi[i] - n.phi[i - 1]) + std::abs(n.psi[i] - n.psi[i - 1]), du + 1e-12);
        EXPECT_GE(n.phi[i], n.phi[i - 1]);
        EXPECT_GE(n.psi[i], n.psi[i - 1]);
      }
      // Distance from the output sample to the input polyline.
      double best = kInf;
      for (std::size_t k = 0; k + 1 < p.phi.size(); ++k) {
        const Eigen::Vector2d A(p.phi[k], p.psi[k]), B(p.phi[k + 1], p.psi[k + 1]), X(n.phi[i], n.psi[i]);
        const Eigen::Vector2d AB = B - A;
        const double l = AB.squaredNorm() > 0 ? std::clamp((X - A).dot(AB) / AB.squaredNorm(), 0.0, 1.0) : 0.0;
        best = std::min(best, (A + l * AB - X).norm());
      }
      EXPECT_LE(best, 1e-12);
    }
  }
}

TEST(NormalizeMonotone, RejectsDecreasingPaths) {
  ParamPath p{{0.0, 1.0}, {0.0, -1.0}, {0.0, 1.0}};
  EXPECT_THROW(normalize_monotone(p), DomainError);
}
