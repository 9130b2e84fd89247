#include <gtest/gtest.h>

#include <random>

#include "lorentz/factory.hpp"
#include "lorentz/space.hpp"
#include "oracles.hpp"

using namespace lorentz;

namespace {

std::vector<Event> box_samples(std::mt19937_64& rng, int n, int dim, double t_span, double x_span) {
  std::uniform_real_distribution<double> t(0.0, t_span), x(-x_span, x_span);
  std::vector<Event> out;
  for (int i = 0; i < n; ++i) {
    Event e(dim);
    e[0] = t(rng);
    for (int k = 1; k < dim; ++k) e[k] = x(rng);
    out.push_back(e);
  }
  return out;
}

}  // namespace

TEST(EuclideanSpace, TauVanishesAndCausalityIsEquality) {
  EuclideanSpace e(3);
  const Event x = make_vec({0, 1, 2}), y = make_vec({1, 1, 2});
  EXPECT_EQ(e.time_separation(x, y), 0.0);
  EXPECT_TRUE(e.causal(x, x));
  EXPECT_FALSE(e.causal(x, y));
  EXPECT_DOUBLE_EQ(e.distance(x, y), 1.0);
}

TEST(PreLengthSpace, ChronologyFollowsTauThreshold) {
  auto h = make_model_space(0.0, 2);
  const Event o = make_vec({0, 0});
  EXPECT_TRUE(chronological(*h.prelength, o, make_vec({1, 0.5})));
  EXPECT_FALSE(chronological(*h.prelength, o, make_vec({1, 1})));  // null
  EXPECT_TRUE(h.prelength->causal(o, make_vec({1, 1})));
  EXPECT_FALSE(chronological(*h.prelength, o, make_vec({1, 2})));
}

TEST(PreLengthSpace, CheckDomainRejectsWrongDimension) {
  auto h = make_model_space(0.0, 2);
  EXPECT_THROW(h.prelength->check_domain(make_vec({0, 0, 0})), DomainError);
  EXPECT_NO_THROW(h.prelength->check_domain(make_vec({0, 0})));
}

TEST(ReverseTriangleAudit, HoldsOnModelSamples) {
  std::mt19937_64 rng(11);
  for (double K : {0.0, -1.0, 1.0}) {
    auto h = make_model_space(K, 2);
    const auto samples = box_samples(rng, 30, 2, 2.0, 0.8);
    const auto rep = reverse_triangle_audit(*h.prelength, samples, 1e-9);
    EXPECT_TRUE(rep.ok()) << "K=" << K << " worst " << rep.worst_margin;
    EXPECT_GT(rep.ordered_triples, 0u);
  }
}

TEST(ReverseTriangleAudit, MinkowskiHigherDimensions) {
  std::mt19937_64 rng(12);
  for (int dim : {3, 4}) {
    auto h = make_model_space(0.0, dim);
    const auto rep = reverse_triangle_audit(*h.prelength, box_samples(rng, 25, dim, 3.0, 1.0), 1e-12);
    EXPECT_TRUE(rep.ok());
  }
}

TEST(ReverseTriangleAudit, DetectsViolationsOfAFakeSeparation) {
  // tau = chart Euclidean distance along increasing time is subadditive, not
  // superadditive, so the audit must flag it.
  class Fake final : public PreLengthSpace {
   public:
    int dim() const override { return 2; }
    std::string name() const override { return "fake"; }
    double time_separation(const Event& x, const Event& y) const override {
      return y[0] > x[0] ? (y - x).norm() : 0.0;
    }
  } fake;
  const std::vector<Event> pts{make_vec({0, 0}), make_vec({1, 1}), make_vec({2, 0})};
  const auto rep = reverse_triangle_audit(fake, pts, 1e-12);
  EXPECT_GT(rep.violations, 0u);
  EXPECT_LT(rep.worst_margin, 0.0);
}

TEST(TimeSeparation, AntisymmetricOnTimelikePairs) {
  std::mt19937_64 rng(13);
  for (double K : {0.0, -1.0, 1.0}) {
    auto h = make_model_space(K, 2);
    const auto pts = box_samples(rng, 40, 2, 2.0, 1.0);
    for (const auto& x : pts)
      for (const auto& y : pts)
        if (h.prelength->time_separation(x, y) > 0.0) EXPECT_EQ(h.prelength->time_separation(y, x), 0.0);
  }
}

TEST(TimeSeparation, LowerSemicontinuousAlongConvergingPairs) {
  // tau(x, y) <= liminf tau(x_n, y_n) for x_n -> x, y_n -> y.
  for (double K : {0.0, -1.0, 1.0}) {
    auto h = make_model_space(K, 2);
    const Event x = make_vec({0, 0}), y = make_vec({1.2, 0.4});
    const double limit = h.prelength->time_separation(x, y);
    double last = 0.0;
    for (int n = 4; n < 40; ++n) {
      const double e = std::ldexp(1.0, -n);
      const Event xn = x + make_vec({e, -e});
      const Event yn = y + make_vec({-e, e});
      last = h.prelength->time_separation(xn, yn);
      // The perturbation moves tau by O(e); any drop must shrink with e.
      EXPECT_LE(limit, last + 8.0 * e) << "K=" << K << " n=" << n;
    }
    EXPECT_NEAR(limit, last, 1e-9) << "K=" << K;
  }
}

TEST(Factory, BuildsEveryDescriptorKind) {
  SpaceDescriptor d;
  d.space = "minkowski";
  d.dim = 3;
  auto m = make_space(d);
  ASSERT_TRUE(m.model && m.spacetime);
  EXPECT_EQ(m.prelength->dim(), 3);
  EXPECT_EQ(m.model->curvature(), 0.0);

  d.space = "product";
  d.fiber = "sphere";
  auto p = make_space(d);
  EXPECT_FALSE(p.model);
  ASSERT_TRUE(p.spacetime);
  EXPECT_EQ(p.spacetime->dim(), 3);

  d.fiber = "flat";
  d.dim = 2;
  auto f = make_space(d);
  EXPECT_EQ(f.spacetime->dim(), 2);

  d.space = "euclidean";
  auto e = make_space(d);
  EXPECT_FALSE(e.spacetime);
  EXPECT_EQ(e.prelength->time_separation(make_vec({0, 0}), make_vec({5, 0})), 0.0);
}

TEST(Factory, RejectsUnknownKinds) {
  SpaceDescriptor d;
  d.space = "torus";
  EXPECT_THROW(make_space(d), DomainError);
  d.space = "product";
  d.fiber = "cube";
  EXPECT_THROW(make_space(d), DomainError);
}

TEST(Factory, ProductTauMatchesMinkowskiForFlatFiber) {
  SpaceDescriptor d;
  d.space = "product";
  d.fiber = "flat";
  d.dim = 2;
  auto h = make_space(d);
  const Event x = make_vec({0, 0}), y = make_vec({2, 0.7});
  EXPECT_NEAR(h.prelength->time_separation(x, y), oracle::minkowski_tau(x, y), 1e-9);
}
