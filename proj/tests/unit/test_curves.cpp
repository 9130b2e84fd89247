#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lorentz/curve.hpp"
#include "lorentz/factory.hpp"
#include "lorentz/geodesic.hpp"
#include "oracles.hpp"

using namespace lorentz;

namespace {

std::vector<double> uniform(std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

}  // namespace

TEST(SampledCurve, ValidatesParameters) {
  auto h = make_model_space(0.0, 2);
  const std::vector<Event> pts{make_vec({0, 0}), make_vec({1, 0})};
  EXPECT_THROW(SampledCurve(h.prelength, {0.0, 0.0}, pts), DomainError);
  EXPECT_THROW(SampledCurve(h.prelength, {0.0, 1.5}, pts), DomainError);
  EXPECT_THROW(SampledCurve(h.prelength, std::vector<Event>{make_vec({0, 0})}), DegenerateCurveError);
}

TEST(SampledCurve, AtInterpolatesBetweenSamples) {
  auto h = make_model_space(0.0, 2);
  SampledCurve c(h.prelength, {make_vec({0, 0}), make_vec({2, 1})});
  EXPECT_TRUE(c.at(0.5).isApprox(make_vec({1, 0.5})));
  EXPECT_TRUE(c.at(1.0).isApprox(make_vec({2, 1})));
  EXPECT_EQ(c.interpolation(), Interpolation::geodesic);
}

TEST(TauLength, StraightSegmentIsMaximal) {
  auto h = make_model_space(0.0, 2);
  SampledCurve c(h.prelength, {make_vec({0, 0}), make_vec({1, 0.2}), make_vec({2, 0.4}), make_vec({3, 0.6})});
  EXPECT_NEAR(tau_length(c).value, oracle::minkowski_tau(c.front(), c.back()), 1e-12);
  EXPECT_TRUE(is_maximizer(c, 1e-9));
}

TEST(TauLength, BrokenCurveIsShorterThanItsChord) {
  auto h = make_model_space(0.0, 2);
  SampledCurve c(h.prelength, {make_vec({0, 0}), make_vec({1, 0.8}), make_vec({2, 0})});
  const double chord = h.prelength->time_separation(c.front(), c.back());
  EXPECT_LT(tau_length(c).value, chord - 0.1);
  EXPECT_FALSE(is_maximizer(c, 1e-6));
}

TEST(TauLength, RejectsNonCausalCurves) {
  auto h = make_model_space(0.0, 2);
  SampledCurve c(h.prelength, {make_vec({0, 0}), make_vec({1, 2})});
  EXPECT_FALSE(is_causal(c));
  EXPECT_THROW(tau_length(c), ClassificationError);
}

TEST(TauLength, RefinementGapIsNonnegative) {
  std::mt19937_64 rng(31);
  auto h = make_model_space(0.0, 2);
  for (int i = 0; i < 20; ++i) {
    SampledCurve c(h.prelength, oracle::timelike_polyline(rng, make_vec({0, 0}), 12, 0.2, 0.8));
    const auto len = tau_length(c);
    EXPECT_GE(len.refinement_gap, -1e-12);
    EXPECT_LE(len.value, h.prelength->time_separation(c.front(), c.back()) + 1e-12);
  }
}

TEST(CausalCharacter, DistinguishesNullAndTimelike) {
  auto h = make_model_space(0.0, 2);
  EXPECT_EQ(classify_character(SampledCurve(h.prelength, {make_vec({0, 0}), make_vec({1, 1}), make_vec({2, 2})})),
            CausalCharacter::null);
  EXPECT_EQ(classify_character(SampledCurve(h.prelength, {make_vec({0, 0}), make_vec({1, 0.5})})),
            CausalCharacter::timelike);
  EXPECT_EQ(classify_character(SampledCurve(h.prelength, {make_vec({0, 0}), make_vec({1, 1}), make_vec({2, 1})})),
            CausalCharacter::causal_mixed);
}

// Property: the Lorentzian length integral and the tau-length agree on causal
// polylines resampled finely, in each model plane.
TEST(LengthProperty, MetricLengthEqualsTauLength) {
  std::mt19937_64 rng(32);
  for (double K : {0.0, 1.0, -1.0}) {
    auto h = make_model_space(K, 2);
    for (int i = 0; i < 10; ++i) {
      SampledCurve coarse(h.prelength, oracle::timelike_polyline(rng, make_vec({0, 0}), 5, 0.25, 0.6));
      const auto fine = resample(coarse, uniform(400));
      EXPECT_NEAR(l_g_length(fine, *h.spacetime), tau_length(fine).value, 1e-4) << "K=" << K;
    }
  }
}

TEST(Canonicalize, ParameterProportionalToArclength) {
  auto h = make_model_space(0.0, 2);
  SampledCurve c(h.prelength, {make_vec({0, 0}), make_vec({1, 0}), make_vec({4, 0})});
  const auto cls = canonicalize(c);
  ASSERT_EQ(cls.canonical.params().size(), 3u);
  EXPECT_NEAR(cls.canonical.params()[1], 0.25, 1e-12);
  EXPECT_TRUE(cls.canonical.back().isApprox(c.back()));
}

TEST(Canonicalize, RejectsRepeatedPoints) {
  auto h = make_model_space(0.0, 2);
  SampledCurve c(h.prelength, {make_vec({0, 0}), make_vec({0, 0}), make_vec({1, 0})});
  EXPECT_THROW(canonicalize(c), DegenerateCurveError);
}

TEST(Canonicalize, ReparametrizationInvariant) {
  auto h = make_model_space(0.0, 2);
  const std::vector<Event> pts{make_vec({0, 0}), make_vec({1, 0.3}), make_vec({2.5, 0.1}), make_vec({3, 0.9})};
  SampledCurve a(h.prelength, {0.0, 0.1, 0.2, 1.0}, pts);
  SampledCurve b(h.prelength, {0.0, 0.7, 0.8, 0.9}, pts);
  const auto ca = canonicalize(a), cb = canonicalize(b);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(ca.canonical.params()[i], cb.canonical.params()[i], 1e-15);
}

TEST(CurveCsv, RoundTrip) {
  auto h = make_model_space(0.0, 3);
  const std::vector<double> t{0.0, 0.5, 2.0};
  const std::vector<Event> pts{make_vec({0, 0, 0}), make_vec({1, 0.2, 0.1}), make_vec({2, 0.3, -0.4})};
  std::stringstream ss;
  write_curve_csv(ss, t, pts);
  const auto c = read_curve_csv(ss, h.prelength);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c.params()[1], 0.25, 1e-15);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_TRUE(c.points()[i].isApprox(pts[i]));
}

TEST(CurveCsv, RejectsMalformedRows) {
  auto h = make_model_space(0.0, 2);
  std::stringstream wrong_width("t,x1,x2\n0,0,0\n1,1\n");
  EXPECT_THROW(read_curve_csv(wrong_width, h.prelength), DomainError);
  std::stringstream not_number("t,x1,x2\n0,0,0\n1,a,0\n");
  EXPECT_THROW(read_curve_csv(not_number, h.prelength), DomainError);
}

TEST(Resample, KeepsEndpointsAndImage) {
  auto h = make_model_space(-1.0, 2);
  SampledCurve c(h.prelength, {make_vec({0, 0}), make_vec({1, 0.3}), make_vec({2, 0.1})});
  const auto r = resample(c, uniform(33));
  EXPECT_TRUE(r.front().isApprox(c.front()));
  EXPECT_TRUE(r.back().isApprox(c.back()));
  EXPECT_NEAR(tau_length(r).value, tau_length(c).value, 1e-9);
}

TEST(Lipschitz, EstimateOfUniformSegment) {
  auto h = make_model_space(0.0, 2);
  SampledCurve c(h.prelength, {make_vec({0, 0}), make_vec({1, 0}), make_vec({2, 0})});
  EXPECT_NEAR(c.lipschitz_estimate(), 2.0, 1e-12);
  EXPECT_NEAR(c.mesh_width(), 1.0, 1e-12);
}
