#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "twistgabor/grid.hpp"

namespace twg {
namespace {

using testing::naive_fourier;
using testing::random_on;
using testing::rel_err;

TEST(Grid, RejectsInvalidShapes) {
  EXPECT_THROW(Grid({1.0}, {3}), InvalidArgument);
  EXPECT_THROW(Grid({0.0}, {4}), InvalidArgument);
  EXPECT_THROW(Grid({1.0, 1.0}, {4}), InvalidArgument);
  EXPECT_THROW(Grid(std::vector<double>(5, 1.0), std::vector<Index>(5, 2)), InvalidArgument);
  EXPECT_THROW(Grid({1.0}, {1 << 20}, 1.0), InvalidArgument);
}

TEST(Grid, FlattenRoundTrip) {
  const Grid g({2.0, 3.0, 1.5}, {4, 6, 2});
  for (Index k = 0; k < g.size(); ++k) {
    const MultiIndex idx = g.unflatten(k);
    EXPECT_EQ(g.flatten(idx), k);
    MultiIndex shifted = idx;
    for (int j = 0; j < g.dim(); ++j) shifted[j] -= 3 * g.count(j);
    EXPECT_EQ(g.flatten_wrapped(shifted), k);
  }
}

TEST(Grid, CenteredPointsAreTorusMinimal) {
  const Grid g({5.0, 2.0}, {10, 8});
  for (Index k = 0; k < g.size(); ++k) {
    const Eigen::VectorXd c = g.centered_point(k);
    const Eigen::VectorXd p = g.point(k);
    for (int j = 0; j < g.dim(); ++j) {
      EXPECT_GE(c[j], -g.length(j) / 2);
      EXPECT_LT(c[j], g.length(j) / 2);
      const double wraps = (p[j] - c[j]) / g.length(j);
      EXPECT_NEAR(wraps, std::round(wraps), 1e-12);
    }
  }
}

TEST(Grid, DualAndPhaseSpace) {
  const Grid g({4.0}, {16});
  const Grid d = g.dual();
  EXPECT_DOUBLE_EQ(d.length(0), 4.0);
  EXPECT_DOUBLE_EQ(d.spacing(0), 0.25);
  EXPECT_EQ(d.dual(), g);
  const Grid ps = g.phase_space();
  EXPECT_EQ(ps.dim(), 2);
  EXPECT_TRUE(ps.is_phase_space());
  EXPECT_EQ(ps.block(0, 1), g);
  EXPECT_EQ(ps.block(1, 1), d);
  EXPECT_FALSE(Grid({4.0, 2.0}, {16, 16}).is_phase_space());
}

TEST(Fourier, MatchesDirectSum) {
  const Grid g({3.0, 2.0}, {6, 4});
  const SampledSignal f = random_on(g, 11);
  EXPECT_LT(rel_err(fourier(f), naive_fourier(f)), 1e-13);
}

TEST(Fourier, InverseAndPlancherel) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Grid g({2.5, 7.0}, {8, 10});
    const SampledSignal f = random_on(g, seed);
    const SampledSignal F = fourier(f);
    EXPECT_EQ(F.grid(), g.dual());
    EXPECT_LT(rel_err(inverse_fourier(F), f), 1e-14);
    EXPECT_NEAR(l2_norm(F), l2_norm(f), 1e-12 * l2_norm(f));
  }
}

TEST(Fourier, GaussianIsSelfDual) {
  const Grid g({16.0}, {256});
  const SampledSignal f = sample_function(g, rules::gaussian(1));
  EXPECT_NEAR(l2_norm(f), 1.0, 1e-12);
  const SampledSignal F = fourier(f);
  const SampledSignal oracle = sample_function(F.grid(), rules::gaussian(1));
  EXPECT_LT((F.values() - oracle.values()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Sampling, RulesAndErrors) {
  const Grid g({4.0}, {8});
  EXPECT_THROW(sample_function(g, [](const Eigen::VectorXd&) { return Complex(NAN, 0.0); }),
               InvalidArgument);
  const SampledSignal b = sample_function(g, rules::bump(1, 1.0));
  for (Index k = 0; k < g.size(); ++k) {
    if (std::abs(g.centered_point(k)[0]) >= 1.0) {
      EXPECT_EQ(b[k], Complex(0.0));
    }
  }
  EXPECT_DOUBLE_EQ(b[0].real(), 1.0);
  const SampledSignal h = sample_function(g, rules::hat(1, 2.0));
  EXPECT_DOUBLE_EQ(h[1].real(), 0.75);
  const SampledSignal delta = discrete_delta(g);
  EXPECT_NEAR(inner_product(delta, sample_function(g, rules::constant(1.0))).real(), 1.0, 1e-15);
}

TEST(Sampling, RandomSignalHasUnitVariance) {
  const Grid g({1.0}, {1 << 14});
  const SampledSignal f = random_on(g, 3);
  const double mean_sq = f.values().squaredNorm() / static_cast<double>(g.size());
  EXPECT_NEAR(mean_sq, 1.0, 0.05);
}

TEST(Norms, LpMatchesDirectSum) {
  const Grid g({3.0, 2.0}, {6, 8});
  const SampledSignal f = random_on(g, 5);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    double s = 0.0;
    for (Index k = 0; k < g.size(); ++k) s += std::pow(std::abs(f[k]), p);
    const double oracle = std::pow(g.cell_volume() * s, 1.0 / p);
    EXPECT_NEAR(space_norm(f, LpSpec{p, Weight::one()}), oracle, 1e-12 * oracle);
  }
  EXPECT_DOUBLE_EQ(space_norm(f, LpSpec{kInf, Weight::one()}), f.values().cwiseAbs().maxCoeff());
  EXPECT_NEAR(space_norm(f, LpSpec{2.0, Weight::one()}), l2_norm(f), 1e-12);
}

TEST(Norms, MixedWithEqualExponentsIsLp) {
  const Grid g({3.0, 2.0}, {6, 8});
  const SampledSignal f = random_on(g, 6);
  for (double p : {1.0, 2.0, 4.0}) {
    EXPECT_NEAR(space_norm(f, MixedLpqSpec{p, p, Weight::one(), 1}),
                space_norm(f, LpSpec{p, Weight::one()}), 1e-12);
  }
}

TEST(Norms, MixedMatchesDirectSum) {
  const Grid g({3.0, 2.0}, {6, 4});
  const SampledSignal f = random_on(g, 9);
  // inner exponent over axis 0, outer over axis 1
  const double p = 1.0, q = 3.0;
  double outer = 0.0;
  for (Index b = 0; b < 4; ++b) {
    double inner = 0.0;
    for (Index a = 0; a < 6; ++a) inner += std::pow(std::abs(f[a * 4 + b]), p) * g.spacing(0);
    outer += std::pow(std::pow(inner, 1.0 / p), q) * g.spacing(1);
  }
  const double oracle = std::pow(outer, 1.0 / q);
  EXPECT_NEAR(space_norm(f, MixedLpqSpec{p, q, Weight::one(), 1}), oracle, 1e-12 * oracle);
}

TEST(Norms, FourierLpIsLpOfInverseTransform) {
  const Grid g({8.0}, {32});
  const SampledSignal f = random_on(g, 1);
  EXPECT_NEAR(space_norm(f, FourierLpSpec{1.0}),
              space_norm(inverse_fourier(f), LpSpec{1.0, Weight::one()}), 1e-12);
  EXPECT_NEAR(space_norm(f, FourierLpSpec{2.0}), l2_norm(f), 1e-12);
}

TEST(Norms, PolynomialWeight) {
  const Grid g({8.0}, {16});
  const SampledSignal one = sample_function(g, rules::constant(1.0));
  const Weight w = Weight::polynomial(2.0);
  const Eigen::ArrayXd vals = w.evaluate(g);
  for (Index k = 0; k < g.size(); ++k) {
    EXPECT_DOUBLE_EQ(vals[k], std::pow(1.0 + std::abs(g.centered_point(k)[0]), 2.0));
  }
  EXPECT_DOUBLE_EQ(space_norm(one, C0wSpec{w}), 25.0);
  EXPECT_THROW(space_norm(one, LpSpec{0.5, Weight::one()}), InvalidArgument);
}

TEST(Norms, LpCombineAvoidsOverflow) {
  const std::vector<double> v = {1e200, 1e200};
  EXPECT_NEAR(lp_combine(v, 2.0, 1.0) / 1e200, std::sqrt(2.0), 1e-14);
  EXPECT_DOUBLE_EQ(lp_combine(v, kInf, 3.0), 1e200);
}

}  // namespace
}  // namespace twg
