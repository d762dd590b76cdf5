#include <gtest/gtest.h>

#include "test_util.hpp"
#include "twistgabor/modspace.hpp"

namespace twg {
namespace {

using testing::random_on;

TEST(Modulation, L2NormFactorizes) {
  const Grid g({8.0}, {32});
  const SampledSignal f = random_on(g, 1), psi = random_on(g, 2);
  EXPECT_NEAR(modulation_norm(f, psi, LpSpec{2.0, Weight::one()}), l2_norm(f) * l2_norm(psi), 1e-11);
}

TEST(Modulation, GaborNormRequiresMatchingLattice) {
  const Grid g({8.0}, {64});
  const GaborSystem sys(sample_function(g, rules::gaussian(1)), Lattice::diagonal({0.5, 0.5}));
  const Lattice other = Lattice::diagonal({1.0, 1.0});
  const DiscreteSpaceSpec wrong(LpSpec{2.0, Weight::one()}, standard_twist(1), other,
                                sample_function(sys.phase_grid(), rules::bump(2, 0.5)));
  EXPECT_THROW(gabor_modulation_norm(random_on(g, 1), sys, wrong), InvalidArgument);

  const DiscreteSpaceSpec good(LpSpec{2.0, Weight::one()}, standard_twist(1), sys.lattice(),
                               sample_function(sys.phase_grid(), rules::bump(2, 0.25)));
  // Both norms are equivalent on the frame: the ratio stays in a band.
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SampledSignal f = random_on(g, seed);
    ratios.push_back(gabor_modulation_norm(f, sys, good) /
                     modulation_norm(f, sys.window(), LpSpec{2.0, Weight::one()}));
  }
  const RatioStats st = RatioStats::from(ratios, 0);
  EXPECT_GT(st.ratio_min, 0.0);
  EXPECT_LT(st.band, 2.0);
}

TEST(Amalgam, ConstantWindowIsScaledNorm) {
  const Grid g({4.0}, {16});
  const SampledSignal f = random_on(g, 3);
  const SampledSignal one = sample_function(g, rules::constant(1.0));
  EXPECT_NEAR(amalgam_norm(f, LpSpec{2.0, Weight::one()}, 2.0, Weight::one(), one),
              l2_norm(f) * 2.0, 1e-12);
  EXPECT_THROW(amalgam_norm(f, LpSpec{2.0, Weight::one()}, 0.5, Weight::one(), one), InvalidArgument);
  EXPECT_THROW(amalgam_norm(f, LpSpec{2.0, Weight::one()}, 1.0, Weight::one(), SampledSignal(g)),
               InvalidArgument);
}

TEST(Amalgam, FourierMixedIdentity) {
  const Grid g({8.0}, {64});
  const SampledSignal psi = sample_function(g, rules::gaussian(1));
  for (double p2 : {1.0, 2.0}) {
    const RatioStats st =
        mod_tensor_identity_experiment(p2, Weight::polynomial(1.0), Weight::one(), psi, 5, 1);
    EXPECT_NEAR(st.ratio_min, 1.0, 1e-10);
    EXPECT_NEAR(st.ratio_max, 1.0, 1e-10);
  }
}

TEST(SigmaWeight, ReducesToOmegaAndMultiplies) {
  const Grid ps = Grid({4.0}, {8}).phase_space();
  const Weight omega = Weight::polynomial(1.0);
  const Eigen::ArrayXd w = omega.evaluate(ps);
  EXPECT_LT((sigma_weight(omega, Weight::polynomial(-1.0), ps).evaluate(ps) - w).abs().maxCoeff(), 1e-14);
  const Eigen::ArrayXd s = sigma_weight(omega, Weight::polynomial(2.0, {1}), ps).evaluate(ps);
  for (Index k = 0; k < ps.size(); ++k) {
    const double x = ps.centered_point(k)[0];
    EXPECT_NEAR(s[k], w[k] * std::pow(1.0 + std::abs(x), 2.0), 1e-12);
  }
  EXPECT_THROW(sigma_weight(omega, omega, Grid({4.0, 3.0}, {8, 8})), InvalidArgument);
}

TEST(LocalizedSignal, ConcentratedNearOrigin) {
  const Grid g({16.0}, {128});
  std::mt19937_64 rng(4);
  const SampledSignal f = random_localized_signal(g, rng);
  double inner = 0.0;
  for (Index k = 0; k < g.size(); ++k) {
    if (std::abs(g.centered_point(k)[0]) < 4.0) inner += std::norm(f[k]);
  }
  EXPECT_GT(inner / f.values().squaredNorm(), 0.99);
}

TEST(Expansion, FejerExpansionConverges) {
  const Grid g({8.0}, {64});
  const GaborSystem sys(sample_function(g, rules::gaussian(1)), Lattice::diagonal({0.5, 0.5}));
  const SampledSignal gamma = canonical_dual(sys);
  const DiscreteSpaceSpec dspec(LpSpec{2.0, Weight::one()}, standard_twist(1), sys.lattice(),
                                sample_function(sys.phase_grid(), rules::bump(2, 0.25)));
  const SampledSignal f = sample_function(g, rules::gaussian(1));
  const auto rows = frame_expansion_check(f, sys, gamma, dspec, {1, 4, 16, 64});
  ASSERT_EQ(rows.size(), 4u);
  for (size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].error, rows[i - 1].error);
  EXPECT_LT(rows.back().error, 0.1 * rows.front().error);
  EXPECT_THROW(frame_expansion_check(f, sys, sys.window(), dspec, {1}), InvalidArgument);
}

}  // namespace
}  // namespace twg
