#include <gtest/gtest.h>

#include "test_util.hpp"
#include "twistgabor/discrete_spaces.hpp"
#include "twistgabor/tf_ops.hpp"

namespace twg {
namespace {

using testing::random_on;
using testing::rel_err;

struct LineSetup {
  Grid g{{16.0}, {128}};
  Lattice lat = Lattice::diagonal({2.0});
  SampledSignal chi = sample_function(g, rules::bump(1, 0.9));
};

DiscreteCoeffs random_c(const DiscreteSpaceSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_coeffs(spec.zero_coeffs(), rng);
}

TEST(DiscreteSpace, SynthesisIsSumOfTranslates) {
  LineSetup s;
  const DiscreteSpaceSpec spec(LpSpec{2.0, Weight::one()}, zero_twist(1), s.lat, s.chi);
  const DiscreteCoeffs c = random_c(spec, 1);
  SampledSignal oracle(s.g);
  for (Index i = 0; i < c.size(); ++i) {
    oracle += c.values[i] * translate(s.chi, spec.points()[static_cast<size_t>(i)].centered);
  }
  EXPECT_LT(rel_err(s_chi(c, spec), oracle), 1e-14);
}

TEST(DiscreteSpace, DisjointTranslatesFactorizeTheNorm) {
  LineSetup s;
  for (double p : {1.0, 2.0, 3.0}) {
    const DiscreteSpaceSpec spec(LpSpec{p, Weight::one()}, zero_twist(1), s.lat, s.chi);
    const DiscreteCoeffs c = random_c(spec, 2);
    double sum = 0.0;
    for (Index i = 0; i < c.size(); ++i) sum += std::pow(std::abs(c.values[i]), p);
    const double oracle = space_norm(s.chi, LpSpec{p, Weight::one()}) * std::pow(sum, 1.0 / p);
    EXPECT_NEAR(discrete_norm(c, spec), oracle, 1e-12 * oracle);
  }
}

TEST(DiscreteSpace, RejectsOversizedWindow) {
  LineSetup s;
  const SampledSignal wide = sample_function(s.g, rules::bump(1, 1.5));
  EXPECT_THROW(DiscreteSpaceSpec(LpSpec{2.0, Weight::one()}, zero_twist(1), s.lat, wide),
               InvalidArgument);
  EXPECT_THROW(DiscreteSpaceSpec(LpSpec{2.0, Weight::one()}, zero_twist(1), s.lat, SampledSignal(s.g)),
               InvalidArgument);
  EXPECT_THROW(DiscreteSpaceSpec(LpSpec{2.0, Weight::one()}, zero_twist(2), s.lat, s.chi),
               InvalidArgument);
}

TEST(WindowEquivalence, TranslatedWindowGivesConstantRatio) {
  LineSetup s;
  const SampledSignal chi1 = sample_function(s.g, rules::bump(1, 0.5));
  const SampledSignal chi2 = translate(chi1, Eigen::VectorXd::Constant(1, 0.25));
  for (double p : {1.0, 2.0}) {
    const DiscreteSpaceSpec spec(LpSpec{p, Weight::one()}, zero_twist(1), s.lat, chi1);
    const RatioStats st = window_equivalence_experiment(spec, chi1, chi2, 20, 3);
    EXPECT_EQ(st.trials, 20);
    EXPECT_EQ(st.ratios.size(), 20u);
    EXPECT_NEAR(st.band, 1.0, 1e-12);
    EXPECT_NEAR(st.ratio_min, 1.0, 1e-12);
  }
}

TEST(WindowEquivalence, BandStatistics) {
  const RatioStats st = RatioStats::from({2.0, 1.0, 4.0, 3.0}, 9);
  EXPECT_DOUBLE_EQ(st.ratio_min, 1.0);
  EXPECT_DOUBLE_EQ(st.ratio_max, 4.0);
  EXPECT_DOUBLE_EQ(st.band, 4.0);
  EXPECT_DOUBLE_EQ(st.prefix(2).band, 2.0);
  EXPECT_DOUBLE_EQ(band_drift(st, 2), 1.0);
}

TEST(Complemented, PairingConstantAndIdentity) {
  const Grid ps = Grid({4.0}, {16}).phase_space();
  const Lattice lat = Lattice::diagonal({1.0, 1.0});
  const SampledSignal chi = sample_function(ps, rules::bump(Eigen::Vector2d(0.0, 0.0),
                                                            Eigen::Vector2d(0.45, 0.45)));
  const DiscreteSpaceSpec spec(LpSpec{2.0, Weight::one()}, standard_twist(1), lat, chi);
  const SampledSignal psi = sample_function(ps, rules::bump(Eigen::Vector2d(0.0625, -0.0625),
                                                            Eigen::Vector2d(0.35, 0.4)));
  const Complex kappa = pairing_constant(psi, spec);
  const Complex oracle = ps.cell_volume() * (chirp(psi, standard_twist(1)).values().array() * chi.values().array()).sum();
  EXPECT_LT(std::abs(kappa - oracle), 1e-14);
  EXPECT_LT(complemented_identity_check(spec, psi, 5, 1), 1e-12);
}

TEST(FourierLp, SingleAndPairedCoefficients) {
  const Grid g({16.0}, {128});
  const Lattice lat = Lattice::diagonal({2.0});
  DiscreteCoeffs c = DiscreteCoeffs::zeros(lat, g);
  c.values[c.find_coords(MultiIndex{0})] = 1.0;
  // |dual cell| = 1 / 2
  EXPECT_NEAR(fourier_lp_norm(c, 1.0), 0.5, 1e-14);
  EXPECT_NEAR(fourier_lp_norm(c, 2.0), std::sqrt(0.5), 1e-14);
  c.values[c.find_coords(MultiIndex{3})] = Complex(0.0, 2.0);
  EXPECT_NEAR(fourier_lp_norm(c, 2.0), std::sqrt(0.5 * 5.0), 1e-13);  // Parseval
  DiscreteCoeffs cos2 = DiscreteCoeffs::zeros(lat, g);
  cos2.values[cos2.find_coords(MultiIndex{1})] = 1.0;
  cos2.values[cos2.find_coords(MultiIndex{-1})] = 1.0;
  // 0.5 * int_0^1 |2 cos(2 pi u)| du
  EXPECT_NEAR(fourier_lp_norm(cos2, 1.0), 0.5 * 4.0 / kPi, 0.02);
  EXPECT_THROW(fourier_lp_norm(c, 0.5), InvalidArgument);
}

TEST(MixedNorm, UnweightedRatioIsConstant) {
  const Grid tg({4.0}, {64});
  MixedNormConfig cfg;
  cfg.lattice_time = Lattice::diagonal({0.25});
  cfg.lattice_freq = Lattice::diagonal({1.0});
  cfg.chi_time = sample_function(tg, rules::bump(1, 0.125));
  cfg.chi_freq = sample_function(tg.dual(), rules::bump(1, 0.5));
  for (double p : {1.0, 2.0}) {
    for (double q : {1.0, 2.0}) {
      cfg.p = p;
      cfg.q = q;
      const RatioStats st = mixed_norm_identity_experiment(cfg, 10, 4);
      EXPECT_GT(st.ratio_min, 0.0);
      EXPECT_NEAR(st.band, 1.0, 1e-9) << p << ' ' << q;
    }
  }
}

TEST(MixedNorm, WeightedRatioIsBounded) {
  const Grid tg({4.0}, {64});
  MixedNormConfig cfg;
  cfg.p = 2.0;
  cfg.q = 1.0;
  cfg.w = Weight::polynomial(1.0);
  cfg.lattice_time = Lattice::diagonal({0.25});
  cfg.lattice_freq = Lattice::diagonal({1.0});
  cfg.chi_time = sample_function(tg, rules::bump(1, 0.125));
  cfg.chi_freq = sample_function(tg.dual(), rules::bump(1, 0.5));
  const RatioStats st = mixed_norm_identity_experiment(cfg, 20, 5);
  EXPECT_GT(st.ratio_min, 0.0);
  EXPECT_LT(st.band, 10.0);
}

TEST(Poisson, GaussianOnCoarseLattice) {
  const Grid g({32.0}, {512});
  const SampledSignal f = sample_function(g, rules::gaussian(1));
  const SampledSignal one = sample_function(g, rules::constant(1.0));
  for (double y : {0.0, 1.0 / 32.0, 0.25}) {
    EXPECT_LT(poisson_check(f, one, Lattice::diagonal({2.0}), Eigen::VectorXd::Constant(1, y)), 1e-8);
  }
  EXPECT_THROW(poisson_check(f, one, Lattice::diagonal({2.0}), Eigen::VectorXd::Constant(1, 0.01)),
               AlignmentError);
}

}  // namespace
}  // namespace twg
