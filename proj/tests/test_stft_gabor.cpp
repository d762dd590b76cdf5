#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"
#include "twistgabor/stft_gabor.hpp"
#include "twistgabor/tf_ops.hpp"

namespace twg {
namespace {

using testing::random_on;
using testing::rel_err;

TEST(Stft, MatchesDirectSum) {
  const Grid g({3.0}, {12});
  const SampledSignal f = random_on(g, 1), psi = random_on(g, 2);
  const SampledSignal v = stft_full(f, psi);
  ASSERT_EQ(v.grid(), g.phase_space());
  for (Index k = 0; k < v.size(); ++k) {
    const MultiIndex xi = v.grid().unflatten(k);
    Complex s = 0.0;
    for (Index t = 0; t < g.size(); ++t) {
      const Complex w = std::conj(psi[((t - xi[0]) % 12 + 12) % 12]);
      s += f[t] * w * std::polar(1.0, -2 * kPi * static_cast<double>(t * xi[1]) / 12.0);
    }
    ASSERT_LT(std::abs(v[k] - g.cell_volume() * s), 1e-12);
  }
}

TEST(Stft, OrthogonalityCovarianceReproducing) {
  const Grid g({std::sqrt(20.0)}, {20});
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SampledSignal f = random_on(g, seed), phi = random_on(g, seed + 1);
    const SampledSignal psi = random_on(g, seed + 2), gamma = random_on(g, seed + 3);
    EXPECT_LT(orthogonality_residual(f, phi, psi, gamma), 1e-12);
    const Grid ps = g.phase_space();
    const Eigen::VectorXd z = ps.point(static_cast<Index>(seed * 37 + 5) % ps.size());
    EXPECT_LT(covariance_residual(f, psi, z), 1e-12);
    EXPECT_LT(reproducing_check(f, psi, gamma, phi), 1e-10);
  }
}

TEST(Stft, ModulationPreservesNorm) {
  // ||V_psi f||_2 = ||f||_2 ||psi||_2.
  const Grid g({4.0}, {16});
  const SampledSignal f = random_on(g, 3), psi = random_on(g, 4);
  EXPECT_NEAR(l2_norm(stft_full(f, psi)), l2_norm(f) * l2_norm(psi), 1e-11);
}

TEST(Gabor, AnalysisSynthesisAdjoint) {
  const Grid g({8.0}, {32});
  const GaborSystem sys(random_on(g, 1), Lattice::diagonal({0.5, 0.5}));
  const SampledSignal f = random_on(g, 2);
  std::mt19937_64 rng(3);
  const DiscreteCoeffs c = random_coeffs(sys.zero_coeffs(), rng);
  const Complex lhs = analysis(f, sys).values.dot(c.values);  // sum conj(c) V f
  const Complex rhs = inner_product(f, synthesis(c, sys));
  EXPECT_LT(std::abs(std::conj(lhs) - rhs), 1e-11 * std::abs(rhs));
}

TEST(Gabor, AnalysisSamplesTheStft) {
  const Grid g({4.0}, {16});
  const SampledSignal f = random_on(g, 8), psi = random_on(g, 9);
  const GaborSystem sys(psi, Lattice::diagonal({0.5, 0.5}));
  const SampledSignal v = stft_full(f, psi);
  const DiscreteCoeffs c = analysis(f, sys);
  for (Index i = 0; i < c.size(); ++i) {
    EXPECT_LT(std::abs(c.values[i] - v[sys.points()[static_cast<size_t>(i)].flat]), 1e-13);
  }
}

TEST(Gabor, FullLatticeIsTight) {
  const Grid g({4.0}, {8});
  const SampledSignal psi = random_on(g, 1);
  const GaborSystem sys(psi, Lattice::diagonal({0.5, 0.25}));
  const SampledSignal f = random_on(g, 2);
  const double scale = l2_norm(psi) * l2_norm(psi) / (0.5 * 0.25);
  EXPECT_LT(rel_err(frame_apply(f, sys), scale * f), 1e-12);
}

TEST(Gabor, PainlessFrameOperatorIsMultiplication) {
  // supp psi shorter than 1/b: S f = (1/b) sum_k |psi(t - ka)|^2 f.
  const Grid g({8.0}, {64});
  const double a = 0.5, b = 0.5;
  const SampledSignal psi = sample_function(g, rules::bump(1, 0.9));
  const GaborSystem sys(psi, Lattice::diagonal({a, b}));
  SampledSignal mult(g);
  for (int k = 0; k < 16; ++k) {
    const SampledSignal shifted = translate(psi, Eigen::VectorXd::Constant(1, k * a));
    mult.mutable_values() += (shifted.values().cwiseAbs2() / b).cast<Complex>();
  }
  const SampledSignal f = random_on(g, 4);
  EXPECT_LT(rel_err(frame_apply(f, sys), multiply(mult, f)), 1e-12);

  const FrameBounds fb = frame_bounds(sys);
  const double lo = mult.values().real().minCoeff(), hi = mult.values().real().maxCoeff();
  EXPECT_NEAR(fb.upper, hi, 1e-6 * hi);
  EXPECT_NEAR(fb.lower, lo, 1e-6 * hi);
}

TEST(Gabor, BoundsMatchDenseSpectrum) {
  const Grid g({8.0}, {64});
  const GaborSystem sys(sample_function(g, rules::gaussian(1)), Lattice::diagonal({1.0, 0.5}));
  const Eigen::VectorXd ev = frame_spectrum_dense(sys);
  const FrameBounds fb = frame_bounds(sys);
  // The stopping rule is on the Rayleigh-quotient change; with a spectral
  // ratio near 0.996 the eigenvalue error is a few hundred times larger.
  EXPECT_NEAR(fb.upper, ev.maxCoeff(), 1e-5 * ev.maxCoeff());
  EXPECT_NEAR(fb.lower, ev.minCoeff(), 1e-5 * ev.maxCoeff());
  EXPECT_GT(fb.lower, 0.0);
}

TEST(Gabor, DualWindowReconstructs) {
  const Grid g({8.0}, {64});
  const GaborSystem sys(sample_function(g, rules::gaussian(1)), Lattice::diagonal({0.5, 1.0}));
  const SampledSignal gamma = canonical_dual(sys);
  const DualPairReport rep = check_dual_pair(sys.window(), gamma, sys.lattice());
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.max_error, 1e-8);
  EXPECT_LT(rep.symmetric_error, 1e-8);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    EXPECT_LT(reconstruction_error(random_on(g, seed), sys, sys.with_window(gamma)), 1e-8);
  }
  EXPECT_FALSE(check_dual_pair(sys.window(), sys.window(), sys.lattice()).pass);
}

TEST(Gabor, UndersampledSystemIsNotAFrame) {
  const Grid g({4.0}, {16});
  const GaborSystem sys(sample_function(g, rules::gaussian(1)), Lattice::diagonal({1.0, 2.0}));
  const Eigen::VectorXd ev = frame_spectrum_dense(sys);
  EXPECT_LT(ev.minCoeff(), 1e-12 * ev.maxCoeff());
  EXPECT_THROW(frame_bounds(sys), NumericalError);
  // S psi = psi stays consistent, so CG may converge; the result is no dual.
  try {
    EXPECT_FALSE(check_dual_pair(sys.window(), canonical_dual(sys), sys.lattice()).pass);
  } catch (const NumericalError&) {
  }
}

TEST(Gabor, CriticalDensityGaussianIsNotAFrame) {
  const Grid g({16.0}, {256});
  const GaborSystem sys(sample_function(g, rules::gaussian(1)), Lattice::diagonal({1.0, 1.0}));
  const Eigen::VectorXd ev = frame_spectrum_dense(sys);
  EXPECT_LT(ev.minCoeff(), 1e-6 * ev.maxCoeff());
  try {
    const FrameBounds fb = frame_bounds(sys);
    EXPECT_LT(fb.lower, 1e-6 * fb.upper);
  } catch (const NumericalError&) {
  }
}

TEST(Gabor, DualScalesInversely) {
  const Grid g({8.0}, {64});
  const SampledSignal psi = sample_function(g, rules::gaussian(1));
  const Lattice lat = Lattice::diagonal({0.5, 1.0});
  const SampledSignal gamma = canonical_dual(GaborSystem(psi, lat));
  const double s = 3.0;
  const SampledSignal gamma_s = canonical_dual(GaborSystem(s * psi, lat));
  EXPECT_LT(rel_err(gamma_s, (1.0 / s) * gamma), 1e-9);
}

TEST(Coeffs, CsvRoundTrip) {
  const Grid ps = Grid({4.0}, {16}).phase_space();
  const Lattice lat = Lattice::diagonal({0.5, 1.0});
  std::mt19937_64 rng(5);
  const DiscreteCoeffs c = random_coeffs(DiscreteCoeffs::zeros(lat, ps), rng);
  std::stringstream ss;
  write_csv(ss, c);
  const DiscreteCoeffs back = read_csv(ss, lat, ps);
  EXPECT_EQ(back.values, c.values);
  const MultiIndex m = c.points->at(3).coords;
  EXPECT_EQ(c.find_coords(m), 3);

  std::stringstream bad("m_0,m_1,re,im\n99,0,1,0\n");
  EXPECT_THROW(read_csv(bad, lat, ps), InvalidArgument);
}

}  // namespace
}  // namespace twg
