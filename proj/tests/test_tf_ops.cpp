#include <gtest/gtest.h>

#include "test_util.hpp"
#include "twistgabor/tf_ops.hpp"

namespace twg {
namespace {

using testing::random_on;
using testing::rel_err;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(Shifts, TranslateAndModulateGaussian) {
  const Grid g({16.0}, {128});
  const SampledSignal f = sample_function(g, rules::gaussian(1));
  const double x = 1.25, xi = 0.75;
  const auto gauss = rules::gaussian(1);
  const SampledSignal t_oracle = sample_function(g, [&](const Eigen::VectorXd& t) {
    return gauss(t - vec({x}));
  });
  EXPECT_LT(rel_err(translate(f, vec({x})), t_oracle), 1e-14);
  const SampledSignal m_oracle = sample_function(g, [&](const Eigen::VectorXd& t) {
    return gauss(t) * std::polar(1.0, 2 * kPi * t[0] * xi);
  });
  EXPECT_LT(rel_err(modulate(f, vec({xi})), m_oracle), 1e-13);
  EXPECT_LT(rel_err(time_frequency_shift(f, vec({x}), vec({xi})),
                    modulate(translate(f, vec({x})), vec({xi}))),
            1e-15);
  EXPECT_LT(rel_err(reflect(translate(f, vec({x}))), translate(reflect(f), vec({-x}))), 1e-15);
}

TEST(Shifts, RejectOffGridArguments) {
  const Grid g({4.0}, {8});
  const SampledSignal f = random_on(g, 1);
  EXPECT_THROW(translate(f, vec({0.3})), AlignmentError);
  EXPECT_THROW(modulate(f, vec({0.1})), AlignmentError);
  EXPECT_THROW(translate(f, vec({0.5, 0.5})), InvalidArgument);
}

TEST(Shifts, ModulationIsFourierTranslation) {
  const Grid g({4.0, 2.0}, {8, 6});
  const SampledSignal f = random_on(g, 4);
  const Eigen::VectorXd xi = vec({0.5, 1.5});
  EXPECT_LT(rel_err(fourier(modulate(f, xi)), translate(fourier(f), xi)), 1e-13);
}

TEST(Twisted, TranslateMatchesDefinition) {
  const Grid ps = Grid({3.0}, {6}).phase_space();
  const MatrixB b = standard_twist(1);
  const SampledSignal f = random_on(ps, 2);
  for (Index s = 0; s < ps.size(); ++s) {
    const Eigen::VectorXd x = ps.point(s);
    const SampledSignal got = twisted_translate(f, x, b);
    for (Index k = 0; k < ps.size(); ++k) {
      const Eigen::VectorXd t = ps.point(k);
      const MultiIndex ki = ps.unflatten(k), si = ps.unflatten(s);
      const Index src = ps.flatten_wrapped(MultiIndex{ki[0] - si[0], ki[1] - si[1]});
      // phase e^{-2 pi i x_time (xi_t - xi_x)}; any representative of the
      // frequency difference gives the same value on aligned grids.
      const Complex oracle = f[src] * std::polar(1.0, -2 * kPi * x[0] * (t[1] - x[1]));
      ASSERT_LT(std::abs(got[k] - oracle), 1e-12) << s << ' ' << k;
    }
  }
}

TEST(Twisted, ZeroTwistIsOrdinaryConvolution) {
  const Grid g({5.0, 2.0}, {10, 4});
  const SampledSignal f = random_on(g, 7), h = random_on(g, 8);
  const SampledSignal conv = twisted_convolve_direct(f, h, zero_twist(2));
  const SampledSignal oracle = inverse_fourier(multiply(fourier(f), fourier(h)));
  EXPECT_LT(rel_err(conv, oracle), 1e-13);
}

TEST(Twisted, FastMatchesDirect) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Grid ps = Grid({std::sqrt(12.0)}, {12}).phase_space();
    const SampledSignal f = random_on(ps, seed), h = random_on(ps, seed + 10);
    EXPECT_LT(rel_err(twisted_convolve_fast(f, h), twisted_convolve_direct(f, h, standard_twist(1))),
              1e-12);
  }
}

TEST(Twisted, ConvolutionIsAssociative) {
  const Grid ps = Grid({2.0}, {4}).phase_space();
  const MatrixB b = standard_twist(1);
  const SampledSignal f = random_on(ps, 1), g = random_on(ps, 2), h = random_on(ps, 3);
  const SampledSignal left = twisted_convolve_direct(twisted_convolve_direct(f, g, b), h, b);
  const SampledSignal right = twisted_convolve_direct(f, twisted_convolve_direct(g, h, b), b);
  EXPECT_LT(rel_err(left, right), 1e-12);
}

TEST(Twisted, PairingIdentity) {
  const Grid ps = Grid({2.0}, {8}).phase_space();
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SampledSignal f = random_on(ps, seed), g = random_on(ps, seed + 1), h = random_on(ps, seed + 2);
    EXPECT_LT(twisted_pairing_identity_check(f, g, h, standard_twist(1)), 1e-12);
  }
}

TEST(Twisted, ChirpPreservesModulusAndMatchesDefinition) {
  const Grid ps = Grid({2.0}, {8}).phase_space();
  const SampledSignal f = random_on(ps, 5);
  const SampledSignal c = chirp(f, standard_twist(1));
  for (Index k = 0; k < ps.size(); ++k) {
    const Eigen::VectorXd x = ps.point(k);
    EXPECT_LT(std::abs(c[k] - f[k] * std::polar(1.0, 2 * kPi * x[0] * x[1])), 1e-12);
  }
}

TEST(Compatibility, PhaseSpaceIsAlwaysCompatible) {
  for (Index m : {6, 10, 16}) {
    const Grid ps = Grid({1.7}, {m}).phase_space();
    const ChirpCompatibility c = chirp_compatibility(standard_twist(1), ps);
    EXPECT_TRUE(c.shift_aligned);
    EXPECT_TRUE(c.chirp_periodic);
  }
}

TEST(Compatibility, MisalignedTwistIsRejected) {
  const Grid g({1.0, 1.0}, {4, 4});
  MatrixB b = zero_twist(2);
  b(1, 0) = 1.0;
  const ChirpCompatibility c = chirp_compatibility(b, g);
  EXPECT_FALSE(c.shift_aligned);
  EXPECT_FALSE(c.message.empty());
  const SampledSignal f = random_on(g, 1);
  EXPECT_THROW(twisted_convolve_direct(f, f, b), AlignmentError);
  EXPECT_THROW(twisted_convolve_fast(f, f), InvalidArgument);
}

}  // namespace
}  // namespace twg
