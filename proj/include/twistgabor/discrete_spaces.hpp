#pragma once

#include <cstdint>
#include <vector>

#include "twistgabor/grid.hpp"
#include "twistgabor/lattice.hpp"
#include "twistgabor/stft_gabor.hpp"

namespace twg {

/// Norm recipe for coefficient sequences: ||c|| = ||S_chi c||_base.
class DiscreteSpaceSpec {
 public:
  /// Validates that chi is non-zero, supported inside separation_box(lattice),
  /// and that its lattice translates share no grid point.
  DiscreteSpaceSpec(SpaceSpec base, MatrixB b, Lattice lattice, SampledSignal chi);

  const SpaceSpec& base() const { return base_; }
  const MatrixB& twist() const { return b_; }
  const Lattice& lattice() const { return lattice_; }
  const SampledSignal& window() const { return chi_; }
  const Grid& grid() const { return chi_.grid(); }
  const std::vector<LatticePoint>& points() const { return *points_; }
  const std::shared_ptr<const std::vector<LatticePoint>>& shared_points() const { return points_; }

  DiscreteSpaceSpec with_window(SampledSignal chi) const;
  DiscreteSpaceSpec with_base(SpaceSpec base) const;
  DiscreteCoeffs zero_coeffs() const;

  /// Frequency-grid index of B lambda for every lattice point.
  const std::vector<MultiIndex>& twist_indices() const { return twist_idx_; }
  /// Non-zero samples of chi as (flat index, value).
  const std::vector<std::pair<Index, Complex>>& support() const { return support_; }

 private:
  void init();

  SpaceSpec base_;
  MatrixB b_;
  Lattice lattice_;
  SampledSignal chi_;
  std::shared_ptr<const std::vector<LatticePoint>> points_;
  std::vector<MultiIndex> twist_idx_;
  std::vector<std::pair<Index, Complex>> support_;
};

/// sum_lambda c_lambda T^B_lambda chi, lambda the centered representative.
SampledSignal s_chi(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec);
double discrete_norm(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec);

struct RatioStats {
  int trials = 0;
  std::uint64_t seed = 0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double band = 0.0;  // ratio_max / ratio_min
  std::vector<double> ratios;

  /// Statistics of the first k ratios.
  RatioStats prefix(int k) const;
  static RatioStats from(std::vector<double> ratios, std::uint64_t seed);
};

/// Band drift |band(trials) / band(k) - 1| between a prefix and the full run.
double band_drift(const RatioStats& stats, int k);

/// r(c) = ||c||_{chi1} / ||c||_{chi2} over random c.
RatioStats window_equivalence_experiment(const DiscreteSpaceSpec& spec, const SampledSignal& chi1,
                                         const SampledSignal& chi2, int trials,
                                         std::uint64_t seed);

/// R_phi(e)_lambda = (e *_B phi)(lambda).
DiscreteCoeffs r_phi(const SampledSignal& e, const SampledSignal& phi,
                     const DiscreteSpaceSpec& spec);

/// cell * sum theta_B(psi) chi, i.e. (theta_B psi, conj chi).
Complex pairing_constant(const SampledSignal& psi, const DiscreteSpaceSpec& spec);

/// max over random c of max_lambda |R_{psi reflected}(S_chi c) - kappa c| / (|kappa| |c|_inf).
double complemented_identity_check(const DiscreteSpaceSpec& spec, const SampledSignal& psi,
                                   int trials, std::uint64_t seed);

/// L^p norm over I_{Lambda^perp} of sum c_lambda e^{2 pi i lambda.xi}, sampled at
/// least 4x finer than the highest frequency.
double fourier_lp_norm(const DiscreteCoeffs& c, double p);

struct MixedNormConfig {
  double p = 1.0;  // outer exponent over the frequency block
  double q = 1.0;  // inner exponent over the time block
  Weight w;        // evaluated at (0, xi)
  Lattice lattice_time;
  Lattice lattice_freq;
  SampledSignal chi_time;  // on the time grid
  SampledSignal chi_freq;  // on the frequency grid
};

/// ||c|| in the B0 discrete space of L^p_w(L^q) against
/// l^p_w(Lambda_2; ||.||_{(L^q)_d(Lambda_1)}).
RatioStats mixed_norm_identity_experiment(const MixedNormConfig& cfg, int trials,
                                          std::uint64_t seed);
/// The same ratio for explicit coefficients on Lambda_1 x Lambda_2.
double mixed_norm_ratio(const MixedNormConfig& cfg, const DiscreteCoeffs& c);
DiscreteCoeffs mixed_norm_coeffs(const MixedNormConfig& cfg);

/// Compares F^{-1}(sum_lambda e^{2 pi i y.lambda} T_lambda (f phi)) with point
/// masses (1/vol) (f phi)^(mu + y) at -mu - y, mu in the dual lattice.
/// Returns max |difference| / max |expected|.
double poisson_check(const SampledSignal& f, const SampledSignal& phi, const Lattice& lattice,
                     const Eigen::VectorXd& y);

}  // namespace twg
