#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "twistgabor/discrete_spaces.hpp"
#include "twistgabor/stft_gabor.hpp"

namespace twg {

/// ||V_psi f||_base on the phase-space grid.
double modulation_norm(const SampledSignal& f, const SampledSignal& psi, const SpaceSpec& base);

/// ||(V_psi f(lambda))||_{F_d} with the B0 twist; dspec must use sys's lattice.
double gabor_modulation_norm(const SampledSignal& f, const GaborSystem& sys,
                             const DiscreteSpaceSpec& dspec);

struct ExpansionRow {
  Index n_terms = 0;
  double error = 0.0;  // ||f - f_N||_{M^F} with the analysis window
};

/// Fejer-weighted expansions f_N = sum w_N(m) V_psi f(lambda) pi(lambda) gamma.
std::vector<ExpansionRow> frame_expansion_check(const SampledSignal& f, const GaborSystem& sys,
                                                const SampledSignal& gamma,
                                                const DiscreteSpaceSpec& dspec,
                                                const std::vector<Index>& n_list);

/// (sum_x cell ||f T_x chi||_inner^p w(x)^p)^{1/p}.
double amalgam_norm(const SampledSignal& f, const SpaceSpec& inner, double p, const Weight& w,
                    const SampledSignal& chi);

/// sigma(x, xi) = omega(x, xi) max(nu(0, x), 1), tabulated on a phase-space
/// grid. Equals omega whenever nu <= 1 on the frequency slot.
Weight sigma_weight(const Weight& omega, const Weight& nu, const Grid& phase_grid);

/// Random signal, Gaussian-localized in time and band-limited to |m| < M/8.
SampledSignal random_localized_signal(const Grid& grid, std::mt19937_64& rng);

/// Ratio of ||f||_{M[L^1_{w1 w2}(FL^{p2})]} (window psi) to
/// ||f||_{W(L^{p2}, L^1_{w1 w2})} (window conj psi) over random f.
RatioStats mod_tensor_identity_experiment(double p2, const Weight& w1, const Weight& w2,
                                          const SampledSignal& psi, int trials,
                                          std::uint64_t seed);

}  // namespace twg
