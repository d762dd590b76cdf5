#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "twistgabor/discrete_spaces.hpp"

namespace twg {

/// Weights on lattice coordinates m.
struct CoordWeights {
  std::vector<MultiIndex> m;
  std::vector<double> w;
};

/// prod_j (1 - |m_j| / N) on |m_j| < N.
CoordWeights fejer_weights(Index n_terms, int dim);
double fejer_weight(Index n_terms, std::span<const Index> m);
/// (1 - |m|^2 / N^2)^alpha on |m| <= N, 0^0 = 1.
double bochner_riesz_weight(Index n_terms, double alpha, std::span<const Index> m);

/// F_N sampled on the unit torus [0, 1)^dim with q points per axis.
SampledSignal fejer_kernel(Index n_terms, int dim, Index q);

/// c_m scaled by rule(m); the rule sees the lattice coordinates.
DiscreteCoeffs reweight(const DiscreteCoeffs& c,
                        const std::function<double(std::span<const Index>)>& rule);

SampledSignal cesaro_mean(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec, Index n_terms);
SampledSignal bochner_riesz_mean(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec,
                                 Index n_terms, double alpha);
/// Unweighted sum over |m_j| <= N.
SampledSignal symmetric_partial_sum(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec,
                                    Index n_terms);

/// int_0^1 |sum_{|m| <= N} e^{2 pi i m x}| dx by the midpoint rule; q >= 64 N.
double dirichlet_lebesgue_constant(Index n_terms, Index q);
inline double dirichlet_lebesgue_constant(Index n_terms) {
  return dirichlet_lebesgue_constant(n_terms, std::max<Index>(1, 64 * n_terms));
}

struct ConvergenceRow {
  std::string mode;  // cesaro, bochner_riesz, symmetric, unconditional
  Index n_terms = 0;
  double error = 0.0;
};

struct ConvergenceOptions {
  double alpha = 1.0;
  int sign_patterns = 8;
  std::uint64_t seed = 1;
};

/// ||S_chi c - mean_N||_base per mode and N; the unconditional row is the
/// largest tail norm ||S_chi(eps c 1_{max|m_j| > N})|| over random signs eps.
std::vector<ConvergenceRow> convergence_mode_report(const DiscreteCoeffs& c,
                                                    const DiscreteSpaceSpec& spec,
                                                    const std::vector<Index>& n_list,
                                                    const ConvergenceOptions& opts = {});

void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);

}  // namespace twg
