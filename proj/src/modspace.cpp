#include "twistgabor/modspace.hpp"

#include <cmath>

#include "twistgabor/summation.hpp"
#include "twistgabor/tf_ops.hpp"

namespace twg {

double modulation_norm(const SampledSignal& f, const SampledSignal& psi, const SpaceSpec& base) {
  if (psi.values().cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidArgument("modulation_norm: zero window");
  }
  return space_norm(stft_full(f, psi), base);
}

double gabor_modulation_norm(const SampledSignal& f, const GaborSystem& sys,
                             const DiscreteSpaceSpec& dspec) {
  if (!is_standard_twist(dspec.twist())) {
    throw InvalidArgument("gabor_modulation_norm: the discrete space must use the standard twist");
  }
  if ((dspec.lattice().generator() - sys.lattice().generator()).cwiseAbs().maxCoeff() > 0.0 ||
      dspec.grid() != sys.phase_grid()) {
    throw InvalidArgument("gabor_modulation_norm: discrete space and Gabor system differ");
  }
  const DiscreteCoeffs c = analysis(f, sys);
  return discrete_norm(dspec.zero_coeffs().with_values(c.values), dspec);
}

std::vector<ExpansionRow> frame_expansion_check(const SampledSignal& f, const GaborSystem& sys,
                                                const SampledSignal& gamma,
                                                const DiscreteSpaceSpec& dspec,
                                                const std::vector<Index>& n_list) {
  const DualPairReport dual = check_dual_pair(sys.window(), gamma, sys.lattice());
  if (!dual.pass) {
    throw InvalidArgument("frame_expansion_check: windows are not a dual pair (deviation " +
                          std::to_string(dual.max_error) + ")");
  }
  const GaborSystem sys_gamma = sys.with_window(gamma);
  const DiscreteCoeffs c = analysis(f, sys);
  std::vector<ExpansionRow> rows;
  for (Index n : n_list) {
    const DiscreteCoeffs cn =
        reweight(c, [&](std::span<const Index> m) { return fejer_weight(n, m); });
    const SampledSignal fn = synthesis(cn, sys_gamma);
    rows.push_back({n, modulation_norm(f - fn, sys.window(), dspec.base())});
  }
  return rows;
}

double amalgam_norm(const SampledSignal& f, const SpaceSpec& inner, double p, const Weight& w,
                    const SampledSignal& chi) {
  require_same_grid(f.grid(), chi.grid(), "amalgam_norm");
  if (chi.values().cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("amalgam_norm: zero window");
  if (!(p >= 1.0)) throw InvalidArgument("amalgam_norm: exponent must lie in [1, inf]");
  const Grid& g = f.grid();
  const Eigen::ArrayXd wx = w.evaluate(g);
  std::vector<double> local(static_cast<size_t>(g.size()));
  for (Index x = 0; x < g.size(); ++x) {
    const SampledSignal tx = translate(chi, g.point(x));
    local[x] = space_norm(multiply(f, tx), inner) * wx[x];
  }
  return lp_combine(local, p, g.cell_volume());
}

SampledSignal random_localized_signal(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const Grid dual = grid.dual();
  Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(dual.size());
  for (Index k = 0; k < dual.size(); ++k) {
    const MultiIndex m = dual.unflatten(k);
    bool inside = true;
    for (int j = 0; j < grid.dim(); ++j) {
      const Index mj = m[j] >= grid.count(j) / 2 ? m[j] - grid.count(j) : m[j];
      inside = inside && std::abs(mj) < grid.count(j) / 8;
    }
    const double re = normal(rng);
    const double im = normal(rng);
    if (inside) spec[k] = Complex(re, im);
  }
  SampledSignal f = inverse_fourier(SampledSignal(dual, std::move(spec)));
  double width2 = 0.0;
  for (int j = 0; j < grid.dim(); ++j) width2 = std::max(width2, grid.length(j) * grid.length(j) / 16.0);
  for (Index k = 0; k < grid.size(); ++k) {
    f[k] *= std::exp(-kPi * grid.centered_point(k).squaredNorm() / width2);
  }
  return f;
}

Weight sigma_weight(const Weight& omega, const Weight& nu, const Grid& phase_grid) {
  if (!phase_grid.is_phase_space()) throw InvalidArgument("sigma_weight: needs a phase-space grid");
  const int n = phase_grid.dim() / 2;
  Eigen::VectorXd values(phase_grid.size());
  Eigen::VectorXd slot = Eigen::VectorXd::Zero(2 * n);
  for (Index k = 0; k < phase_grid.size(); ++k) {
    const Eigen::VectorXd z = phase_grid.centered_point(k);
    slot.tail(n) = z.head(n);
    values[k] = omega.at(z) * std::max(nu.at(slot), 1.0);
  }
  return Weight::tabulated(phase_grid, std::move(values));
}

RatioStats mod_tensor_identity_experiment(double p2, const Weight& w1, const Weight& w2,
                                          const SampledSignal& psi, int trials,
                                          std::uint64_t seed) {
  const Grid& g = psi.grid();
  if (g.dim() != 1) throw InvalidArgument("mod_tensor_identity_experiment: needs a 1D time grid");
  const Weight w = w1 * w2;
  const SpaceSpec lhs_spec = FourierMixedSpec{p2, 1.0, w, 1};
  const SpaceSpec inner = LpSpec{p2, Weight::one()};
  const SampledSignal chi = conjugate(psi);
  std::mt19937_64 rng(seed);
  std::vector<double> ratios;
  ratios.reserve(trials);
  for (int i = 0; i < trials; ++i) {
    const SampledSignal f = random_localized_signal(g, rng);
    ratios.push_back(modulation_norm(f, psi, lhs_spec) / amalgam_norm(f, inner, 1.0, w, chi));
  }
  return RatioStats::from(std::move(ratios), seed);
}

}  // namespace twg
