#include "twistgabor/summation.hpp"

#include <cmath>
#include <ostream>

#include "twistgabor/signal_io.hpp"

namespace twg {

double fejer_weight(Index n_terms, std::span<const Index> m) {
  double w = 1.0;
  for (Index mj : m) {
    const Index a = std::abs(mj);
    if (a >= n_terms) return 0.0;
    w *= 1.0 - static_cast<double>(a) / static_cast<double>(n_terms);
  }
  return w;
}

CoordWeights fejer_weights(Index n_terms, int dim) {
  if (n_terms < 1) throw InvalidArgument("fejer_weights: N must be at least 1");
  if (dim < 1) throw InvalidArgument("fejer_weights: dimension must be positive");
  CoordWeights out;
  MultiIndex m(dim, -(n_terms - 1));
  while (true) {
    out.m.push_back(m);
    out.w.push_back(fejer_weight(n_terms, m));
    int j = dim - 1;
    while (j >= 0 && m[j] == n_terms - 1) m[j--] = -(n_terms - 1);
    if (j < 0) break;
    ++m[j];
  }
  return out;
}

double bochner_riesz_weight(Index n_terms, double alpha, std::span<const Index> m) {
  double r2 = 0.0;
  for (Index mj : m) r2 += static_cast<double>(mj) * static_cast<double>(mj);
  const double n2 = static_cast<double>(n_terms) * static_cast<double>(n_terms);
  if (r2 > n2) return 0.0;
  const double base = 1.0 - r2 / n2;
  if (alpha == 0.0) return 1.0;
  return std::pow(base, alpha);
}

SampledSignal fejer_kernel(Index n_terms, int dim, Index q) {
  const Grid cube(std::vector<double>(dim, 1.0), std::vector<Index>(dim, q));
  if (q < 2 * n_terms) throw InvalidArgument("fejer_kernel: q must be at least 2N");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cube.size());
  const CoordWeights fw = fejer_weights(n_terms, dim);
  for (size_t i = 0; i < fw.m.size(); ++i) v[cube.flatten_wrapped(fw.m[i])] += fw.w[i];
  dft(v, cube.dims(), false);
  return SampledSignal(cube, std::move(v));
}

DiscreteCoeffs reweight(const DiscreteCoeffs& c,
                        const std::function<double(std::span<const Index>)>& rule) {
  Eigen::VectorXcd v = c.values;
  for (Index i = 0; i < c.size(); ++i) v[i] *= rule((*c.points)[i].coords);
  return c.with_values(std::move(v));
}

SampledSignal cesaro_mean(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec, Index n_terms) {
  if (n_terms < 1) throw InvalidArgument("cesaro_mean: N must be at least 1");
  return s_chi(reweight(c, [&](std::span<const Index> m) { return fejer_weight(n_terms, m); }),
               spec);
}

SampledSignal bochner_riesz_mean(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec,
                                 Index n_terms, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("bochner_riesz_mean: alpha must be non-negative");
  if (n_terms < 0) throw InvalidArgument("bochner_riesz_mean: N must be non-negative");
  return s_chi(reweight(c,
                        [&](std::span<const Index> m) {
                          return bochner_riesz_weight(n_terms, alpha, m);
                        }),
               spec);
}

SampledSignal symmetric_partial_sum(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec,
                                    Index n_terms) {
  if (n_terms < 0) throw InvalidArgument("symmetric_partial_sum: N must be non-negative");
  return s_chi(reweight(c,
                        [&](std::span<const Index> m) {
                          for (Index mj : m) {
                            if (std::abs(mj) > n_terms) return 0.0;
                          }
                          return 1.0;
                        }),
               spec);
}

double dirichlet_lebesgue_constant(Index n_terms, Index q) {
  if (n_terms < 0) throw InvalidArgument("dirichlet_lebesgue_constant: N must be non-negative");
  if (q < std::max<Index>(1, 64 * n_terms)) {
    throw InvalidArgument("dirichlet_lebesgue_constant: " + std::to_string(q) +
                          " quadrature points under-resolve N = " + std::to_string(n_terms) +
                          " (need at least 64 N)");
  }
  const double k = static_cast<double>(2 * n_terms + 1);
  double acc = 0.0;
  for (Index i = 0; i < q; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(q);
    acc += std::abs(std::sin(k * kPi * x) / std::sin(kPi * x));
  }
  return acc / static_cast<double>(q);
}

std::vector<ConvergenceRow> convergence_mode_report(const DiscreteCoeffs& c,
                                                    const DiscreteSpaceSpec& spec,
                                                    const std::vector<Index>& n_list,
                                                    const ConvergenceOptions& opts) {
  const SampledSignal full = s_chi(c, spec);
  auto err = [&](const SampledSignal& s) { return space_norm(full - s, spec.base()); };
  std::vector<ConvergenceRow> rows;
  for (Index n : n_list) rows.push_back({"cesaro", n, err(cesaro_mean(c, spec, n))});
  for (Index n : n_list) {
    rows.push_back({"bochner_riesz", n, err(bochner_riesz_mean(c, spec, n, opts.alpha))});
  }
  for (Index n : n_list) rows.push_back({"symmetric", n, err(symmetric_partial_sum(c, spec, n))});
  std::mt19937_64 rng(opts.seed);
  std::bernoulli_distribution coin(0.5);
  for (Index n : n_list) {
    double worst = 0.0;
    for (int r = 0; r < opts.sign_patterns; ++r) {
      Eigen::VectorXcd v = c.values;
      for (Index i = 0; i < c.size(); ++i) {
        bool tail = false;
        for (Index mj : (*c.points)[i].coords) tail = tail || std::abs(mj) > n;
        const double sign = coin(rng) ? 1.0 : -1.0;
        v[i] = tail ? sign * v[i] : Complex(0.0, 0.0);
      }
      worst = std::max(worst, space_norm(s_chi(c.with_values(v), spec), spec.base()));
    }
    rows.push_back({"unconditional", n, worst});
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "mode,N,error\n";
  for (const auto& r : rows) os << r.mode << ',' << r.n_terms << ',' << format_double(r.error) << '\n';
}

}  // namespace twg
