#include "twistgabor/discrete_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "twistgabor/signal_io.hpp"
#include "twistgabor/tf_ops.hpp"

namespace twg {

namespace {

constexpr double kAlignTol = 1e-9;

Index wrap(Index i, Index m) {
  i %= m;
  return i < 0 ? i + m : i;
}

bool near_integer(double v) {
  return std::abs(v - std::round(v)) <= kAlignTol * std::max(1.0, std::abs(v));
}

// e^{-2 pi i sum_j r_j s_j / M_j}
Complex phase(const Grid& g, std::span<const Index> r, std::span<const Index> s) {
  double frac = 0.0;
  for (int j = 0; j < g.dim(); ++j) {
    const Index m = g.count(j);
    frac += static_cast<double>(wrap(wrap(r[j], m) * s[j], m)) / static_cast<double>(m);
  }
  frac -= std::floor(frac);
  return frac == 0.0 ? Complex(1.0, 0.0) : std::polar(1.0, -2.0 * kPi * frac);
}

}  // namespace

// --- DiscreteSpaceSpec --------------------------------------------------------

DiscreteSpaceSpec::DiscreteSpaceSpec(SpaceSpec base, MatrixB b, Lattice lattice, SampledSignal chi)
    : base_(std::move(base)), b_(std::move(b)), lattice_(std::move(lattice)), chi_(std::move(chi)) {
  init();
}

void DiscreteSpaceSpec::init() {
  const Grid& g = chi_.grid();
  const int d = g.dim();
  validate(base_, g);
  if (b_.rows() != d || b_.cols() != d) {
    throw InvalidArgument("DiscreteSpaceSpec: B must be " + std::to_string(d) + "x" +
                          std::to_string(d));
  }
  if (lattice_.dim() != d) throw InvalidArgument("DiscreteSpaceSpec: lattice dimension mismatch");

  const Box box = separation_box(lattice_);
  support_.clear();
  for (Index k = 0; k < g.size(); ++k) {
    if (chi_[k] == Complex(0.0, 0.0)) continue;
    const Eigen::VectorXd x = g.centered_point(k);
    if (!box.contains(x)) {
      std::ostringstream os;
      os.precision(17);
      os << "DiscreteSpaceSpec: window is non-zero at x = (";
      for (int j = 0; j < d; ++j) os << (j ? ", " : "") << x[j];
      os << "), outside the separation box";
      throw InvalidArgument(os.str());
    }
    support_.emplace_back(k, chi_[k]);
  }
  if (support_.empty()) throw InvalidArgument("DiscreteSpaceSpec: zero window");

  if (!points_ || points_->empty()) {
    points_ = std::make_shared<const std::vector<LatticePoint>>(enumerate(lattice_, g));
  }

  // Translated supports must not share a grid point.
  std::vector<char> hit(static_cast<size_t>(g.size()), 0);
  MultiIndex t(d);
  for (const auto& p : *points_) {
    for (const auto& [k, v] : support_) {
      const MultiIndex s = g.unflatten(k);
      for (int j = 0; j < d; ++j) t[j] = s[j] + p.index[j];
      const Index f = g.flatten_wrapped(t);
      if (hit[f]) {
        throw InvalidArgument("DiscreteSpaceSpec: translated window supports overlap at sample " +
                              std::to_string(f));
      }
      hit[f] = 1;
    }
  }

  twist_idx_.clear();
  for (const auto& p : *points_) {
    const Eigen::VectorXd bl = b_ * p.centered;
    MultiIndex r(d);
    for (int j = 0; j < d; ++j) {
      const double u = bl[j] * g.length(j);
      if (!near_integer(u)) {
        throw AlignmentError("DiscreteSpaceSpec: B lambda is off the frequency grid on axis " +
                             std::to_string(j));
      }
      r[j] = std::llround(u);
    }
    twist_idx_.push_back(std::move(r));
  }
}

DiscreteSpaceSpec DiscreteSpaceSpec::with_window(SampledSignal chi) const {
  require_same_grid(chi.grid(), chi_.grid(), "DiscreteSpaceSpec::with_window");
  DiscreteSpaceSpec s = *this;
  s.chi_ = std::move(chi);
  s.init();
  return s;
}

DiscreteSpaceSpec DiscreteSpaceSpec::with_base(SpaceSpec base) const {
  DiscreteSpaceSpec s = *this;
  validate(base, grid());
  s.base_ = std::move(base);
  return s;
}

DiscreteCoeffs DiscreteSpaceSpec::zero_coeffs() const {
  return DiscreteCoeffs::zeros(lattice_, grid(), points_);
}

// --- synthesis and norms ------------------------------------------------------

SampledSignal s_chi(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec) {
  const Grid& g = spec.grid();
  if (c.size() != static_cast<Index>(spec.points().size()) || c.grid != g) {
    throw InvalidArgument("s_chi: coefficients do not match the lattice of the spec");
  }
  const int d = g.dim();
  std::vector<MultiIndex> sup_idx;
  for (const auto& [k, v] : spec.support()) sup_idx.push_back(g.unflatten(k));

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(g.size());
  MultiIndex t(d);
  for (Index i = 0; i < c.size(); ++i) {
    const Complex ci = c.values[i];
    if (ci == Complex(0.0, 0.0)) continue;
    const LatticePoint& p = spec.points()[i];
    const MultiIndex& r = spec.twist_indices()[i];
    for (size_t s = 0; s < sup_idx.size(); ++s) {
      for (int j = 0; j < d; ++j) t[j] = sup_idx[s][j] + p.index[j];
      out[g.flatten_wrapped(t)] += ci * spec.support()[s].second * phase(g, r, sup_idx[s]);
    }
  }
  return SampledSignal(g, std::move(out));
}

double discrete_norm(const DiscreteCoeffs& c, const DiscreteSpaceSpec& spec) {
  return space_norm(s_chi(c, spec), spec.base());
}

// --- ratio statistics ---------------------------------------------------------

RatioStats RatioStats::from(std::vector<double> ratios, std::uint64_t seed) {
  RatioStats s;
  s.seed = seed;
  s.trials = static_cast<int>(ratios.size());
  if (!ratios.empty()) {
    s.ratio_min = *std::min_element(ratios.begin(), ratios.end());
    s.ratio_max = *std::max_element(ratios.begin(), ratios.end());
    s.band = s.ratio_min > 0.0 ? s.ratio_max / s.ratio_min : kInf;
  }
  s.ratios = std::move(ratios);
  return s;
}

RatioStats RatioStats::prefix(int k) const {
  k = std::clamp(k, 0, trials);
  return from(std::vector<double>(ratios.begin(), ratios.begin() + k), seed);
}

double band_drift(const RatioStats& stats, int k) {
  const RatioStats head = stats.prefix(k);
  return std::abs(stats.band / head.band - 1.0);
}

RatioStats window_equivalence_experiment(const DiscreteSpaceSpec& spec, const SampledSignal& chi1,
                                         const SampledSignal& chi2, int trials,
                                         std::uint64_t seed) {
  const DiscreteSpaceSpec s1 = spec.with_window(chi1);
  const DiscreteSpaceSpec s2 = spec.with_window(chi2);
  std::mt19937_64 rng(seed);
  const DiscreteCoeffs shape = s1.zero_coeffs();
  std::vector<double> ratios;
  ratios.reserve(trials);
  for (int i = 0; i < trials; ++i) {
    const DiscreteCoeffs c = random_coeffs(shape, rng);
    ratios.push_back(discrete_norm(c, s1) / discrete_norm(c, s2));
  }
  return RatioStats::from(std::move(ratios), seed);
}

// --- sampling operator --------------------------------------------------------

DiscreteCoeffs r_phi(const SampledSignal& e, const SampledSignal& phi,
                     const DiscreteSpaceSpec& spec) {
  const Grid& g = spec.grid();
  require_same_grid(e.grid(), g, "r_phi");
  require_same_grid(phi.grid(), g, "r_phi");
  const MatrixB& b = spec.twist();
  require_shift_aligned(b, g, "r_phi");
  const int d = g.dim();

  std::vector<Index> q(static_cast<size_t>(d * d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) q[i * d + j] = std::llround(b(i, j) * g.spacing(j) * g.length(i));
  }
  struct Term {
    MultiIndex idx;
    MultiIndex r;
    Complex v;
  };
  std::vector<Term> terms;
  for (Index x = 0; x < g.size(); ++x) {
    if (e[x] == Complex(0.0, 0.0)) continue;
    Term t{g.unflatten(x), MultiIndex(d, 0), e[x]};
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) t.r[i] += q[i * d + j] * t.idx[j];
    }
    terms.push_back(std::move(t));
  }

  DiscreteCoeffs c = spec.zero_coeffs();
  MultiIndex s(d);
  for (Index i = 0; i < c.size(); ++i) {
    const LatticePoint& p = spec.points()[i];
    Complex acc(0.0, 0.0);
    for (const auto& t : terms) {
      for (int j = 0; j < d; ++j) s[j] = wrap(p.index[j] - t.idx[j], g.count(j));
      acc += t.v * phi[g.flatten(s)] * phase(g, t.r, s);
    }
    c.values[i] = g.cell_volume() * acc;
  }
  return c;
}

Complex pairing_constant(const SampledSignal& psi, const DiscreteSpaceSpec& spec) {
  require_same_grid(psi.grid(), spec.grid(), "pairing_constant");
  const SampledSignal th = chirp(psi, spec.twist());
  return spec.grid().cell_volume() * th.values().cwiseProduct(spec.window().values()).sum();
}

double complemented_identity_check(const DiscreteSpaceSpec& spec, const SampledSignal& psi,
                                   int trials, std::uint64_t seed) {
  spec.with_window(psi);  // psi must satisfy the same support condition
  const Complex kappa = pairing_constant(psi, spec);
  if (std::abs(kappa) <= 1e-8) {
    throw InvalidArgument("complemented_identity_check: pairing constant " +
                          format_double(std::abs(kappa)) + " is numerically zero");
  }
  const SampledSignal psi_r = reflect(psi);
  std::mt19937_64 rng(seed);
  const DiscreteCoeffs shape = spec.zero_coeffs();
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const DiscreteCoeffs c = random_coeffs(shape, rng);
    const DiscreteCoeffs r = r_phi(s_chi(c, spec), psi_r, spec);
    const double err = (r.values - kappa * c.values).cwiseAbs().maxCoeff();
    worst = std::max(worst, err / (std::abs(kappa) * c.values.cwiseAbs().maxCoeff()));
  }
  return worst;
}

// --- Fourier-series norm ------------------------------------------------------

double fourier_lp_norm(const DiscreteCoeffs& c, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("fourier_lp_norm: exponent must lie in [1, inf]");
  const int d = c.lattice.dim();
  std::vector<Index> q(d);
  for (int j = 0; j < d; ++j) {
    Index mmax = 0;
    for (Index i = 0; i < c.size(); ++i) {
      if (c.values[i] != Complex(0.0, 0.0)) {
        mmax = std::max<Index>(mmax, std::abs((*c.points)[i].coords[j]));
      }
    }
    Index qj = 4;
    while (qj < 4 * (2 * mmax + 1)) qj *= 2;
    q[j] = qj;
  }
  // Unit cube in the coordinates u = A^t xi.
  const Grid cube(std::vector<double>(d, 1.0), q);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cube.size());
  for (Index i = 0; i < c.size(); ++i) {
    if (c.values[i] != Complex(0.0, 0.0)) v[cube.flatten_wrapped((*c.points)[i].coords)] += c.values[i];
  }
  dft(v, cube.dims(), false);
  const Eigen::ArrayXd mag = v.array().abs();
  const double measure = c.lattice.dual().volume() / static_cast<double>(cube.size());
  return lp_combine({mag.data(), static_cast<size_t>(mag.size())}, p, measure);
}

// --- mixed norms --------------------------------------------------------------

namespace {

struct MixedSetup {
  DiscreteSpaceSpec full;
  DiscreteSpaceSpec time;
  std::vector<Eigen::VectorXd> freq_points;  // centered lambda_2 per group
  std::vector<std::vector<std::pair<Index, Index>>> groups;  // (full id, time id)
};

MixedSetup make_setup(const MixedNormConfig& cfg) {
  const Grid& tg = cfg.chi_time.grid();
  const Grid fg = tg.dual();
  require_same_grid(cfg.chi_freq.grid(), fg, "mixed_norm: frequency window");
  const int n = tg.dim();
  const Grid pg = tg.phase_space();
  Eigen::VectorXcd chi(pg.size());
  for (Index t = 0; t < tg.size(); ++t) {
    for (Index f = 0; f < fg.size(); ++f) chi[t * fg.size() + f] = cfg.chi_time[t] * cfg.chi_freq[f];
  }
  MixedSetup s{
      DiscreteSpaceSpec(MixedLpqSpec{cfg.q, cfg.p, cfg.w, n}, standard_twist(n),
                        product(cfg.lattice_time, cfg.lattice_freq), SampledSignal(pg, chi)),
      DiscreteSpaceSpec(LpSpec{cfg.q, Weight::one()}, zero_twist(n), cfg.lattice_time, cfg.chi_time),
      {},
      {}};
  std::map<MultiIndex, Index> time_ids;
  for (Index i = 0; i < static_cast<Index>(s.time.points().size()); ++i) {
    time_ids[s.time.points()[i].coords] = i;
  }
  std::map<MultiIndex, Index> group_of;
  for (Index i = 0; i < static_cast<Index>(s.full.points().size()); ++i) {
    const LatticePoint& p = s.full.points()[i];
    const MultiIndex m1(p.coords.begin(), p.coords.begin() + n);
    const MultiIndex m2(p.coords.begin() + n, p.coords.end());
    auto [it, fresh] = group_of.emplace(m2, static_cast<Index>(s.groups.size()));
    if (fresh) {
      s.groups.emplace_back();
      s.freq_points.push_back(p.centered.tail(n));
    }
    s.groups[it->second].emplace_back(i, time_ids.at(m1));
  }
  return s;
}

double mixed_ratio(const MixedSetup& s, const MixedNormConfig& cfg, const DiscreteCoeffs& c) {
  const double lhs = discrete_norm(c, s.full);
  const int n = cfg.chi_time.grid().dim();
  std::vector<double> inner(s.groups.size());
  DiscreteCoeffs slice = s.time.zero_coeffs();
  for (size_t g = 0; g < s.groups.size(); ++g) {
    slice.values.setZero();
    for (const auto& [full_id, time_id] : s.groups[g]) slice.values[time_id] = c.values[full_id];
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * n);
    z.tail(n) = s.freq_points[g];
    inner[g] = discrete_norm(slice, s.time) * cfg.w.at(z);
  }
  const double rhs = lp_combine(inner, cfg.p, 1.0);
  return lhs / rhs;
}

}  // namespace

DiscreteCoeffs mixed_norm_coeffs(const MixedNormConfig& cfg) {
  return make_setup(cfg).full.zero_coeffs();
}

double mixed_norm_ratio(const MixedNormConfig& cfg, const DiscreteCoeffs& c) {
  const MixedSetup s = make_setup(cfg);
  if (c.size() != static_cast<Index>(s.full.points().size())) {
    throw InvalidArgument("mixed_norm_ratio: coefficients are not on the product lattice");
  }
  return mixed_ratio(s, cfg, c);
}

RatioStats mixed_norm_identity_experiment(const MixedNormConfig& cfg, int trials,
                                          std::uint64_t seed) {
  const MixedSetup s = make_setup(cfg);
  std::mt19937_64 rng(seed);
  const DiscreteCoeffs shape = s.full.zero_coeffs();
  std::vector<double> ratios;
  ratios.reserve(trials);
  for (int i = 0; i < trials; ++i) ratios.push_back(mixed_ratio(s, cfg, random_coeffs(shape, rng)));
  return RatioStats::from(std::move(ratios), seed);
}

// --- Poisson summation --------------------------------------------------------

double poisson_check(const SampledSignal& f, const SampledSignal& phi, const Lattice& lattice,
                     const Eigen::VectorXd& y) {
  const SampledSignal h = multiply(f, phi);
  const Grid& g = h.grid();
  const int n = g.dim();
  if (y.size() != n) throw InvalidArgument("poisson_check: y dimension mismatch");
  for (int j = 0; j < n; ++j) {
    if (!near_integer(y[j] * g.length(j))) {
      throw AlignmentError("poisson_check: y[" + std::to_string(j) +
                           "] is not on the frequency grid");
    }
  }

  SampledSignal periodized(g);
  for (const auto& p : enumerate(lattice, g)) {
    const Complex c = std::polar(1.0, 2.0 * kPi * y.dot(p.centered));
    periodized += c * translate(h, p.position);
  }
  const SampledSignal lhs = inverse_fourier(periodized);
  const Grid& dg = lhs.grid();

  // Expected: point masses of weight (1/vol) h^(mu + y) at -mu - y; a unit
  // mass on the frequency grid is 1 / cell there.
  std::vector<Eigen::VectorXd> ts;
  for (Index k = 0; k < g.size(); ++k) ts.push_back(g.centered_point(k));
  auto hhat = [&](const Eigen::VectorXd& eta) {
    Complex acc(0.0, 0.0);
    for (Index k = 0; k < g.size(); ++k) {
      if (h[k] != Complex(0.0, 0.0)) acc += h[k] * std::polar(1.0, -2.0 * kPi * ts[k].dot(eta));
    }
    return g.cell_volume() * acc;
  };
  Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(dg.size());
  for (const auto& mu : enumerate(lattice.dual(), dg)) {
    const Eigen::VectorXd at = -mu.centered - y;
    MultiIndex idx(n);
    for (int j = 0; j < n; ++j) idx[j] = std::llround(at[j] / dg.spacing(j));
    expected[dg.flatten_wrapped(idx)] +=
        hhat(mu.centered + y) / (lattice.volume() * dg.cell_volume());
  }
  const double scale = expected.cwiseAbs().maxCoeff();
  const double diff = (lhs.values() - expected).cwiseAbs().maxCoeff();
  return scale == 0.0 ? diff : diff / scale;
}

}  // namespace twg
