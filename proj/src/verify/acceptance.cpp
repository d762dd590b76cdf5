#include "verify/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <random>
#include <sstream>

#include "twistgabor/discrete_spaces.hpp"
#include "twistgabor/modspace.hpp"
#include "twistgabor/signal_io.hpp"
#include "twistgabor/stft_gabor.hpp"
#include "twistgabor/summation.hpp"
#include "twistgabor/tf_ops.hpp"

namespace twg::verify {

namespace {

using Clock = std::chrono::steady_clock;

std::string num(double v) { return format_double(v); }
std::string yes(bool b) { return b ? "yes" : "no"; }

std::uint64_t seed_for(const Config& cfg, int id) {
  return cfg.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(id);
}

double rel_sup(const SampledSignal& a, const SampledSignal& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff() / b.values().cwiseAbs().maxCoeff();
}

SampledSignal unit(SampledSignal f) {
  f *= 1.0 / l2_norm(f);
  return f;
}

SampledSignal desk_window(const Config& cfg, const Grid& g) {
  if (cfg.window == "gaussian") return unit(sample_function(g, rules::gaussian(g.dim())));
  if (cfg.window == "hat") return unit(sample_function(g, rules::hat(g.dim(), 1.0)));
  if (cfg.window == "bspline") return unit(sample_function(g, rules::cubic_bspline(g.dim(), 0.5)));
  throw InvalidArgument("unknown window '" + cfg.window + "'");
}

Grid desk_grid(const Config& cfg) { return Grid({cfg.length}, {cfg.samples}); }

SampledSignal bump1d(const Grid& g, double center, double radius) {
  return sample_function(g, rules::bump(Eigen::VectorXd::Constant(1, center),
                                        Eigen::VectorXd::Constant(1, radius)));
}

// 1. fast # against the direct twisted convolution
Result oracle_equivalence(const Config& cfg) {
  Result r{1, "fast twisted convolution matches the direct oracle", false, ""};
  const auto start = Clock::now();
  std::mt19937_64 rng(seed_for(cfg, 1));
  const MatrixB b0 = standard_twist(1);
  double err24 = 0.0, err32 = 0.0, speedup = 0.0;
  for (Index m : {Index{24}, Index{32}}) {
    const Grid pg = Grid({std::sqrt(static_cast<double>(m))}, {m}).phase_space();
    const SampledSignal f = random_signal(pg, rng);
    const SampledSignal g = random_signal(pg, rng);
    const auto t0 = Clock::now();
    const SampledSignal direct = twisted_convolve_direct(f, g, b0);
    const auto t1 = Clock::now();
    SampledSignal fast;
    constexpr int kRepeat = 10;
    for (int i = 0; i < kRepeat; ++i) fast = twisted_convolve_fast(f, g);
    const auto t2 = Clock::now();
    const double err = rel_sup(fast, direct);
    if (m == 24) {
      err24 = err;
    } else {
      err32 = err;
      const double td = std::chrono::duration<double>(t1 - t0).count();
      const double tf = std::chrono::duration<double>(t2 - t1).count() / kRepeat;
      speedup = td / tf;
    }
  }
  const double total = std::chrono::duration<double>(Clock::now() - start).count();
  const bool fast_enough = speedup >= 5.0;
  const bool quick = total < 30.0;
  r.pass = err24 <= 1e-9 && err32 <= 1e-9 && fast_enough && quick;
  r.detail = "rel sup error 24x24 = " + num(err24) + ", 32x32 = " + num(err32) +
             " (tol 1e-09); fast path >= 5x faster at 32x32: " + yes(fast_enough) +
             "; runtime < 30 s: " + yes(quick);
  return r;
}

// 2. orthogonality relation and covariance
Result stft_identities(const Config& cfg) {
  Result r{2, "STFT orthogonality and covariance", false, ""};
  const Grid tg = desk_grid(cfg);
  std::mt19937_64 rng(seed_for(cfg, 2));
  std::uniform_int_distribution<Index> pick(0, tg.count(0) - 1);
  double ortho = 0.0, cov = 0.0;
  for (int i = 0; i < 20; ++i) {
    const SampledSignal f = random_signal(tg, rng);
    const SampledSignal psi = random_signal(tg, rng);
    const SampledSignal gamma = random_signal(tg, rng);
    const SampledSignal phi = random_signal(tg, rng);
    Eigen::VectorXd z(2);
    z << static_cast<double>(pick(rng)) * tg.spacing(0),
        static_cast<double>(pick(rng)) / tg.length(0);
    ortho = std::max(ortho, orthogonality_residual(f, phi, psi, gamma));
    cov = std::max(cov, covariance_residual(f, psi, z));
  }
  r.pass = ortho <= 1e-11 && cov <= 1e-12;
  r.detail = "20 draws: orthogonality residual " + num(ortho) + " (tol 1e-11), covariance residual " +
             num(cov) + " (tol 1e-12)";
  return r;
}

// 3. reproducing formula through #
Result reproducing(const Config& cfg) {
  Result r{3, "reproducing formula", false, ""};
  const Grid tg = desk_grid(cfg);
  std::mt19937_64 rng(seed_for(cfg, 3));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const SampledSignal f = random_signal(tg, rng);
    const SampledSignal psi = random_signal(tg, rng);
    const SampledSignal gamma = random_signal(tg, rng);
    const SampledSignal phi = random_signal(tg, rng);
    worst = std::max(worst, reproducing_check(f, psi, gamma, phi));
  }
  r.pass = worst <= 1e-9;
  r.detail = "20 draws: max residual " + num(worst) + " (tol 1e-09)";
  return r;
}

// 4. R_{psi reflected} S_chi = kappa id
Result complemented(const Config& cfg) {
  Result r{4, "complemented subspace identity", false, ""};
  const std::uint64_t seed = seed_for(cfg, 4);

  const Grid g1({16.0}, {256});
  const DiscreteSpaceSpec s0(LpSpec{2.0, Weight::one()}, zero_twist(1), Lattice::diagonal({2.0}),
                             bump1d(g1, 0.0, 0.9));
  const double e0 = complemented_identity_check(s0, bump1d(g1, 0.1, 0.7), 50, seed);

  const Grid pg = Grid({4.0}, {16}).phase_space();
  Eigen::VectorXd c1(2), r1(2), c2(2), r2(2);
  c1 << 0.0, 0.0;
  r1 << 0.45, 0.45;
  c2 << 0.0625, -0.0625;
  r2 << 0.35, 0.4;
  const DiscreteSpaceSpec sb(LpSpec{2.0, Weight::one()}, standard_twist(1),
                             Lattice::diagonal({1.0, 1.0}), sample_function(pg, rules::bump(c1, r1)));
  const double eb = complemented_identity_check(sb, sample_function(pg, rules::bump(c2, r2)), 50, seed);

  r.pass = e0 <= 1e-9 && eb <= 1e-9;
  r.detail = "50 random c: max rel error B=0 " + num(e0) + ", B=B0 " + num(eb) + " (tol 1e-09)";
  return r;
}

struct DensityRun {
  FrameBounds fb;
  double recon = 0.0;
};

DensityRun density_run(const SampledSignal& psi, double a, double b, int recon_trials,
                       std::mt19937_64& rng) {
  const GaborSystem sys(psi, Lattice::diagonal({a, b}));
  DensityRun d;
  d.fb = frame_bounds(sys);
  if (recon_trials > 0) {
    const GaborSystem dual = sys.with_window(canonical_dual(sys));
    for (int i = 0; i < recon_trials; ++i) {
      d.recon = std::max(d.recon, reconstruction_error(random_signal(psi.grid(), rng), sys, dual));
    }
  }
  return d;
}

// 5. frame bounds across densities
Result frame_threshold(const Config& cfg) {
  Result r{5, "Gabor frame threshold", false, ""};
  std::mt19937_64 rng(seed_for(cfg, 5));
  const Grid g({16.0}, {256});
  const SampledSignal psi = unit(sample_function(g, rules::gaussian(1)));
  const DensityRun q25 = density_run(psi, 0.5, 0.5, 50, rng);
  const DensityRun q50 = density_run(psi, 1.0, 0.5, 50, rng);

  // ab = 15/16 does not fit on L=16, M=256 (ab = M / (n_t n_f) there). Use a
  // square lattice a = b = L/16 on L = sqrt(240), M = 240. A square ab = 1/2
  // lattice on L = sqrt(128), M = 128 is reported alongside.
  const double l94 = std::sqrt(240.0), l50 = std::sqrt(128.0);
  const SampledSignal psi94 = unit(sample_function(Grid({l94}, {240}), rules::gaussian(1)));
  const SampledSignal psi50 = unit(sample_function(Grid({l50}, {128}), rules::gaussian(1)));
  const DensityRun n94 = density_run(psi94, l94 / 16.0, l94 / 16.0, 0, rng);
  const DensityRun s50 = density_run(psi50, l50 / 16.0, l50 / 16.0, 0, rng);

  const bool frames = q25.fb.lower > 1e-3 * q25.fb.upper && q50.fb.lower > 1e-3 * q50.fb.upper;
  const bool recon = q25.recon <= 1e-6 && q50.recon <= 1e-6;
  const double cond50 = q50.fb.upper / q50.fb.lower;
  const double cond94 = n94.fb.upper / n94.fb.lower;
  const double cond50_square = s50.fb.upper / s50.fb.lower;
  const bool growth = cond94 >= 10.0 * cond50;
  r.pass = frames && recon && growth;
  r.detail = "L=16,M=256: ab=0.25 A=" + num(q25.fb.lower) + " B=" + num(q25.fb.upper) +
             " recon=" + num(q25.recon) + "; ab=0.5 A=" + num(q50.fb.lower) + " B=" +
             num(q50.fb.upper) + " recon=" + num(q50.recon) + " B/A=" + num(cond50) +
             "; square ab=0.9375 (L=sqrt(240),M=240): B/A=" + num(cond94) +
             " factor=" + num(cond94 / cond50) + " (need >= 10); square ab=0.5 (L=sqrt(128),M=128): B/A=" +
             num(cond50_square) + " factor=" + num(cond94 / cond50_square);
  return r;
}

// 6. Cesaro means converge
Result cesaro(const Config& cfg) {
  Result r{6, "Cesaro convergence", false, ""};
  std::mt19937_64 rng(seed_for(cfg, 6));
  const Grid g({64.0}, {1024});
  const SampledSignal chi = bump1d(g, 0.0, 1.0);
  const Lattice lat = Lattice::diagonal({2.0});
  const std::vector<std::pair<std::string, SpaceSpec>> bases = {
      {"L2", LpSpec{2.0, Weight::one()}},
      {"L1", LpSpec{1.0, Weight::one()}},
      {"FL1", FourierLpSpec{1.0}}};
  std::vector<DiscreteCoeffs> cs;
  const DiscreteSpaceSpec first(bases[0].second, zero_twist(1), lat, chi);
  for (int i = 0; i < 20; ++i) cs.push_back(random_coeffs(first.zero_coeffs(), rng));
  bool pass = true;
  std::string detail = "worst error(N=64)/error(N=8) over 20 c:";
  for (const auto& [name, base] : bases) {
    const DiscreteSpaceSpec spec = first.with_base(base);
    double worst = 0.0;
    for (const auto& c : cs) {
      const SampledSignal full = s_chi(c, spec);
      const double e8 = space_norm(full - cesaro_mean(c, spec, 8), base);
      const double e64 = space_norm(full - cesaro_mean(c, spec, 64), base);
      worst = std::max(worst, e64 / e8);
    }
    pass = pass && worst <= 0.2;
    detail += " " + name + "=" + num(worst);
  }
  r.pass = pass;
  r.detail = detail + " (need <= 0.2)";
  return r;
}

// 7. Lebesgue constants and the sawtooth demo
Result divergence(const Config&) {
  Result r{7, "divergence witness (finite proxy)", false, ""};
  const Index n = 2000;
  const double leb = dirichlet_lebesgue_constant(n);
  const double ratio = leb / (4.0 / (kPi * kPi) * std::log(static_cast<double>(n)));
  const bool leb_ok = ratio >= 0.9 && ratio <= 1.1;

  // Sawtooth u - 1/2 on [0, 1): c_m = i / (2 pi m), truncated at |m| <= 1024.
  const Grid g({2048.0}, {2048});
  DiscreteCoeffs c = DiscreteCoeffs::zeros(Lattice::diagonal({1.0}), g);
  for (Index i = 0; i < c.size(); ++i) {
    const Index m = (*c.points)[i].coords[0];
    if (m != 0) c.values[i] = Complex(0.0, 1.0 / (2.0 * kPi * static_cast<double>(m)));
  }
  auto sym_err = [&](Index nn) {
    return fourier_lp_norm(
        reweight(c, [&](std::span<const Index> m) { return std::abs(m[0]) <= nn ? 0.0 : 1.0; }), 1.0);
  };
  auto fej_err = [&](Index nn) {
    return fourier_lp_norm(
        reweight(c, [&](std::span<const Index> m) { return 1.0 - fejer_weight(nn, m); }), 1.0);
  };
  const double sym = sym_err(64) / sym_err(8);
  const double fej = fej_err(64) / fej_err(8);
  const bool demo_ok = sym >= 0.8 && fej < 0.3;
  r.pass = leb_ok && demo_ok;
  r.detail = "L_2000=" + num(leb) + " ratio to (4/pi^2) ln N = " + num(ratio) +
             " (need [0.9, 1.1]); sawtooth FL1 error ratio N=64/N=8: symmetric=" + num(sym) +
             " (need >= 0.8), Fejer=" + num(fej) + " (need < 0.3)";
  return r;
}

// 8. window independence of the discrete norm
Result window_independence(const Config& cfg) {
  Result r{8, "window independence of discrete norms", false, ""};
  const std::uint64_t seed = seed_for(cfg, 8);
  const Grid g({16.0}, {256});
  const Lattice lat = Lattice::diagonal({2.0});
  const SampledSignal chi1 = bump1d(g, 0.0, 0.9);
  const SampledSignal chi2 = bump1d(g, 0.25, 0.5);
  const std::vector<std::pair<std::string, SpaceSpec>> bases = {
      {"L1", LpSpec{1.0, Weight::one()}},
      {"L2", LpSpec{2.0, Weight::one()}},
      {"FL1", FourierLpSpec{1.0}}};
  bool pass = true;
  std::string detail = "band drift 100->200 trials:";
  for (const auto& [name, base] : bases) {
    const DiscreteSpaceSpec spec(base, zero_twist(1), lat, chi1);
    const RatioStats st = window_equivalence_experiment(spec, chi1, chi2, 200, seed);
    const double drift = band_drift(st, 100);
    pass = pass && drift < 0.05 && std::isfinite(st.band);
    detail += " " + name + " band=" + num(st.band) + " drift=" + num(drift);
  }
  detail += " (need < 0.05); translated bumps:";
  const SampledSignal a = bump1d(g, 0.0, 0.5);
  const SampledSignal b = translate(a, Eigen::VectorXd::Constant(1, 0.25));
  for (const auto& [name, base] : {bases[0], bases[1]}) {
    const DiscreteSpaceSpec spec(base, zero_twist(1), lat, a);
    const RatioStats st = window_equivalence_experiment(spec, a, b, 200, seed);
    const double dev = std::abs(st.band - 1.0);
    pass = pass && dev <= 1e-10;
    detail += " " + name + " |band-1|=" + num(dev);
  }
  r.pass = pass;
  r.detail = detail + " (tol 1e-10)";
  return r;
}

// 9. mixed-norm identification
Result mixed_norm(const Config& cfg) {
  Result r{9, "mixed-norm identification", false, ""};
  const std::uint64_t seed = seed_for(cfg, 9);
  const Grid tg({4.0}, {64});
  MixedNormConfig mc;
  mc.lattice_time = Lattice::diagonal({0.25});
  mc.lattice_freq = Lattice::diagonal({1.0});
  mc.chi_time = bump1d(tg, 0.0, 0.125);
  mc.chi_freq = bump1d(tg.dual(), 0.0, 0.5);
  bool pass = true;
  std::string detail = "16x16 lattice:";
  for (double p : {1.0, 2.0}) {
    for (double q : {1.0, 2.0}) {
      mc.p = p;
      mc.q = q;
      const RatioStats st = mixed_norm_identity_experiment(mc, 200, seed);
      const double drift = band_drift(st, 100);
      pass = pass && std::isfinite(st.band) && drift < 0.05;
      detail += " p=" + num(p) + ",q=" + num(q) + " band=" + num(st.band) + " drift=" + num(drift);
    }
  }
  r.pass = pass;
  r.detail = detail + " (need drift < 0.05)";
  return r;
}

// 10. Gabor coefficients characterize the modulation norm
Result frame_band(const Config& cfg) {
  Result r{10, "frame characterization band", false, ""};
  const std::uint64_t seed = seed_for(cfg, 10);
  const Grid tg = desk_grid(cfg);
  const Lattice lat = Lattice::parse(cfg.lattice);
  const GaborSystem sys(desk_window(cfg, tg), lat);
  const Box box = separation_box(lat);
  const SampledSignal chi =
      sample_function(sys.phase_grid(), rules::bump(Eigen::VectorXd::Zero(2), box.half_widths));
  const std::vector<std::pair<std::string, SpaceSpec>> bases = {
      {"L2", LpSpec{2.0, Weight::one()}},
      {"L11", MixedLpqSpec{1.0, 1.0, Weight::one(), 1}}};
  bool pass = true;
  std::string detail = "200 random f:";
  for (const auto& [name, base] : bases) {
    const DiscreteSpaceSpec dspec(base, standard_twist(1), lat, chi);
    std::mt19937_64 rng(seed);
    std::vector<double> ratios;
    for (int i = 0; i < 200; ++i) {
      const SampledSignal f = random_signal(tg, rng);
      ratios.push_back(gabor_modulation_norm(f, sys, dspec) / modulation_norm(f, sys.window(), base));
    }
    const RatioStats st = RatioStats::from(std::move(ratios), seed);
    const double drift = band_drift(st, 100);
    pass = pass && st.ratio_min > 0.0 && drift < 0.05;
    detail += " " + name + " [A,B]=[" + num(st.ratio_min) + "," + num(st.ratio_max) +
              "] drift=" + num(drift);
  }
  r.pass = pass;
  r.detail = detail + " (need A > 0, drift < 0.05)";
  return r;
}

// 11. Poisson summation
Result poisson(const Config&) {
  Result r{11, "Poisson summation", false, ""};
  const Grid g({32.0}, {512});
  const SampledSignal f = sample_function(g, rules::gaussian(1));
  const SampledSignal phi = sample_function(g, rules::constant(1.0));
  const Lattice lat = Lattice::diagonal({2.0});
  const double r0 = poisson_check(f, phi, lat, Eigen::VectorXd::Constant(1, 0.0));
  const double r1 = poisson_check(f, phi, lat, Eigen::VectorXd::Constant(1, 1.0 / 32.0));
  r.pass = r0 <= 1e-8 && r1 <= 1e-8;
  r.detail = "residual y=0: " + num(r0) + ", y=1/L: " + num(r1) + " (tol 1e-08)";
  return r;
}

Result run_numbered(int id, const Config& cfg) {
  switch (id) {
    case 1: return oracle_equivalence(cfg);
    case 2: return stft_identities(cfg);
    case 3: return reproducing(cfg);
    case 4: return complemented(cfg);
    case 5: return frame_threshold(cfg);
    case 6: return cesaro(cfg);
    case 7: return divergence(cfg);
    case 8: return window_independence(cfg);
    case 9: return mixed_norm(cfg);
    case 10: return frame_band(cfg);
    case 11: return poisson(cfg);
    default: throw InvalidArgument("no criterion " + std::to_string(id));
  }
}

const char* name_of(int id) {
  static const char* names[] = {"",
                                "fast twisted convolution matches the direct oracle",
                                "STFT orthogonality and covariance",
                                "reproducing formula",
                                "complemented subspace identity",
                                "Gabor frame threshold",
                                "Cesaro convergence",
                                "divergence witness (finite proxy)",
                                "window independence of discrete norms",
                                "mixed-norm identification",
                                "frame characterization band",
                                "Poisson summation",
                                "deterministic report"};
  return names[id];
}

Result guarded(int id, const Config& cfg) {
  try {
    return run_numbered(id, cfg);
  } catch (const std::exception& e) {
    return Result{id, name_of(id), false, std::string("error: ") + e.what()};
  }
}

std::string report_text(const std::vector<Result>& rs) {
  std::string s;
  for (const auto& r : rs) s += format(r) + "\n";
  return s;
}

Result determinism(const Config& cfg, const std::string& reference) {
  Result r{12, name_of(12), false, ""};
  std::vector<Result> again;
  for (int id = 1; id < kCriteria; ++id) again.push_back(guarded(id, cfg));
  const std::string second = report_text(again);
  r.pass = second == reference;
  r.detail = "criteria 1-11 rerun with seed " + std::to_string(cfg.seed) +
             ": report byte-identical: " + yes(r.pass);
  return r;
}

}  // namespace

Config parse_config(std::istream& is) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r\"");
      const auto e = s.find_last_not_of(" \t\r\"");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "L") {
        cfg.length = std::stod(value);
      } else if (key == "M") {
        cfg.samples = std::stoll(value);
      } else if (key == "window") {
        cfg.window = value;
      } else if (key == "lattice") {
        cfg.lattice = value;
      } else {
        throw InvalidArgument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      }
    } catch (const InvalidArgument&) {
      throw;
    } catch (const std::exception&) {
      throw InvalidArgument("config line " + std::to_string(lineno) + ": bad value '" + value + "'");
    }
  }
  return cfg;
}

Result run_criterion(int id, const Config& cfg) {
  if (id < 1 || id > kCriteria) throw InvalidArgument("no criterion " + std::to_string(id));
  if (id < kCriteria) return guarded(id, cfg);
  std::vector<Result> first;
  for (int k = 1; k < kCriteria; ++k) first.push_back(guarded(k, cfg));
  return determinism(cfg, report_text(first));
}

std::vector<Result> run_all(const Config& cfg) {
  std::vector<Result> rs;
  for (int id = 1; id < kCriteria; ++id) rs.push_back(guarded(id, cfg));
  rs.push_back(determinism(cfg, report_text(rs)));
  return rs;
}

std::string format(const Result& r) {
  return "criterion " + std::to_string(r.id) + " [" + (r.pass ? "PASS" : "FAIL") + "] " + r.name +
         ": " + r.detail;
}

}  // namespace twg::verify
