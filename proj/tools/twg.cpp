// twg: command-line front end for the twistgabor library.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "twistgabor/discrete_spaces.hpp"
#include "twistgabor/modspace.hpp"
#include "twistgabor/report.hpp"
#include "twistgabor/signal_io.hpp"
#include "twistgabor/stft_gabor.hpp"
#include "twistgabor/summation.hpp"
#include "twistgabor/tf_ops.hpp"
#include "verify/acceptance.hpp"

using namespace twg;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double g_mem_mb = kDefaultMemBudgetMb;

void check_budget(Index samples, const std::string& what) {
  const double mb = static_cast<double>(samples) * sizeof(Complex) / (1024.0 * 1024.0);
  if (mb > g_mem_mb) {
    throw UsageError(what + " needs about " + format_double(mb) + " MB, above --mem-mb " +
                     format_double(g_mem_mb));
  }
}

Grid make_grid(int dim, double l, Index m) {
  return Grid(std::vector<double>(dim, l), std::vector<Index>(dim, m), g_mem_mb);
}

SampledSignal unit(SampledSignal f) {
  f *= 1.0 / l2_norm(f);
  return f;
}

// Builtin name or path to a binary signal file.
SampledSignal load_signal(const std::string& what, const Grid& g, std::uint64_t seed) {
  if (what == "gaussian") return unit(sample_function(g, rules::gaussian(g.dim())));
  if (what == "hat") return unit(sample_function(g, rules::hat(g.dim(), 1.0)));
  if (what == "bspline") return unit(sample_function(g, rules::cubic_bspline(g.dim(), 0.5)));
  if (what == "bump") return unit(sample_function(g, rules::bump(g.dim(), 1.0)));
  if (what == "random") {
    std::mt19937_64 rng(seed);
    return random_signal(g, rng);
  }
  SampledSignal f = load_binary(what);
  if (f.grid() != g) {
    throw UsageError(what + " lives on " + f.grid().describe() + ", expected " + g.describe());
  }
  return f;
}

// lp:P[:s] | mixed:P1,P2[:s] | flp:P | c0[:s];  s is a polynomial weight exponent.
SpaceSpec parse_space(const std::string& text, int inner_dims) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw UsageError("empty space spec");
  auto exponent = [](const std::string& s) {
    if (s == "inf") return kInf;
    return std::stod(s);
  };
  auto weight = [&](size_t k) {
    return parts.size() > k ? Weight::polynomial(std::stod(parts[k])) : Weight::one();
  };
  try {
    if (parts[0] == "lp" && parts.size() >= 2) return LpSpec{exponent(parts[1]), weight(2)};
    if (parts[0] == "flp" && parts.size() == 2) return FourierLpSpec{exponent(parts[1])};
    if (parts[0] == "c0") return C0wSpec{weight(1)};
    if (parts[0] == "mixed" && parts.size() >= 2) {
      const auto comma = parts[1].find(',');
      if (comma == std::string::npos) throw UsageError("mixed spec needs P1,P2");
      return MixedLpqSpec{exponent(parts[1].substr(0, comma)), exponent(parts[1].substr(comma + 1)),
                          weight(2), inner_dims};
    }
  } catch (const std::invalid_argument&) {
    throw UsageError("bad number in space spec '" + text + "'");
  }
  throw UsageError("unknown space spec '" + text + "' (use lp:P, mixed:P1,P2, flp:P, c0)");
}

std::vector<Index> parse_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write " + path);
  os << text;
}

SampledSignal separation_bump(const Grid& g, const Lattice& lat, double fraction) {
  const Box box = separation_box(lat);
  return sample_function(g, rules::bump(Eigen::VectorXd::Zero(g.dim()), fraction * box.half_widths));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twg: twisted convolution, Gabor frames and discrete spaces on a periodic grid"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--mem-mb", g_mem_mb, "memory budget in MB")->capture_default_str();

  double L = 16.0;
  Index M = 256;
  std::string window = "gaussian";
  std::string input = "random";
  std::string out;
  std::uint64_t seed = 7;
  double a = 0.5, b = 0.5;
  auto grid_opts = [&](CLI::App* c) {
    c->add_option("--L", L, "period length per axis")->capture_default_str();
    c->add_option("--M", M, "samples per axis (even)")->capture_default_str();
  };
  auto lattice_opts = [&](CLI::App* c) {
    c->add_option("--a", a, "time step of the lattice")->capture_default_str();
    c->add_option("--b", b, "frequency step of the lattice")->capture_default_str();
  };

  auto* stft = app.add_subcommand("stft", "phase-space CSV of V_psi f");
  grid_opts(stft);
  stft->add_option("--input", input, "signal file or builtin (gaussian, random, ...)")->capture_default_str();
  stft->add_option("--window", window, "window file or builtin")->capture_default_str();
  stft->add_option("--seed", seed)->capture_default_str();
  stft->add_option("--out", out, "output CSV (default stdout)");

  bool dense = false;
  auto* fb = app.add_subcommand("frame-bounds", "frame bounds A, B of a Gabor system");
  grid_opts(fb);
  lattice_opts(fb);
  fb->add_option("--window", window)->capture_default_str();
  fb->add_flag("--dense", dense, "also report the dense-eigenvalue oracle (grid <= 4096)");

  auto* dw = app.add_subcommand("dual-window", "canonical dual window and dual-pair error");
  grid_opts(dw);
  lattice_opts(dw);
  dw->add_option("--window", window)->capture_default_str();
  dw->add_option("--out", out, "binary file for the dual window");

  std::string n_list = "1,2,4,8,16,32,64";
  auto* rc = app.add_subcommand("reconstruct", "Cesaro-weighted Gabor expansion error over N");
  grid_opts(rc);
  lattice_opts(rc);
  rc->add_option("--window", window)->capture_default_str();
  rc->add_option("--input", input)->capture_default_str();
  rc->add_option("--seed", seed)->capture_default_str();
  rc->add_option("--N", n_list)->capture_default_str();

  std::string coeffs, lattice_text = "diag:2", base = "lp:2", compare;
  std::string twist = "zero";
  double radius = 1.0, radius2 = 0.5;
  int trials = 200;
  bool phase = false;
  auto* dn = app.add_subcommand("dnorm", "discrete norm of a coefficient file");
  grid_opts(dn);
  dn->add_option("--coeffs", coeffs, "CSV m_0,...,re,im (default: random)");
  dn->add_option("--lattice", lattice_text)->capture_default_str();
  dn->add_option("--base", base, "lp:P[:s], mixed:P1,P2[:s], flp:P, c0[:s]")->capture_default_str();
  dn->add_option("--twist", twist, "zero or standard")->capture_default_str();
  dn->add_flag("--phase-space", phase, "use the phase-space grid of the time grid");
  dn->add_option("--radius", radius, "window radius as a fraction of the separation box")
      ->capture_default_str();
  dn->add_option("--compare-window", radius2, "second window radius; reports the ratio band");
  dn->add_option("--trials", trials)->capture_default_str();
  dn->add_option("--seed", seed)->capture_default_str();

  auto* cd = app.add_subcommand("cesaro-demo", "convergence_mode_report CSV for random c");
  grid_opts(cd);
  cd->add_option("--lattice", lattice_text)->capture_default_str();
  cd->add_option("--base", base)->capture_default_str();
  cd->add_option("--N", n_list)->capture_default_str();
  cd->add_option("--seed", seed)->capture_default_str();

  std::string leb_list = "1,8,64,2000";
  auto* lb = app.add_subcommand("lebesgue", "Lebesgue constants and ratio to (4/pi^2) ln N");
  lb->add_option("--N", leb_list)->capture_default_str();

  bool gabor = false;
  auto* mn = app.add_subcommand("modnorm", "modulation norm ||V_psi f||_base");
  grid_opts(mn);
  lattice_opts(mn);
  mn->add_option("--input", input)->capture_default_str();
  mn->add_option("--window", window)->capture_default_str();
  mn->add_option("--base", base)->capture_default_str();
  mn->add_option("--seed", seed)->capture_default_str();
  mn->add_flag("--gabor", gabor, "also the lattice norm and its ratio");

  double y = 0.0;
  auto* pc = app.add_subcommand("poisson-check", "Poisson summation residual");
  pc->add_option("--L", L)->capture_default_str();
  pc->add_option("--M", M)->capture_default_str();
  pc->add_option("--lattice", lattice_text)->capture_default_str();
  pc->add_option("--y", y, "frequency shift (multiple of 1/L)")->capture_default_str();

  double p_outer = 1.0, w_exp = 0.0;
  std::string inner = "lp:2";
  auto* am = app.add_subcommand("amalgam", "amalgam norm W(inner, L^p_w)");
  grid_opts(am);
  am->add_option("--input", input)->capture_default_str();
  am->add_option("--inner", inner)->capture_default_str();
  am->add_option("--p", p_outer)->capture_default_str();
  am->add_option("--w", w_exp, "polynomial weight exponent")->capture_default_str();
  am->add_option("--chi-radius", radius)->capture_default_str();
  am->add_option("--seed", seed)->capture_default_str();

  std::string config;
  auto* va = app.add_subcommand("verify-all", "run the acceptance suite");
  va->add_option("--seed", seed)->capture_default_str();
  va->add_option("--config", config, "key = value overrides (seed, L, M, window, lattice)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_parse = app.exit(e);
    return rc_parse == 0 ? 0 : 2;
  }

  try {
    if (stft->parsed()) {
      const Grid g = make_grid(1, L, M);
      check_budget(g.size() * g.size(), "stft");
      const SampledSignal v = stft_full(load_signal(input, g, seed), load_signal(window, g, seed));
      std::ostringstream os;
      write_csv(os, v);
      emit(os.str(), out);
      return 0;
    }
    if (fb->parsed() || dw->parsed()) {
      const Grid g = make_grid(1, L, M);
      const GaborSystem sys(load_signal(window, g, seed), Lattice::diagonal({a, b}));
      Json j;
      j["grid"] = to_json(g);
      j["a"] = a;
      j["b"] = b;
      j["ab"] = a * b;
      if (fb->parsed()) {
        try {
          const FrameBounds bounds = frame_bounds(sys);
          j["frame_bounds"] = to_json(bounds);
          if (dense) {
            const Eigen::VectorXd ev = frame_spectrum_dense(sys);
            j["dense"] = {{"A", ev.minCoeff()}, {"B", ev.maxCoeff()}};
          }
          std::cout << dump(j);
          return 0;
        } catch (const NumericalError& e) {
          j["error"] = e.what();
          std::cout << dump(j);
          return 1;
        }
      }
      const SampledSignal gamma = canonical_dual(sys);
      const DualPairReport rep = check_dual_pair(sys.window(), gamma, sys.lattice());
      if (!out.empty()) save_binary(out, gamma);
      j["dual_pair_max_error"] = rep.max_error;
      j["symmetric_error"] = rep.symmetric_error;
      j["pass"] = rep.pass;
      std::cout << dump(j);
      return rep.pass ? 0 : 1;
    }
    if (rc->parsed()) {
      const Grid g = make_grid(1, L, M);
      const Lattice lat = Lattice::diagonal({a, b});
      const GaborSystem sys(load_signal(window, g, seed), lat);
      const SampledSignal gamma = canonical_dual(sys);
      const DiscreteSpaceSpec dspec(LpSpec{2.0, Weight::one()}, standard_twist(1), lat,
                                    separation_bump(sys.phase_grid(), lat, 1.0));
      const auto rows = frame_expansion_check(load_signal(input, g, seed), sys, gamma, dspec,
                                              parse_list(n_list));
      std::cout << "N,error\n";
      for (const auto& r : rows) std::cout << r.n_terms << ',' << format_double(r.error) << '\n';
      return 0;
    }
    if (dn->parsed()) {
      const Lattice lat = Lattice::parse(lattice_text);
      const int time_dim = phase ? lat.dim() / 2 : lat.dim();
      if (phase && lat.dim() % 2 != 0) throw UsageError("--phase-space needs an even lattice dimension");
      const Grid tg = make_grid(time_dim, L, M);
      const Grid g = phase ? tg.phase_space() : tg;
      check_budget(g.size(), "dnorm");
      const MatrixB bm = twist == "standard" ? standard_twist(time_dim) : zero_twist(g.dim());
      if (twist != "standard" && twist != "zero") throw UsageError("--twist must be zero or standard");
      const DiscreteSpaceSpec spec(parse_space(base, time_dim), bm, lat, separation_bump(g, lat, radius));
      Json j;
      j["spec"] = describe(spec.base());
      if (dn->count("--compare-window") > 0) {
        const RatioStats st = window_equivalence_experiment(spec, spec.window(),
                                                            separation_bump(g, lat, radius2), trials, seed);
        std::cout << dump(to_json(st, describe(spec.base())));
        return 0;
      }
      DiscreteCoeffs c = spec.zero_coeffs();
      if (coeffs.empty()) {
        std::mt19937_64 rng(seed);
        c = random_coeffs(c, rng);
      } else {
        std::ifstream is(coeffs);
        if (!is) throw UsageError("cannot open " + coeffs);
        c = spec.zero_coeffs().with_values(read_csv(is, lat, g).values);
      }
      j["norm"] = discrete_norm(c, spec);
      std::cout << dump(j);
      return 0;
    }
    if (cd->parsed()) {
      const Lattice lat = Lattice::parse(lattice_text);
      const Grid g = make_grid(lat.dim(), L, M);
      const DiscreteSpaceSpec spec(parse_space(base, 1), zero_twist(g.dim()), lat,
                                   separation_bump(g, lat, 1.0));
      std::mt19937_64 rng(seed);
      const DiscreteCoeffs c = random_coeffs(spec.zero_coeffs(), rng);
      std::cerr << "finite-N proxy: errors of each summation mode against S_chi(c)\n";
      write_csv(std::cout, convergence_mode_report(c, spec, parse_list(n_list), {1.0, 8, seed}));
      return 0;
    }
    if (lb->parsed()) {
      std::cout << "N,lebesgue_constant,ratio_to_4_over_pi2_lnN\n";
      for (Index n : parse_list(leb_list)) {
        const double lc = dirichlet_lebesgue_constant(n);
        const double ref = 4.0 / (kPi * kPi) * std::log(static_cast<double>(n));
        std::cout << n << ',' << format_double(lc) << ',' << (n > 1 ? format_double(lc / ref) : "nan")
                  << '\n';
      }
      return 0;
    }
    if (mn->parsed()) {
      const Grid g = make_grid(1, L, M);
      check_budget(g.size() * g.size(), "modnorm");
      const SampledSignal f = load_signal(input, g, seed);
      const SampledSignal psi = load_signal(window, g, seed + 1);
      const SpaceSpec spec = parse_space(base, 1);
      Json j;
      j["spec"] = describe(spec);
      const double norm = modulation_norm(f, psi, spec);
      j["modulation_norm"] = norm;
      if (gabor) {
        const Lattice lat = Lattice::diagonal({a, b});
        const GaborSystem sys(psi, lat);
        const DiscreteSpaceSpec dspec(spec, standard_twist(1), lat,
                                      separation_bump(sys.phase_grid(), lat, 1.0));
        const double gn = gabor_modulation_norm(f, sys, dspec);
        j["gabor_modulation_norm"] = gn;
        j["ratio"] = gn / norm;
      }
      std::cout << dump(j);
      return 0;
    }
    if (pc->parsed()) {
      const Grid g = make_grid(1, L, M);
      const double res = poisson_check(sample_function(g, rules::gaussian(1)),
                                       sample_function(g, rules::constant(1.0)),
                                       Lattice::parse(lattice_text), Eigen::VectorXd::Constant(1, y));
      Json j;
      j["residual"] = res;
      j["pass"] = res <= 1e-8;
      std::cout << dump(j);
      return res <= 1e-8 ? 0 : 1;
    }
    if (am->parsed()) {
      const Grid g = make_grid(1, L, M);
      const SampledSignal f = load_signal(input, g, seed);
      const SampledSignal chi = sample_function(g, rules::bump(1, radius));
      const Weight w = w_exp == 0.0 ? Weight::one() : Weight::polynomial(w_exp);
      Json j;
      j["amalgam_norm"] = amalgam_norm(f, parse_space(inner, 1), p_outer, w, chi);
      std::cout << dump(j);
      return 0;
    }
    if (va->parsed()) {
      verify::Config cfg;
      if (!config.empty()) {
        std::ifstream is(config);
        if (!is) throw UsageError("cannot open " + config);
        cfg = verify::parse_config(is);
      }
      if (va->count("--seed") > 0 || config.empty()) cfg.seed = seed;
      bool ok = true;
      for (const auto& r : verify::run_all(cfg)) {
        std::cout << verify::format(r) << std::endl;
        ok = ok && r.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
