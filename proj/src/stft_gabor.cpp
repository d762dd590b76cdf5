#include "twistgabor/stft_gabor.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "twistgabor/signal_io.hpp"
#include "twistgabor/tf_ops.hpp"

namespace twg {

namespace {

constexpr std::uint64_t kStartSeed = 0x5eedf00dULL;

// psi(t - x) for the time shift with flat index `shift`.
Eigen::VectorXcd shifted(const SampledSignal& psi, Index shift) {
  const Grid& g = psi.grid();
  const MultiIndex k = g.unflatten(shift);
  Eigen::VectorXcd out(g.size());
  MultiIndex s(g.dim());
  for (Index t = 0; t < g.size(); ++t) {
    const MultiIndex ti = g.unflatten(t);
    for (int j = 0; j < g.dim(); ++j) s[j] = ti[j] - k[j];
    out[t] = psi[g.flatten_wrapped(s)];
  }
  return out;
}

double vec_norm(const SampledSignal& f) { return f.values().norm(); }

CgResult cg(const GaborSystem& sys, const SampledSignal& rhs, const SampledSignal& guess,
            double tol, int max_iter) {
  const double bnorm = vec_norm(rhs);
  CgResult res;
  res.x = guess;
  if (bnorm == 0.0) {
    res.x = SampledSignal(rhs.grid());
    res.converged = true;
    return res;
  }
  Eigen::VectorXcd x = guess.values();
  Eigen::VectorXcd r = rhs.values() - frame_apply(guess, sys).values();
  Eigen::VectorXcd p = r;
  double rr = r.squaredNorm();
  int it = 0;
  while (std::sqrt(rr) > tol * bnorm && it < max_iter) {
    const Eigen::VectorXcd sp = frame_apply(SampledSignal(rhs.grid(), p), sys).values();
    const Complex psp = p.dot(sp);
    if (!(psp.real() > 0.0)) break;
    const double alpha = rr / psp.real();
    x += alpha * p;
    r -= alpha * sp;
    const double rr_new = r.squaredNorm();
    p = r + (rr_new / rr) * p;
    rr = rr_new;
    ++it;
  }
  // True residual, not the recursively updated one.
  SampledSignal xs(rhs.grid(), x);
  res.residual = (frame_apply(xs, sys).values() - rhs.values()).norm() / bnorm;
  res.x = std::move(xs);
  res.iterations = it;
  res.converged = res.residual <= tol * 1.0000001 || std::sqrt(rr) <= tol * bnorm;
  return res;
}

SampledSignal start_vector(const Grid& grid) {
  std::mt19937_64 rng(kStartSeed);
  SampledSignal x = random_signal(grid, rng);
  x *= 1.0 / vec_norm(x);
  return x;
}

}  // namespace

// --- STFT ---------------------------------------------------------------------

SampledSignal stft_full(const SampledSignal& f, const SampledSignal& psi) {
  require_same_grid(f.grid(), psi.grid(), "stft_full");
  const Grid& tg = f.grid();
  const Grid pg = tg.phase_space();
  const Index n = tg.size();
  Eigen::VectorXcd out(pg.size());
  Eigen::VectorXcd prod(n);
  for (Index x = 0; x < n; ++x) {
    prod = f.values().cwiseProduct(shifted(psi, x).conjugate());
    dft(prod, tg.dims(), true);
    out.segment(x * n, n) = tg.cell_volume() * prod;
  }
  return SampledSignal(pg, std::move(out));
}

double orthogonality_residual(const SampledSignal& f, const SampledSignal& phi,
                              const SampledSignal& psi, const SampledSignal& gamma) {
  const Complex lhs = inner_product(stft_full(f, psi), stft_full(phi, gamma));
  const Complex rhs = inner_product(f, phi) * inner_product(gamma, psi);
  const double scale = l2_norm(f) * l2_norm(phi) * l2_norm(psi) * l2_norm(gamma);
  return scale == 0.0 ? std::abs(lhs - rhs) : std::abs(lhs - rhs) / scale;
}

double covariance_residual(const SampledSignal& f, const SampledSignal& psi,
                           const Eigen::VectorXd& z) {
  const int n = f.grid().dim();
  if (z.size() != 2 * n) throw InvalidArgument("covariance_residual: z must have dimension 2n");
  const SampledSignal lhs = stft_full(time_frequency_shift(f, z.head(n), z.tail(n)), psi);
  const SampledSignal v = stft_full(f, psi);
  const SampledSignal rhs = twisted_translate(v, z, standard_twist(n));
  const double denom = v.values().cwiseAbs().maxCoeff();
  const double num = (lhs.values() - rhs.values()).cwiseAbs().maxCoeff();
  return denom == 0.0 ? num : num / denom;
}

double reproducing_check(const SampledSignal& f, const SampledSignal& psi,
                         const SampledSignal& gamma, const SampledSignal& phi) {
  const Complex gp = inner_product(gamma, psi);
  if (std::abs(gp) <= 1e-8) {
    throw InvalidArgument("reproducing_check: (gamma, psi) = " + format_double(std::abs(gp)) +
                          " is numerically zero");
  }
  const SampledSignal lhs = stft_full(f, phi);
  SampledSignal rhs = twisted_convolve_fast(stft_full(f, psi), stft_full(gamma, phi));
  rhs *= 1.0 / gp;
  const double denom = lhs.values().cwiseAbs().maxCoeff();
  const double num = (lhs.values() - rhs.values()).cwiseAbs().maxCoeff();
  return denom == 0.0 ? num : num / denom;
}

// --- coefficients -------------------------------------------------------------

DiscreteCoeffs DiscreteCoeffs::zeros(const Lattice& lattice, const Grid& grid) {
  return zeros(lattice, grid,
               std::make_shared<const std::vector<LatticePoint>>(enumerate(lattice, grid)));
}

DiscreteCoeffs DiscreteCoeffs::zeros(const Lattice& lattice, const Grid& grid,
                                     std::shared_ptr<const std::vector<LatticePoint>> points) {
  DiscreteCoeffs c;
  c.lattice = lattice;
  c.grid = grid;
  c.values = Eigen::VectorXcd::Zero(static_cast<Index>(points->size()));
  c.points = std::move(points);
  return c;
}

DiscreteCoeffs DiscreteCoeffs::with_values(Eigen::VectorXcd v) const {
  if (v.size() != size()) throw InvalidArgument("DiscreteCoeffs: value count mismatch");
  if (!v.allFinite()) throw InvalidArgument("DiscreteCoeffs: non-finite coefficient");
  DiscreteCoeffs c = *this;
  c.values = std::move(v);
  return c;
}

Index DiscreteCoeffs::find_coords(std::span<const Index> m) const {
  for (Index i = 0; i < size(); ++i) {
    const MultiIndex& pm = (*points)[i].coords;
    if (std::equal(pm.begin(), pm.end(), m.begin(), m.end())) return i;
  }
  return -1;
}

DiscreteCoeffs random_coeffs(const DiscreteCoeffs& shape, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::VectorXcd v(shape.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Complex(re, im);
  }
  return shape.with_values(std::move(v));
}

void write_csv(std::ostream& os, const DiscreteCoeffs& c) {
  const int d = c.lattice.dim();
  for (int j = 0; j < d; ++j) os << "m_" << j << ",";
  os << "re,im\n";
  for (Index i = 0; i < c.size(); ++i) {
    for (Index m : (*c.points)[i].coords) os << m << ",";
    os << format_double(c.values[i].real()) << "," << format_double(c.values[i].imag()) << "\n";
  }
}

DiscreteCoeffs read_csv(std::istream& is, const Lattice& lattice, const Grid& grid) {
  DiscreteCoeffs c = DiscreteCoeffs::zeros(lattice, grid);
  std::map<MultiIndex, Index> lookup;
  for (Index i = 0; i < c.size(); ++i) lookup[(*c.points)[i].coords] = i;
  const int d = lattice.dim();
  std::string line;
  std::getline(is, line);  // header
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != d + 2) {
      throw InvalidArgument("read_csv: line " + std::to_string(lineno) + " has " +
                            std::to_string(cells.size()) + " fields, expected " +
                            std::to_string(d + 2));
    }
    MultiIndex m(d);
    try {
      for (int j = 0; j < d; ++j) m[j] = std::stoll(cells[j]);
      const Complex v(std::stod(cells[d]), std::stod(cells[d + 1]));
      auto it = lookup.find(m);
      if (it == lookup.end()) {
        throw InvalidArgument("read_csv: line " + std::to_string(lineno) +
                              " names a point outside the enumerated lattice");
      }
      c.values[it->second] = v;
    } catch (const InvalidArgument&) {
      throw;
    } catch (const std::exception&) {
      throw InvalidArgument("read_csv: malformed line " + std::to_string(lineno));
    }
  }
  return c.with_values(c.values);
}

// --- Gabor systems ------------------------------------------------------------

GaborSystem::GaborSystem(SampledSignal window, Lattice lattice)
    : window_(std::move(window)), lattice_(std::move(lattice)) {
  const Grid& tg = window_.grid();
  if (lattice_.dim() != 2 * tg.dim()) {
    throw InvalidArgument("GaborSystem: lattice dimension " + std::to_string(lattice_.dim()) +
                          " must be twice the time dimension " + std::to_string(tg.dim()));
  }
  if (window_.values().cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidArgument("GaborSystem: zero window");
  }
  phase_grid_ = tg.phase_space();
  points_ = std::make_shared<const std::vector<LatticePoint>>(enumerate(lattice_, phase_grid_));
  const Index nf = tg.size();
  const int n = tg.dim();
  for (Index i = 0; i < static_cast<Index>(points_->size()); ++i) {
    const LatticePoint& p = (*points_)[i];
    const Index tflat = p.flat / nf;
    if (groups_.empty() || groups_.back().time_flat != tflat) {
      groups_.push_back({tflat, p.position.head(n), {}, {}});
    }
    groups_.back().point_ids.push_back(i);
    groups_.back().freq_flat.push_back(p.flat % nf);
  }
}

GaborSystem GaborSystem::with_window(SampledSignal window) const {
  require_same_grid(window.grid(), window_.grid(), "GaborSystem::with_window");
  if (window.values().cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidArgument("GaborSystem: zero window");
  }
  GaborSystem s = *this;
  s.window_ = std::move(window);
  return s;
}

DiscreteCoeffs GaborSystem::zero_coeffs() const {
  return DiscreteCoeffs::zeros(lattice_, phase_grid_, points_);
}

DiscreteCoeffs analysis(const SampledSignal& f, const GaborSystem& sys) {
  require_same_grid(f.grid(), sys.time_grid(), "analysis");
  const Grid& tg = sys.time_grid();
  DiscreteCoeffs c = sys.zero_coeffs();
  Eigen::VectorXcd prod(tg.size());
  for (const auto& g : sys.groups()) {
    prod = f.values().cwiseProduct(shifted(sys.window(), g.time_flat).conjugate());
    dft(prod, tg.dims(), true);
    for (size_t i = 0; i < g.point_ids.size(); ++i) {
      c.values[g.point_ids[i]] = tg.cell_volume() * prod[g.freq_flat[i]];
    }
  }
  return c;
}

SampledSignal synthesis(const DiscreteCoeffs& c, const GaborSystem& sys) {
  if (c.points != sys.shared_points() &&
      (c.grid != sys.phase_grid() || c.size() != static_cast<Index>(sys.points().size()))) {
    throw InvalidArgument("synthesis: coefficients do not belong to this lattice");
  }
  const Grid& tg = sys.time_grid();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(tg.size());
  Eigen::VectorXcd acc(tg.size());
  for (const auto& g : sys.groups()) {
    acc.setZero();
    for (size_t i = 0; i < g.point_ids.size(); ++i) acc[g.freq_flat[i]] += c.values[g.point_ids[i]];
    dft(acc, tg.dims(), false);
    out += acc.cwiseProduct(shifted(sys.window(), g.time_flat));
  }
  return SampledSignal(tg, std::move(out));
}

SampledSignal frame_apply(const SampledSignal& f, const GaborSystem& sys_psi,
                          const GaborSystem& sys_gamma) {
  if (sys_psi.shared_points() != sys_gamma.shared_points() &&
      (sys_psi.lattice().generator() - sys_gamma.lattice().generator()).cwiseAbs().maxCoeff() >
          0.0) {
    throw InvalidArgument("frame_apply: the two systems use different lattices");
  }
  return synthesis(analysis(f, sys_psi), sys_gamma);
}

CgResult solve_frame(const GaborSystem& sys, const SampledSignal& rhs, double tol, int max_iter) {
  return cg(sys, rhs, SampledSignal(rhs.grid()), tol, max_iter);
}

FrameBounds frame_bounds(const GaborSystem& sys, int iters, double tol) {
  FrameBounds fb;
  const Grid& tg = sys.time_grid();

  SampledSignal x = start_vector(tg);
  double rho = 0.0;
  for (int it = 1; it <= iters; ++it) {
    const SampledSignal y = frame_apply(x, sys);
    const double rho_new = x.values().dot(y.values()).real();
    fb.upper_iterations = it;
    const double ynorm = vec_norm(y);
    if (ynorm == 0.0) throw NumericalError("frame_bounds: S annihilated the start vector");
    x = (1.0 / ynorm) * y;
    if (it > 1 && std::abs(rho_new - rho) <= tol * std::abs(rho_new)) {
      rho = rho_new;
      break;
    }
    rho = rho_new;
  }
  fb.upper = rho;

  x = start_vector(tg);
  double mu = 0.0;
  SampledSignal guess(tg);
  for (int it = 1; it <= iters; ++it) {
    const CgResult r = cg(sys, x, guess, 1e-10, 500);
    if (!r.converged) {
      throw NumericalError("frame_bounds: CG did not converge (relative residual " +
                           format_double(r.residual) + " after " + std::to_string(r.iterations) +
                           " iterations); lower frame bound is numerically zero, upper bound " +
                           format_double(fb.upper));
    }
    const Complex xy = r.x.values().dot(x.values());
    // Rayleigh quotient of y = S^{-1} x: (S y, y) / (y, y) = (x, y) / (y, y).
    const double mu_new = xy.real() / r.x.values().squaredNorm();
    fb.lower_iterations = it;
    const double ynorm = vec_norm(r.x);
    x = (1.0 / ynorm) * r.x;
    guess = (1.0 / mu_new) * x;
    if (it > 1 && std::abs(mu_new - mu) <= tol * std::abs(mu_new)) {
      mu = mu_new;
      break;
    }
    mu = mu_new;
  }
  fb.lower = mu;
  return fb;
}

Eigen::VectorXd frame_spectrum_dense(const GaborSystem& sys) {
  const Grid& tg = sys.time_grid();
  const Index n = tg.size();
  if (n > 4096) throw InvalidArgument("frame_spectrum_dense: grid larger than 4096 samples");
  Eigen::MatrixXcd s(n, n);
  for (Index j = 0; j < n; ++j) {
    SampledSignal e(tg);
    e[j] = 1.0;
    s.col(j) = frame_apply(e, sys).values();
  }
  const Eigen::MatrixXcd h = 0.5 * (s + s.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SampledSignal canonical_dual(const GaborSystem& sys, double tol) {
  const CgResult r = solve_frame(sys, sys.window(), tol, 500);
  if (!r.converged) {
    std::string bounds;
    try {
      const FrameBounds fb = frame_bounds(sys);
      bounds = "A = " + format_double(fb.lower) + ", B = " + format_double(fb.upper);
    } catch (const NumericalError& e) {
      bounds = e.what();
    }
    throw NumericalError("canonical_dual: not a frame at this precision (CG residual " +
                         format_double(r.residual) + "); " + bounds);
  }
  return r.x;
}

DualPairReport check_dual_pair(const SampledSignal& psi, const SampledSignal& gamma,
                               const Lattice& lattice, double tol, int random_probes,
                               std::uint64_t seed) {
  const GaborSystem sp(psi, lattice);
  const GaborSystem sg = sp.with_window(gamma);
  const Grid& tg = psi.grid();
  std::vector<SampledSignal> probes;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < random_probes; ++i) probes.push_back(random_signal(tg, rng));
  for (Index k : {Index{0}, tg.size() / 4 + 1, tg.size() / 2 + 3, tg.size() - 1}) {
    SampledSignal d(tg);
    d[k] = 1.0 / tg.cell_volume();
    probes.push_back(std::move(d));
  }
  DualPairReport rep;
  for (const auto& f : probes) {
    const double fn = l2_norm(f);
    rep.max_error = std::max(rep.max_error, l2_norm(frame_apply(f, sp, sg) - f) / fn);
    rep.symmetric_error = std::max(rep.symmetric_error, l2_norm(frame_apply(f, sg, sp) - f) / fn);
  }
  rep.pass = rep.max_error <= tol && rep.symmetric_error <= tol;
  return rep;
}

double reconstruction_error(const SampledSignal& f, const GaborSystem& sys_psi,
                            const GaborSystem& sys_gamma) {
  return l2_norm(frame_apply(f, sys_psi, sys_gamma) - f) / l2_norm(f);
}

}  // namespace twg
