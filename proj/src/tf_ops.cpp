#include "twistgabor/tf_ops.hpp"

#include <cmath>
#include <sstream>

namespace twg {

namespace {

constexpr double kAlignTol = 1e-9;

bool near_integer(double v) {
  return std::abs(v - std::round(v)) <= kAlignTol * std::max(1.0, std::abs(v));
}

Index wrap(Index i, Index m) {
  i %= m;
  return i < 0 ? i + m : i;
}

// e^{-2 pi i q / M}, q = 0..M-1, one table per axis.
struct RootTables {
  std::vector<std::vector<Complex>> w;

  explicit RootTables(const Grid& grid) : w(grid.dim()) {
    for (int j = 0; j < grid.dim(); ++j) {
      const Index m = grid.count(j);
      w[j].resize(m);
      for (Index q = 0; q < m; ++q) {
        w[j][q] = std::polar(1.0, -2.0 * kPi * static_cast<double>(q) / static_cast<double>(m));
      }
    }
  }

  // e^{-2 pi i sum_j r_j s_j / M_j}
  Complex phase(std::span<const Index> r, std::span<const Index> s) const {
    Complex z(1.0, 0.0);
    for (size_t j = 0; j < w.size(); ++j) {
      const Index m = static_cast<Index>(w[j].size());
      const Index q = wrap(wrap(r[j], m) * s[j], m);
      if (q != 0) z *= w[j][q];
    }
    return z;
  }
};

// Row-major table of per-axis indices for every flat index.
std::vector<Index> index_table(const Grid& grid) {
  const int d = grid.dim();
  std::vector<Index> t(static_cast<size_t>(grid.size() * d));
  for (Index k = 0; k < grid.size(); ++k) {
    const MultiIndex idx = grid.unflatten(k);
    for (int j = 0; j < d; ++j) t[k * d + j] = idx[j];
  }
  return t;
}

MultiIndex grid_shift(const Eigen::VectorXd& x, const Grid& grid, const char* what) {
  if (x.size() != grid.dim()) {
    throw InvalidArgument(std::string(what) + ": point dimension mismatch");
  }
  MultiIndex k(grid.dim());
  for (int j = 0; j < grid.dim(); ++j) {
    const double u = x[j] / grid.spacing(j);
    if (!near_integer(u)) {
      std::ostringstream os;
      os.precision(17);
      os << what << ": x[" << j << "] = " << x[j] << " is not a multiple of the spacing "
         << grid.spacing(j);
      throw AlignmentError(os.str());
    }
    k[j] = static_cast<Index>(std::llround(u));
  }
  return k;
}

MultiIndex freq_shift(const Eigen::VectorXd& xi, const Grid& grid, const char* what) {
  if (xi.size() != grid.dim()) {
    throw InvalidArgument(std::string(what) + ": frequency dimension mismatch");
  }
  MultiIndex r(grid.dim());
  for (int j = 0; j < grid.dim(); ++j) {
    const double u = xi[j] * grid.length(j);
    if (!near_integer(u)) {
      std::ostringstream os;
      os.precision(17);
      os << what << "[" << j << "] = " << xi[j] << " is not a multiple of 1/L = "
         << 1.0 / grid.length(j);
      throw AlignmentError(os.str());
    }
    r[j] = static_cast<Index>(std::llround(u));
  }
  return r;
}

void check_twist_dim(const MatrixB& b, const Grid& grid, const char* what) {
  if (b.rows() != grid.dim() || b.cols() != grid.dim()) {
    throw InvalidArgument(std::string(what) + ": B is " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()) + ", grid dimension " +
                          std::to_string(grid.dim()));
  }
}

// Integer matrix Q with (B x)_i L_i = sum_j Q_ij k_j for x = k D.
std::vector<Index> shift_matrix(const MatrixB& b, const Grid& grid) {
  const int d = grid.dim();
  std::vector<Index> q(static_cast<size_t>(d * d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) q[i * d + j] = std::llround(b(i, j) * grid.spacing(j) * grid.length(i));
  }
  return q;
}

// out[t] = f[t - k] e^{-2 pi i sum_j r_j s_j / M_j}, s = t - k.
SampledSignal shift_with_phase(const SampledSignal& f, const MultiIndex& k, const MultiIndex& r) {
  const Grid& grid = f.grid();
  const int d = grid.dim();
  const RootTables roots(grid);
  Eigen::VectorXcd out(grid.size());
  MultiIndex s(d);
  for (Index t = 0; t < grid.size(); ++t) {
    const MultiIndex ti = grid.unflatten(t);
    for (int j = 0; j < d; ++j) s[j] = wrap(ti[j] - k[j], grid.count(j));
    out[t] = f[grid.flatten(s)] * roots.phase(r, s);
  }
  return SampledSignal(grid, std::move(out));
}

}  // namespace

SampledSignal translate(const SampledSignal& f, const Eigen::VectorXd& x) {
  const MultiIndex k = grid_shift(x, f.grid(), "translate");
  return shift_with_phase(f, k, MultiIndex(f.grid().dim(), 0));
}

SampledSignal modulate(const SampledSignal& f, const Eigen::VectorXd& xi) {
  MultiIndex r = freq_shift(xi, f.grid(), "modulate: xi");
  for (auto& v : r) v = -v;
  return shift_with_phase(f, MultiIndex(f.grid().dim(), 0), r);
}

SampledSignal reflect(const SampledSignal& f) {
  const Grid& grid = f.grid();
  Eigen::VectorXcd out(grid.size());
  for (Index t = 0; t < grid.size(); ++t) {
    MultiIndex ti = grid.unflatten(t);
    for (auto& v : ti) v = -v;
    out[t] = f[grid.flatten_wrapped(ti)];
  }
  return SampledSignal(grid, std::move(out));
}

SampledSignal time_frequency_shift(const SampledSignal& f, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& xi) {
  return modulate(translate(f, x), xi);
}

SampledSignal chirp(const SampledSignal& f, const MatrixB& b) {
  const Grid& grid = f.grid();
  check_twist_dim(b, grid, "chirp");
  Eigen::VectorXcd out(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    const Eigen::VectorXd x = grid.point(k);
    const double q = (b * x).dot(x);
    out[k] = f[k] * std::polar(1.0, 2.0 * kPi * (q - std::floor(q)));
  }
  return SampledSignal(grid, std::move(out));
}

SampledSignal twisted_translate(const SampledSignal& f, const Eigen::VectorXd& x,
                                const MatrixB& b) {
  check_twist_dim(b, f.grid(), "twisted_translate");
  const MultiIndex k = grid_shift(x, f.grid(), "twisted_translate");
  const MultiIndex r = freq_shift(b * x, f.grid(), "twisted_translate: Bx");
  return shift_with_phase(f, k, r);
}

void require_shift_aligned(const MatrixB& b, const Grid& grid, const char* what) {
  check_twist_dim(b, grid, what);
  for (int i = 0; i < grid.dim(); ++i) {
    for (int j = 0; j < grid.dim(); ++j) {
      if (!near_integer(b(i, j) * grid.spacing(j) * grid.length(i))) {
        throw AlignmentError(std::string(what) + ": B(" + std::to_string(i) + "," +
                             std::to_string(j) + ") D_" + std::to_string(j) + " L_" +
                             std::to_string(i) +
                             " is not an integer, so Bx leaves the frequency grid");
      }
    }
  }
}

ChirpCompatibility chirp_compatibility(const MatrixB& b, const Grid& grid) {
  check_twist_dim(b, grid, "chirp_compatibility");
  ChirpCompatibility c;
  std::ostringstream msg;
  c.shift_aligned = true;
  c.chirp_periodic = true;
  const int d = grid.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (!near_integer(b(i, j) * grid.spacing(j) * grid.length(i))) {
        c.shift_aligned = false;
        msg << "B(" << i << "," << j << ") D_" << j << " L_" << i << " not integral; ";
      }
    }
  }
  // Shifting x by L_k e_k changes Bx.x by L_k sum_j (B_kj + B_jk) x_j + B_kk L_k^2.
  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < d; ++j) {
      if (!near_integer((b(k, j) + b(j, k)) * grid.length(k) * grid.spacing(j))) {
        c.chirp_periodic = false;
        msg << "(B(" << k << "," << j << ")+B(" << j << "," << k << ")) L_" << k << " D_" << j
            << " not integral; ";
      }
    }
    if (!near_integer(b(k, k) * grid.length(k) * grid.length(k))) {
      c.chirp_periodic = false;
      msg << "B(" << k << "," << k << ") L_" << k << "^2 not integral; ";
    }
  }
  c.message = msg.str();
  if (c.message.empty()) c.message = "compatible";
  return c;
}

SampledSignal twisted_convolve_direct(const SampledSignal& f, const SampledSignal& g,
                                      const MatrixB& b) {
  require_same_grid(f.grid(), g.grid(), "twisted_convolve_direct");
  const Grid& grid = f.grid();
  require_shift_aligned(b, grid, "twisted_convolve_direct");
  const int d = grid.dim();
  const Index n = grid.size();
  const std::vector<Index> idx = index_table(grid);
  const std::vector<Index> q = shift_matrix(b, grid);
  const RootTables roots(grid);

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  MultiIndex r(d), s(d);
  for (Index x = 0; x < n; ++x) {
    const Complex fx = f[x];
    if (fx == Complex(0.0, 0.0)) continue;
    const Index* xi = &idx[x * d];
    for (int i = 0; i < d; ++i) {
      r[i] = 0;
      for (int j = 0; j < d; ++j) r[i] += q[i * d + j] * xi[j];
    }
    for (Index t = 0; t < n; ++t) {
      const Index* ti = &idx[t * d];
      for (int j = 0; j < d; ++j) s[j] = wrap(ti[j] - xi[j], grid.count(j));
      out[t] += fx * g[grid.flatten(s)] * roots.phase(r, s);
    }
  }
  out *= grid.cell_volume();
  return SampledSignal(grid, std::move(out));
}

SampledSignal twisted_convolve_fast(const SampledSignal& f, const SampledSignal& g) {
  require_same_grid(f.grid(), g.grid(), "twisted_convolve_fast");
  const Grid& grid = f.grid();
  if (!grid.is_phase_space()) {
    throw InvalidArgument("twisted_convolve_fast: " + grid.describe() +
                          " is not a phase-space grid");
  }
  const int n = grid.dim() / 2;
  const Grid tgrid = grid.block(0, n);
  const Grid fgrid = grid.block(n, n);
  const Index nt = tgrid.size();
  const Index nf = fgrid.size();

  Eigen::VectorXcd fh = f.values();
  Eigen::VectorXcd gh = g.values();
  dft_axes(fh, grid.dims(), n, n, true);
  dft_axes(gh, grid.dims(), n, n, true);

  // shifted[a * nf + nu] = flat frequency index of nu + a.
  const std::vector<Index> tidx = index_table(tgrid);
  const std::vector<Index> fidx = index_table(fgrid);
  std::vector<Index> shifted(static_cast<size_t>(nt * nf));
  MultiIndex v(n);
  for (Index a = 0; a < nt; ++a) {
    for (Index nu = 0; nu < nf; ++nu) {
      for (int j = 0; j < n; ++j) v[j] = fidx[nu * n + j] + tidx[a * n + j];
      shifted[a * nf + nu] = fgrid.flatten_wrapped(v);
    }
  }

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.size());
  MultiIndex s(n);
  for (Index t = 0; t < nt; ++t) {
    auto acc = out.segment(t * nf, nf);
    for (Index a = 0; a < nt; ++a) {
      for (int j = 0; j < n; ++j) s[j] = tidx[t * n + j] - tidx[a * n + j];
      const Index sflat = tgrid.flatten_wrapped(s);
      const Complex* fa = fh.data() + a * nf;
      const Complex* gs = gh.data() + sflat * nf;
      const Index* sh = shifted.data() + a * nf;
      for (Index nu = 0; nu < nf; ++nu) acc[nu] += fa[nu] * gs[sh[nu]];
    }
  }
  dft_axes(out, grid.dims(), n, n, false);
  out *= grid.cell_volume() / static_cast<double>(nf);
  return SampledSignal(grid, std::move(out));
}

double twisted_pairing_identity_check(const SampledSignal& f, const SampledSignal& g,
                                      const SampledSignal& h, const MatrixB& b) {
  require_same_grid(f.grid(), g.grid(), "twisted_pairing_identity_check");
  require_same_grid(f.grid(), h.grid(), "twisted_pairing_identity_check");
  const double cell = f.grid().cell_volume();
  const SampledSignal lhs_conv = twisted_convolve_direct(f, g, b);
  const Complex lhs = cell * lhs_conv.values().cwiseProduct(h.values()).sum();
  const SampledSignal rhs_conv = twisted_convolve_direct(h, chirp(reflect(g), b), -b);
  const Complex rhs = cell * f.values().cwiseProduct(rhs_conv.values()).sum();
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
}

}  // namespace twg
