#include "twistgabor/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twg {

namespace {

bool close_rel(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::string point_string(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Index j = 0; j < x.size(); ++j) os << (j ? ", " : "") << x[j];
  os << ")";
  return os.str();
}

double bump1(double t) {
  const double a = std::abs(t);
  if (a >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

double cubic_bspline1(double t) {
  const double a = std::abs(t);
  if (a >= 2.0) return 0.0;
  if (a >= 1.0) {
    const double u = 2.0 - a;
    return u * u * u / 6.0;
  }
  return (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
}

}  // namespace

// --- Grid -------------------------------------------------------------------

Grid::Grid(std::vector<double> lengths, std::vector<Index> counts, double mem_budget_mb)
    : lengths_(std::move(lengths)), counts_(std::move(counts)) {
  if (lengths_.empty() || lengths_.size() > static_cast<size_t>(kMaxGridDim)) {
    throw InvalidArgument("Grid: dimension must be in 1..4");
  }
  if (lengths_.size() != counts_.size()) {
    throw InvalidArgument("Grid: lengths and counts differ in dimension");
  }
  size_ = 1;
  for (size_t j = 0; j < lengths_.size(); ++j) {
    if (!(lengths_[j] > 0.0) || !std::isfinite(lengths_[j])) {
      throw InvalidArgument("Grid: period length on axis " + std::to_string(j) +
                            " must be positive");
    }
    if (counts_[j] <= 0 || counts_[j] % 2 != 0) {
      throw InvalidArgument("Grid: sample count on axis " + std::to_string(j) +
                            " must be a positive even integer");
    }
    size_ *= counts_[j];
  }
  const double bytes = static_cast<double>(size_) * sizeof(Complex);
  if (bytes > mem_budget_mb * 1024.0 * 1024.0) {
    throw InvalidArgument("Grid: " + std::to_string(size_) +
                          " samples exceed the memory budget of " +
                          std::to_string(mem_budget_mb) + " MB");
  }
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int j = 0; j < dim(); ++j) v *= spacing(j);
  return v;
}

double Grid::volume() const {
  double v = 1.0;
  for (double l : lengths_) v *= l;
  return v;
}

Grid Grid::dual() const {
  std::vector<double> l(dim());
  for (int j = 0; j < dim(); ++j) l[j] = static_cast<double>(counts_[j]) / lengths_[j];
  return Grid(std::move(l), counts_);
}

Grid Grid::phase_space() const { return concat(*this, dual()); }

Grid Grid::block(int first, int num) const {
  if (first < 0 || num <= 0 || first + num > dim()) {
    throw InvalidArgument("Grid::block: axis range out of bounds");
  }
  return Grid(std::vector<double>(lengths_.begin() + first, lengths_.begin() + first + num),
              std::vector<Index>(counts_.begin() + first, counts_.begin() + first + num));
}

bool Grid::is_phase_space() const {
  if (dim() % 2 != 0) return false;
  const int n = dim() / 2;
  for (int j = 0; j < n; ++j) {
    if (counts_[j] != counts_[n + j]) return false;
    if (!close_rel(lengths_[n + j], static_cast<double>(counts_[j]) / lengths_[j])) return false;
  }
  return true;
}

MultiIndex Grid::unflatten(Index k) const {
  MultiIndex idx(dim());
  for (int j = dim() - 1; j >= 0; --j) {
    idx[j] = k % counts_[j];
    k /= counts_[j];
  }
  return idx;
}

Index Grid::flatten(std::span<const Index> idx) const {
  Index k = 0;
  for (int j = 0; j < dim(); ++j) k = k * counts_[j] + idx[j];
  return k;
}

Index Grid::flatten_wrapped(std::span<const Index> idx) const {
  Index k = 0;
  for (int j = 0; j < dim(); ++j) {
    Index i = idx[j] % counts_[j];
    if (i < 0) i += counts_[j];
    k = k * counts_[j] + i;
  }
  return k;
}

Eigen::VectorXd Grid::point(Index k) const {
  const MultiIndex idx = unflatten(k);
  Eigen::VectorXd x(dim());
  for (int j = 0; j < dim(); ++j) x[j] = static_cast<double>(idx[j]) * spacing(j);
  return x;
}

Eigen::VectorXd Grid::centered_point(Index k) const {
  const MultiIndex idx = unflatten(k);
  Eigen::VectorXd x(dim());
  for (int j = 0; j < dim(); ++j) {
    Index i = idx[j];
    if (i >= counts_[j] / 2) i -= counts_[j];
    x[j] = static_cast<double>(i) * spacing(j);
  }
  return x;
}

bool Grid::operator==(const Grid& other) const {
  if (counts_ != other.counts_) return false;
  for (int j = 0; j < dim(); ++j) {
    if (!close_rel(lengths_[j], other.lengths_[j])) return false;
  }
  return true;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "Grid(L=[";
  for (int j = 0; j < dim(); ++j) os << (j ? "," : "") << lengths_[j];
  os << "], M=[";
  for (int j = 0; j < dim(); ++j) os << (j ? "," : "") << counts_[j];
  os << "])";
  return os.str();
}

Grid concat(const Grid& a, const Grid& b) {
  std::vector<double> l = a.lengths();
  l.insert(l.end(), b.lengths().begin(), b.lengths().end());
  std::vector<Index> m = a.counts();
  m.insert(m.end(), b.counts().begin(), b.counts().end());
  return Grid(std::move(l), std::move(m));
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": grid mismatch " + a.describe() + " vs " +
                          b.describe());
  }
}

// --- SampledSignal ----------------------------------------------------------

SampledSignal::SampledSignal(Grid grid)
    : grid_(std::move(grid)), values_(Eigen::VectorXcd::Zero(grid_.size())) {}

SampledSignal::SampledSignal(Grid grid, Eigen::VectorXcd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("SampledSignal: " + std::to_string(values_.size()) +
                          " values for a grid of " + std::to_string(grid_.size()) + " samples");
  }
  if (!values_.allFinite()) throw InvalidArgument("SampledSignal: non-finite sample");
}

SampledSignal& SampledSignal::operator+=(const SampledSignal& other) {
  require_same_grid(grid_, other.grid_, "operator+");
  values_ += other.values_;
  return *this;
}

SampledSignal& SampledSignal::operator-=(const SampledSignal& other) {
  require_same_grid(grid_, other.grid_, "operator-");
  values_ -= other.values_;
  return *this;
}

SampledSignal& SampledSignal::operator*=(Complex s) {
  values_ *= s;
  return *this;
}

SampledSignal operator+(SampledSignal a, const SampledSignal& b) { return a += b; }
SampledSignal operator-(SampledSignal a, const SampledSignal& b) { return a -= b; }
SampledSignal operator*(Complex s, SampledSignal a) { return a *= s; }

SampledSignal multiply(const SampledSignal& a, const SampledSignal& b) {
  require_same_grid(a.grid(), b.grid(), "multiply");
  return SampledSignal(a.grid(), a.values().cwiseProduct(b.values()));
}

SampledSignal conjugate(const SampledSignal& a) {
  return SampledSignal(a.grid(), a.values().conjugate());
}

// --- sampling ---------------------------------------------------------------

SampledSignal sample_function(const Grid& grid, const PointRule& rule) {
  Eigen::VectorXcd v(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    const Eigen::VectorXd x = grid.centered_point(k);
    const Complex z = rule(x);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidArgument("sample_function: non-finite value at x = " + point_string(x));
    }
    v[k] = z;
  }
  return SampledSignal(grid, std::move(v));
}

namespace rules {

PointRule gaussian(int dim) {
  const double norm = std::pow(2.0, dim / 4.0);
  return [norm](const Eigen::VectorXd& x) { return Complex(norm * std::exp(-kPi * x.squaredNorm())); };
}

PointRule constant(Complex value) {
  return [value](const Eigen::VectorXd&) { return value; };
}

PointRule bump(Eigen::VectorXd center, Eigen::VectorXd radius) {
  if (center.size() != radius.size()) throw InvalidArgument("bump: center/radius size mismatch");
  if ((radius.array() <= 0.0).any()) throw InvalidArgument("bump: radius must be positive");
  return [center = std::move(center), radius = std::move(radius)](const Eigen::VectorXd& x) {
    double v = 1.0;
    for (Index j = 0; j < x.size(); ++j) v *= bump1((x[j] - center[j]) / radius[j]);
    return Complex(v);
  };
}

PointRule bump(int dim, double radius) {
  return bump(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Constant(dim, radius));
}

PointRule hat(int dim, double width) {
  if (!(width > 0.0)) throw InvalidArgument("hat: width must be positive");
  (void)dim;
  return [width](const Eigen::VectorXd& x) {
    double v = 1.0;
    for (Index j = 0; j < x.size(); ++j) v *= std::max(0.0, 1.0 - std::abs(x[j]) / width);
    return Complex(v);
  };
}

PointRule cubic_bspline(int dim, double width) {
  if (!(width > 0.0)) throw InvalidArgument("cubic_bspline: width must be positive");
  (void)dim;
  return [width](const Eigen::VectorXd& x) {
    double v = 1.0;
    for (Index j = 0; j < x.size(); ++j) v *= cubic_bspline1(x[j] / width);
    return Complex(v);
  };
}

}  // namespace rules

SampledSignal random_signal(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::VectorXcd v(grid.size());
  for (Index k = 0; k < grid.size(); ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[k] = Complex(re, im);
  }
  return SampledSignal(grid, std::move(v));
}

SampledSignal discrete_delta(const Grid& grid) {
  SampledSignal d(grid);
  d[0] = 1.0 / grid.cell_volume();
  return d;
}

// --- inner products and Fourier --------------------------------------------

Complex inner_product(const SampledSignal& f, const SampledSignal& g) {
  require_same_grid(f.grid(), g.grid(), "inner_product");
  // Eigen's dot conjugates the first argument.
  return f.grid().cell_volume() * g.values().dot(f.values());
}

double l2_norm(const SampledSignal& f) {
  return std::sqrt(f.grid().cell_volume()) * f.values().norm();
}

SampledSignal fourier(const SampledSignal& f) {
  Eigen::VectorXcd v = f.values();
  dft(v, f.grid().dims(), true);
  v *= f.grid().cell_volume();
  return SampledSignal(f.grid().dual(), std::move(v));
}

SampledSignal inverse_fourier(const SampledSignal& F) {
  Eigen::VectorXcd v = F.values();
  dft(v, F.grid().dims(), false);
  v *= F.grid().cell_volume();
  return SampledSignal(F.grid().dual(), std::move(v));
}

// --- weights ----------------------------------------------------------------

Weight Weight::polynomial(double exponent, std::vector<int> axes) {
  if (!std::isfinite(exponent)) throw InvalidArgument("Weight: non-finite exponent");
  Weight w;
  w.polys_.push_back({exponent, std::move(axes)});
  return w;
}

Weight Weight::tabulated(Grid grid, Eigen::VectorXd values) {
  if (values.size() != grid.size()) throw InvalidArgument("Weight: table size mismatch");
  if ((values.array() <= 0.0).any() || !values.allFinite()) {
    throw InvalidArgument("Weight: tabulated values must be positive and finite");
  }
  Weight w;
  w.tables_.push_back({std::move(grid), std::move(values)});
  return w;
}

double Weight::at(const Eigen::VectorXd& x) const {
  double w = 1.0;
  for (const auto& p : polys_) {
    double r2 = 0.0;
    if (p.axes.empty()) {
      r2 = x.squaredNorm();
    } else {
      for (int a : p.axes) {
        if (a < 0 || a >= x.size()) throw InvalidArgument("Weight: axis out of range");
        r2 += x[a] * x[a];
      }
    }
    w *= std::pow(1.0 + std::sqrt(r2), p.exponent);
  }
  for (const auto& t : tables_) {
    // Nearest sample of the table grid.
    if (x.size() != t.grid.dim()) throw InvalidArgument("Weight: table dimension mismatch");
    MultiIndex idx(x.size());
    for (Index j = 0; j < x.size(); ++j) {
      idx[j] = static_cast<Index>(std::llround(x[j] / t.grid.spacing(static_cast<int>(j))));
    }
    w *= t.values[t.grid.flatten_wrapped(idx)];
  }
  return w;
}

Eigen::ArrayXd Weight::evaluate(const Grid& grid) const {
  Eigen::ArrayXd out = Eigen::ArrayXd::Ones(grid.size());
  if (is_one()) return out;
  for (const auto& t : tables_) {
    if (t.grid != grid) throw InvalidArgument("Weight: tabulated on a different grid");
  }
  for (Index k = 0; k < grid.size(); ++k) {
    double w = 1.0;
    if (!polys_.empty()) {
      Weight poly_only;
      poly_only.polys_ = polys_;
      w = poly_only.at(grid.centered_point(k));
    }
    for (const auto& t : tables_) w *= t.values[k];
    out[k] = w;
  }
  return out;
}

Weight operator*(const Weight& a, const Weight& b) {
  Weight w = a;
  w.polys_.insert(w.polys_.end(), b.polys_.begin(), b.polys_.end());
  w.tables_.insert(w.tables_.end(), b.tables_.begin(), b.tables_.end());
  return w;
}

std::string Weight::describe() const {
  if (is_one()) return "1";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& p : polys_) {
    os << (first ? "" : "*") << "(1+|x";
    if (!p.axes.empty()) {
      os << "[";
      for (size_t i = 0; i < p.axes.size(); ++i) os << (i ? "," : "") << p.axes[i];
      os << "]";
    }
    os << "|)^" << p.exponent;
    first = false;
  }
  for (size_t i = 0; i < tables_.size(); ++i) {
    os << (first ? "" : "*") << "table";
    first = false;
  }
  return os.str();
}

// --- norms ------------------------------------------------------------------

double lp_combine(std::span<const double> magnitudes, double p, double measure) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : magnitudes) m = std::max(m, v);
    return m;
  }
  // Scale by the max to keep |v|^p representable.
  double scale = 0.0;
  for (double v : magnitudes) scale = std::max(scale, v);
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double v : magnitudes) s += std::pow(v / scale, p);
  return scale * std::pow(s * measure, 1.0 / p);
}

namespace {

void check_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw InvalidArgument(std::string(what) + ": exponent must lie in [1, inf]");
}

// Mixed norm of |values| laid out with the inner block as the leading axes.
double mixed_norm(const Eigen::ArrayXd& mag, Index inner_size, Index outer_size, double p_inner,
                  double p_outer, double inner_measure, double outer_measure, bool inner_leading) {
  std::vector<double> inner(inner_size);
  std::vector<double> outer(outer_size);
  for (Index o = 0; o < outer_size; ++o) {
    for (Index i = 0; i < inner_size; ++i) {
      inner[i] = inner_leading ? mag[i * outer_size + o] : mag[o * inner_size + i];
    }
    outer[o] = lp_combine(inner, p_inner, inner_measure);
  }
  return lp_combine(outer, p_outer, outer_measure);
}

}  // namespace

std::string describe(const SpaceSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LpSpec>) {
          os << "L^" << s.p << "_w, w=" << s.w.describe();
        } else if constexpr (std::is_same_v<T, MixedLpqSpec>) {
          os << "L^{" << s.p_inner << "," << s.p_outer << "}_w, inner_dims=" << s.inner_dims
             << ", w=" << s.w.describe();
        } else if constexpr (std::is_same_v<T, FourierLpSpec>) {
          os << "FL^" << s.p;
        } else if constexpr (std::is_same_v<T, C0wSpec>) {
          os << "C0_w, w=" << s.w.describe();
        } else {
          os << "L^" << s.p_outer << "_w(FL^" << s.p_inner << "), outer_dims=" << s.outer_dims
             << ", w=" << s.w.describe();
        }
      },
      spec);
  return os.str();
}

void validate(const SpaceSpec& spec, const Grid& grid) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LpSpec>) {
          check_exponent(s.p, "LpSpec");
        } else if constexpr (std::is_same_v<T, MixedLpqSpec>) {
          check_exponent(s.p_inner, "MixedLpqSpec");
          check_exponent(s.p_outer, "MixedLpqSpec");
          if (s.inner_dims <= 0 || s.inner_dims >= grid.dim()) {
            throw InvalidArgument("MixedLpqSpec: split " + std::to_string(s.inner_dims) + "+" +
                                  std::to_string(grid.dim() - s.inner_dims) +
                                  " does not match grid dimension " +
                                  std::to_string(grid.dim()));
          }
        } else if constexpr (std::is_same_v<T, FourierLpSpec>) {
          check_exponent(s.p, "FourierLpSpec");
        } else if constexpr (std::is_same_v<T, C0wSpec>) {
        } else {
          check_exponent(s.p_inner, "FourierMixedSpec");
          check_exponent(s.p_outer, "FourierMixedSpec");
          if (s.outer_dims <= 0 || s.outer_dims >= grid.dim()) {
            throw InvalidArgument("FourierMixedSpec: split does not match grid dimension");
          }
        }
      },
      spec);
}

double space_norm(const SampledSignal& f, const SpaceSpec& spec) {
  const Grid& grid = f.grid();
  validate(spec, grid);
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LpSpec>) {
          const Eigen::ArrayXd mag = f.values().array().abs() * s.w.evaluate(grid);
          return lp_combine({mag.data(), static_cast<size_t>(mag.size())}, s.p,
                            grid.cell_volume());
        } else if constexpr (std::is_same_v<T, C0wSpec>) {
          const Eigen::ArrayXd mag = f.values().array().abs() * s.w.evaluate(grid);
          return mag.size() ? mag.maxCoeff() : 0.0;
        } else if constexpr (std::is_same_v<T, MixedLpqSpec>) {
          const Grid inner = grid.block(0, s.inner_dims);
          const Grid outer = grid.block(s.inner_dims, grid.dim() - s.inner_dims);
          const Eigen::ArrayXd mag = f.values().array().abs() * s.w.evaluate(grid);
          return mixed_norm(mag, inner.size(), outer.size(), s.p_inner, s.p_outer,
                            inner.cell_volume(), outer.cell_volume(), true);
        } else if constexpr (std::is_same_v<T, FourierLpSpec>) {
          const SampledSignal g = inverse_fourier(f);
          const Eigen::ArrayXd mag = g.values().array().abs();
          return lp_combine({mag.data(), static_cast<size_t>(mag.size())}, s.p,
                            g.grid().cell_volume());
        } else {
          const Grid outer = grid.block(0, s.outer_dims);
          const Grid inner_freq = grid.block(s.outer_dims, grid.dim() - s.outer_dims);
          Eigen::VectorXcd v = f.values();
          dft_axes(v, grid.dims(), s.outer_dims, grid.dim() - s.outer_dims, false);
          v *= inner_freq.cell_volume();
          const double inner_measure = inner_freq.dual().cell_volume();
          Eigen::ArrayXd mag = v.array().abs();
          if (!s.w.is_one()) {
            for (Index o = 0; o < outer.size(); ++o) {
              Eigen::VectorXd x = Eigen::VectorXd::Zero(grid.dim());
              x.head(s.outer_dims) = outer.centered_point(o);
              mag.segment(o * inner_freq.size(), inner_freq.size()) *= s.w.at(x);
            }
          }
          return mixed_norm(mag, inner_freq.size(), outer.size(), s.p_inner, s.p_outer,
                            inner_measure, outer.cell_volume(), false);
        }
      },
      spec);
}

}  // namespace twg
