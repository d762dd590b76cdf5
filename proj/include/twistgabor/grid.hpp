#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "twistgabor/fft.hpp"

namespace twg {

// Precondition violations: bad shapes, grid mismatches, invalid parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A shift, modulation or lattice that does not land on the sample grid.
class AlignmentError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A numerical procedure that could not reach its requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using MultiIndex = std::vector<Index>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kMaxGridDim = 4;
inline constexpr double kDefaultMemBudgetMb = 2048.0;

/// Periodic sampling grid: the torus prod_j R / L_j Z sampled with M_j points
/// per axis. Sample k sits at x_k = (k_1 D_1, ..., k_n D_n), D_j = L_j / M_j,
/// and values are stored in row-major order of k.
class Grid {
 public:
  Grid() = default;
  Grid(std::vector<double> lengths, std::vector<Index> counts,
       double mem_budget_mb = kDefaultMemBudgetMb);

  static Grid uniform(int dim, double length, Index count) {
    return Grid(std::vector<double>(dim, length), std::vector<Index>(dim, count));
  }

  int dim() const { return static_cast<int>(lengths_.size()); }
  double length(int j) const { return lengths_[j]; }
  Index count(int j) const { return counts_[j]; }
  double spacing(int j) const { return lengths_[j] / static_cast<double>(counts_[j]); }
  const std::vector<double>& lengths() const { return lengths_; }
  const std::vector<Index>& counts() const { return counts_; }
  std::span<const Index> dims() const { return counts_; }

  Index size() const { return size_; }
  /// Riemann-sum measure prod_j D_j.
  double cell_volume() const;
  /// prod_j L_j.
  double volume() const;

  /// Frequency grid of the DFT: period M_j / L_j, spacing 1 / L_j.
  Grid dual() const;
  /// Time grid followed by its frequency grid (dimension 2n).
  Grid phase_space() const;
  /// Sub-grid made of axes [first, first + num).
  Grid block(int first, int num) const;

  bool is_phase_space() const;

  MultiIndex unflatten(Index k) const;
  Index flatten(std::span<const Index> idx) const;
  /// Wraps each component into [0, M_j) and flattens.
  Index flatten_wrapped(std::span<const Index> idx) const;

  /// Canonical representative in [0, L)^n.
  Eigen::VectorXd point(Index k) const;
  /// Torus-minimal representative in [-L/2, L/2)^n.
  Eigen::VectorXd centered_point(Index k) const;

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

  std::string describe() const;

 private:
  std::vector<double> lengths_;
  std::vector<Index> counts_;
  Index size_ = 0;
};

Grid concat(const Grid& a, const Grid& b);

/// Complex samples of a function on a Grid.
class SampledSignal {
 public:
  SampledSignal() = default;
  explicit SampledSignal(Grid grid);  // zeros
  SampledSignal(Grid grid, Eigen::VectorXcd values);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXcd& values() const { return values_; }
  Eigen::VectorXcd& mutable_values() { return values_; }
  Complex operator[](Index k) const { return values_[k]; }
  Complex& operator[](Index k) { return values_[k]; }
  Index size() const { return values_.size(); }

  SampledSignal& operator+=(const SampledSignal& other);
  SampledSignal& operator-=(const SampledSignal& other);
  SampledSignal& operator*=(Complex s);

 private:
  Grid grid_;
  Eigen::VectorXcd values_;
};

SampledSignal operator+(SampledSignal a, const SampledSignal& b);
SampledSignal operator-(SampledSignal a, const SampledSignal& b);
SampledSignal operator*(Complex s, SampledSignal a);
/// Pointwise product.
SampledSignal multiply(const SampledSignal& a, const SampledSignal& b);
SampledSignal conjugate(const SampledSignal& a);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

// ---------------------------------------------------------------------------
// Sampling rules

using PointRule = std::function<Complex(const Eigen::VectorXd&)>;

/// values[k] = rule(x_k), with x_k the torus-minimal (centered) representative.
SampledSignal sample_function(const Grid& grid, const PointRule& rule);

namespace rules {
/// 2^{n/4} exp(-pi x.x), unit L2 norm on R^n.
PointRule gaussian(int dim);
PointRule constant(Complex value);
/// Smooth bump exp(1 - 1/(1 - |t|^2)) per axis, t_j = (x_j - c_j) / r_j,
/// supported in the open box prod (c_j - r_j, c_j + r_j), peak 1.
PointRule bump(Eigen::VectorXd center, Eigen::VectorXd radius);
PointRule bump(int dim, double radius);
/// Tensor product of triangles (1 - |x_j| / w)_+.
PointRule hat(int dim, double width);
/// Tensor product of centered cubic B-splines of support (-2w, 2w).
PointRule cubic_bspline(int dim, double width);
}  // namespace rules

/// i.i.d. standard complex Gaussian samples (E|z|^2 = 1).
SampledSignal random_signal(const Grid& grid, std::mt19937_64& rng);
/// Zero except 1 / cell_volume at sample 0: integrates to one.
SampledSignal discrete_delta(const Grid& grid);

// ---------------------------------------------------------------------------
// Inner products, Fourier transform

/// cell_volume * sum_k f[k] conj(g[k]).
Complex inner_product(const SampledSignal& f, const SampledSignal& g);
double l2_norm(const SampledSignal& f);

/// f^(xi_m) = (prod D_j) sum_k f(x_k) e^{-2 pi i x_k . xi_m}, returned on
/// grid().dual(); sample m of the result sits at frequency m / L (mod M / L).
SampledSignal fourier(const SampledSignal& f);
/// Inverse of `fourier`: input on a frequency grid G', output on G'.dual().
SampledSignal inverse_fourier(const SampledSignal& F);

// ---------------------------------------------------------------------------
// Weights and norms

/// Positive weight w = product of factors. A polynomial factor is
/// (1 + |x_S|)^s where x_S is the torus-minimal point restricted to the axes
/// S (all axes when S is empty).
class Weight {
 public:
  struct Polynomial {
    double exponent;
    std::vector<int> axes;
  };
  struct Tabulated {
    Grid grid;
    Eigen::VectorXd values;
  };

  Weight() = default;  // constant one
  static Weight one() { return {}; }
  static Weight polynomial(double exponent, std::vector<int> axes = {});
  static Weight tabulated(Grid grid, Eigen::VectorXd values);

  bool is_one() const { return polys_.empty() && tables_.empty(); }
  /// Weight at an arbitrary point given in torus-minimal coordinates.
  double at(const Eigen::VectorXd& x) const;
  /// Weight at every sample of `grid`.
  Eigen::ArrayXd evaluate(const Grid& grid) const;

  friend Weight operator*(const Weight& a, const Weight& b);

  std::string describe() const;

 private:
  std::vector<Polynomial> polys_;
  std::vector<Tabulated> tables_;
};

/// ||f w||_{L^p}.
struct LpSpec {
  double p = 2.0;
  Weight w;
};

/// ||f w||_{L^{p_inner, p_outer}}: inner exponent over the first `inner_dims`
/// axes, outer exponent over the remaining ones.
struct MixedLpqSpec {
  double p_inner = 2.0;
  double p_outer = 2.0;
  Weight w;
  int inner_dims = 1;
};

/// ||F^{-1} f||_{L^p} over one period of the frequency torus.
struct FourierLpSpec {
  double p = 1.0;
};

/// Weighted sup norm; on a finite grid identical to L^inf_w.
struct C0wSpec {
  Weight w;
};

/// L^{p_outer}_w over the first `outer_dims` axes of the norm
/// ||F^{-1}_2 f(x, .)||_{L^{p_inner}}, the inverse transform acting on the
/// remaining axes. With f = V_psi g this is the L^{p_outer}_w(FL^{p_inner})
/// norm; w is evaluated at (x, 0).
struct FourierMixedSpec {
  double p_inner = 1.0;
  double p_outer = 1.0;
  Weight w;
  int outer_dims = 1;
};

using SpaceSpec = std::variant<LpSpec, MixedLpqSpec, FourierLpSpec, C0wSpec, FourierMixedSpec>;

std::string describe(const SpaceSpec& spec);
void validate(const SpaceSpec& spec, const Grid& grid);

/// Riemann-sum norm of f in the given space.
double space_norm(const SampledSignal& f, const SpaceSpec& spec);

/// (sum |v_i|^p)^{1/p} with v already scaled; p = inf gives max.
double lp_combine(std::span<const double> magnitudes, double p, double measure);

}  // namespace twg
