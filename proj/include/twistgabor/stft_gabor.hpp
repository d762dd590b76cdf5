#pragma once

#include <iosfwd>
#include <memory>
#include <random>
#include <vector>

#include "twistgabor/grid.hpp"
#include "twistgabor/lattice.hpp"

namespace twg {

/// V_psi f(x, xi) = (f, M_xi T_x psi) on time_grid.phase_space(); one FFT
/// per time shift.
SampledSignal stft_full(const SampledSignal& f, const SampledSignal& psi);

/// |(V_psi f, V_gamma phi) - (f, phi)(gamma, psi)| / (|f| |phi| |psi| |gamma|).
double orthogonality_residual(const SampledSignal& f, const SampledSignal& phi,
                              const SampledSignal& psi, const SampledSignal& gamma);

/// |V_psi(pi(z) f) - T^{B0}_z V_psi f|_inf / |V_psi f|_inf; z = (x, xi).
double covariance_residual(const SampledSignal& f, const SampledSignal& psi,
                           const Eigen::VectorXd& z);

/// |V_phi f - V_psi f # V_phi gamma / (gamma, psi)|_inf / |V_phi f|_inf.
double reproducing_check(const SampledSignal& f, const SampledSignal& psi,
                         const SampledSignal& gamma, const SampledSignal& phi);

/// Finitely supported coefficients on the points of a lattice in one period
/// of a grid; values[i] belongs to (*points)[i].
struct DiscreteCoeffs {
  Lattice lattice;
  Grid grid;
  std::shared_ptr<const std::vector<LatticePoint>> points;
  Eigen::VectorXcd values;

  static DiscreteCoeffs zeros(const Lattice& lattice, const Grid& grid);
  static DiscreteCoeffs zeros(const Lattice& lattice, const Grid& grid,
                              std::shared_ptr<const std::vector<LatticePoint>> points);
  DiscreteCoeffs with_values(Eigen::VectorXcd v) const;
  Index size() const { return values.size(); }
  /// Position of the point with lattice coordinates m, or -1.
  Index find_coords(std::span<const Index> m) const;
};

/// i.i.d. standard complex Gaussian coefficients.
DiscreteCoeffs random_coeffs(const DiscreteCoeffs& shape, std::mt19937_64& rng);

/// CSV "m_0,...,m_{d-1},re,im" keyed by lattice coordinates.
void write_csv(std::ostream& os, const DiscreteCoeffs& c);
/// Reads the CSV layout above; unknown coordinates are an error.
DiscreteCoeffs read_csv(std::istream& is, const Lattice& lattice, const Grid& grid);

class GaborSystem {
 public:
  struct TimeGroup {
    Index time_flat;               // index on the time grid
    Eigen::VectorXd x;             // canonical time shift
    std::vector<Index> point_ids;  // into points()
    std::vector<Index> freq_flat;  // index on the frequency grid
  };

  /// `lattice` lives on window.grid().phase_space().
  GaborSystem(SampledSignal window, Lattice lattice);

  const SampledSignal& window() const { return window_; }
  const Lattice& lattice() const { return lattice_; }
  const Grid& time_grid() const { return window_.grid(); }
  const Grid& phase_grid() const { return phase_grid_; }
  const std::vector<LatticePoint>& points() const { return *points_; }
  const std::shared_ptr<const std::vector<LatticePoint>>& shared_points() const { return points_; }
  const std::vector<TimeGroup>& groups() const { return groups_; }

  GaborSystem with_window(SampledSignal window) const;
  DiscreteCoeffs zero_coeffs() const;

 private:
  SampledSignal window_;
  Lattice lattice_;
  Grid phase_grid_;
  std::shared_ptr<const std::vector<LatticePoint>> points_;
  std::vector<TimeGroup> groups_;
};

/// C_psi f = (V_psi f(lambda)).
DiscreteCoeffs analysis(const SampledSignal& f, const GaborSystem& sys);
/// D_psi c = sum c_lambda pi(lambda) psi.
SampledSignal synthesis(const DiscreteCoeffs& c, const GaborSystem& sys);
/// S_{psi, gamma} f = D_gamma C_psi f.
SampledSignal frame_apply(const SampledSignal& f, const GaborSystem& sys_psi,
                          const GaborSystem& sys_gamma);
inline SampledSignal frame_apply(const SampledSignal& f, const GaborSystem& sys) {
  return frame_apply(f, sys, sys);
}

struct CgResult {
  SampledSignal x;
  int iterations = 0;
  double residual = 0.0;  // |S x - rhs| / |rhs|
  bool converged = false;
};

/// Conjugate gradients for S_{psi,psi} x = rhs.
CgResult solve_frame(const GaborSystem& sys, const SampledSignal& rhs, double tol = 1e-10,
                     int max_iter = 500);

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  int upper_iterations = 0;
  int lower_iterations = 0;
};

/// Upper bound by power iteration, lower bound by inverse iteration with CG
/// inner solves. Throws NumericalError when CG stalls (A is numerically 0).
FrameBounds frame_bounds(const GaborSystem& sys, int iters = 2000, double tol = 1e-8);

/// All eigenvalues of S_{psi,psi}, ascending, from the dense matrix.
/// Grid size must be at most 4096.
Eigen::VectorXd frame_spectrum_dense(const GaborSystem& sys);

/// gamma = S^{-1} psi.
SampledSignal canonical_dual(const GaborSystem& sys, double tol = 1e-10);

struct DualPairReport {
  bool pass = false;
  double max_error = 0.0;        // over S_{psi,gamma} probes
  double symmetric_error = 0.0;  // over S_{gamma,psi} probes
};

/// Probes S_{psi,gamma} and S_{gamma,psi} with random signals and deltas.
DualPairReport check_dual_pair(const SampledSignal& psi, const SampledSignal& gamma,
                               const Lattice& lattice, double tol = 1e-6, int random_probes = 8,
                               std::uint64_t seed = 1);

/// |f - sum V_psi f(lambda) pi(lambda) gamma|_2 / |f|_2.
double reconstruction_error(const SampledSignal& f, const GaborSystem& sys_psi,
                            const GaborSystem& sys_gamma);

}  // namespace twg
