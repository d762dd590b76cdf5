#pragma once

#include <string>

#include "twistgabor/grid.hpp"
#include "twistgabor/lattice.hpp"

namespace twg {

/// T_x f(t) = f(t - x); x must be a multiple of the spacing on every axis.
SampledSignal translate(const SampledSignal& f, const Eigen::VectorXd& x);
/// M_xi f(t) = e^{2 pi i t.xi} f(t); xi must be a multiple of 1/L.
SampledSignal modulate(const SampledSignal& f, const Eigen::VectorXd& xi);
/// f(-t).
SampledSignal reflect(const SampledSignal& f);
/// pi(x, xi) f = M_xi T_x f.
SampledSignal time_frequency_shift(const SampledSignal& f, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& xi);

/// theta_B f(x) = e^{2 pi i Bx.x} f(x), x in [0, L).
SampledSignal chirp(const SampledSignal& f, const MatrixB& b);

/// T^B_x f(t) = f(t - x) e^{-2 pi i Bx.(t - x)}.
SampledSignal twisted_translate(const SampledSignal& f, const Eigen::VectorXd& x,
                                const MatrixB& b);

/// (f *_B g)(t) = sum_x cell f(x) T^B_x g(t); O(N^2) reference.
SampledSignal twisted_convolve_direct(const SampledSignal& f, const SampledSignal& g,
                                      const MatrixB& b);

/// f # g on a phase-space grid (time block first, B = B0), evaluated slice by
/// slice in the frequency domain of the second block; O(M_t^2 M_xi).
SampledSignal twisted_convolve_fast(const SampledSignal& f, const SampledSignal& g);

/// |LHS - RHS| / (|LHS| + |RHS| + eps) for
///   int (f *_B g) h  =  int f (h *_{-B} theta_B(g reflected)).
double twisted_pairing_identity_check(const SampledSignal& f, const SampledSignal& g,
                                      const SampledSignal& h, const MatrixB& b);

struct ChirpCompatibility {
  bool shift_aligned = false;   // B (D Z^n) in (1/L) Z^n
  bool chirp_periodic = false;  // theta_B is L-periodic on the grid
  std::string message;
};

ChirpCompatibility chirp_compatibility(const MatrixB& b, const Grid& grid);

/// Throws AlignmentError unless every grid shift x has Bx on the frequency
/// grid.
void require_shift_aligned(const MatrixB& b, const Grid& grid, const char* what);

}  // namespace twg
