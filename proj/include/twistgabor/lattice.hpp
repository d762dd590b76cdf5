#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "twistgabor/grid.hpp"

namespace twg {

/// Real matrix used in twisted translations; square, of the grid dimension.
using MatrixB = Eigen::MatrixXd;

MatrixB zero_twist(int dim);
/// The 2n x 2n block matrix [[0, 0], [I, 0]] acting on phase space (x, xi).
MatrixB standard_twist(int n);
bool is_standard_twist(const MatrixB& b);

/// Lambda = A Z^n, columns of A generate.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(Eigen::MatrixXd generator);
  static Lattice diagonal(const std::vector<double>& steps);
  /// "diag:a1,a2,..." or "mat:r11,r12;r21,r22" (rows separated by ';').
  static Lattice parse(const std::string& text);

  int dim() const { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXd& generator() const { return a_; }
  bool is_diagonal() const;

  /// (A^t)^{-1} Z^n.
  Lattice dual() const;
  /// |det A|.
  double volume() const;
  /// Lattice coordinates m with A m = x; no rounding.
  Eigen::VectorXd coordinates(const Eigen::VectorXd& x) const;

  std::string describe() const;

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd inv_;
};

/// Block-diagonal lattice a x b.
Lattice product(const Lattice& a, const Lattice& b);

struct LatticePoint {
  Index flat = 0;            // sample index on the grid
  MultiIndex index;          // per-axis grid index
  Eigen::VectorXd position;  // canonical point in [0, L)
  Eigen::VectorXd centered;  // torus-minimal point
  MultiIndex coords;         // m with A m = centered
};

/// All points of Lambda in one torus period, sorted by flat index. Throws
/// AlignmentError when Lambda does not land on the grid or is not periodic
/// with the torus.
std::vector<LatticePoint> enumerate(const Lattice& lattice, const Grid& grid);

/// Position of `flat` within `points` or -1.
Index find_point(const std::vector<LatticePoint>& points, Index flat);

/// Open box prod (-h_j, h_j) around the origin whose Lambda-translates are
/// pairwise disjoint.
struct Box {
  Eigen::VectorXd half_widths;
  bool contains(const Eigen::VectorXd& x) const;
};

Box separation_box(const Lattice& lattice);

}  // namespace twg
