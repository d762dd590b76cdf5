#include "twistgabor/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <Eigen/LU>

#include "twistgabor/signal_io.hpp"

namespace twg {

namespace {

constexpr double kAlignTol = 1e-9;

bool near_integer(double v, double tol = kAlignTol) {
  return std::abs(v - std::round(v)) <= tol * std::max(1.0, std::abs(v));
}

std::vector<double> parse_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("Lattice::parse: bad number '" + item + "'");
    }
  }
  return out;
}

}  // namespace

MatrixB zero_twist(int dim) { return MatrixB::Zero(dim, dim); }

MatrixB standard_twist(int n) {
  MatrixB b = MatrixB::Zero(2 * n, 2 * n);
  b.bottomLeftCorner(n, n).setIdentity();
  return b;
}

bool is_standard_twist(const MatrixB& b) {
  if (b.rows() != b.cols() || b.rows() % 2 != 0) return false;
  return b == standard_twist(static_cast<int>(b.rows() / 2));
}

Lattice::Lattice(Eigen::MatrixXd generator) : a_(std::move(generator)) {
  if (a_.rows() != a_.cols() || a_.rows() < 1) {
    throw InvalidArgument("Lattice: generator must be square");
  }
  if (!a_.allFinite()) throw InvalidArgument("Lattice: non-finite generator");
  if (std::abs(a_.determinant()) < 1e-12) {
    throw InvalidArgument("Lattice: singular generator (|det A| < 1e-12)");
  }
  inv_ = a_.inverse();
}

Lattice Lattice::diagonal(const std::vector<double>& steps) {
  Eigen::VectorXd d(static_cast<Index>(steps.size()));
  for (size_t j = 0; j < steps.size(); ++j) d[static_cast<Index>(j)] = steps[j];
  return Lattice(d.asDiagonal().toDenseMatrix());
}

Lattice Lattice::parse(const std::string& text) {
  if (text.rfind("diag:", 0) == 0) {
    const auto steps = parse_numbers(text.substr(5), ',');
    if (steps.empty()) throw InvalidArgument("Lattice::parse: empty diagonal");
    return diagonal(steps);
  }
  if (text.rfind("mat:", 0) == 0) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text.substr(4));
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_numbers(row, ','));
    const auto n = static_cast<Index>(rows.size());
    Eigen::MatrixXd a(n, n);
    for (Index i = 0; i < n; ++i) {
      if (static_cast<Index>(rows[i].size()) != n) {
        throw InvalidArgument("Lattice::parse: matrix is not square");
      }
      for (Index j = 0; j < n; ++j) a(i, j) = rows[i][j];
    }
    return Lattice(a);
  }
  throw InvalidArgument("Lattice::parse: expected 'diag:...' or 'mat:...', got '" + text + "'");
}

bool Lattice::is_diagonal() const {
  return (a_ - Eigen::MatrixXd(a_.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
}

Lattice Lattice::dual() const { return Lattice(inv_.transpose()); }

double Lattice::volume() const { return std::abs(a_.determinant()); }

Eigen::VectorXd Lattice::coordinates(const Eigen::VectorXd& x) const { return inv_ * x; }

std::string Lattice::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "mat:";
  for (Index i = 0; i < a_.rows(); ++i) {
    for (Index j = 0; j < a_.cols(); ++j) os << (j ? "," : "") << a_(i, j);
    if (i + 1 < a_.rows()) os << ";";
  }
  return os.str();
}

Lattice product(const Lattice& a, const Lattice& b) {
  const int n = a.dim() + b.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  g.topLeftCorner(a.dim(), a.dim()) = a.generator();
  g.bottomRightCorner(b.dim(), b.dim()) = b.generator();
  return Lattice(g);
}

std::vector<LatticePoint> enumerate(const Lattice& lattice, const Grid& grid) {
  const int n = grid.dim();
  if (lattice.dim() != n) {
    throw InvalidArgument("enumerate: lattice dimension " + std::to_string(lattice.dim()) +
                          " vs grid dimension " + std::to_string(n));
  }
  const Eigen::MatrixXd& a = lattice.generator();

  // Generators in grid units.
  std::vector<MultiIndex> steps(n, MultiIndex(n));
  for (int c = 0; c < n; ++c) {
    for (int j = 0; j < n; ++j) {
      const double u = a(j, c) / grid.spacing(j);
      if (!near_integer(u)) {
        throw AlignmentError("enumerate: generator column " + std::to_string(c) +
                             " is not a multiple of the grid spacing on axis " +
                             std::to_string(j));
      }
      steps[c][j] = static_cast<Index>(std::llround(u));
    }
  }
  // The torus periods must be lattice vectors.
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = grid.length(j);
    const Eigen::VectorXd m = lattice.coordinates(e);
    for (int i = 0; i < n; ++i) {
      if (!near_integer(m[i])) {
        throw AlignmentError("enumerate: period of axis " + std::to_string(j) +
                             " is not a lattice vector (lattice not periodic on the torus)");
      }
    }
  }
  const double expected = grid.volume() / lattice.volume();
  if (!near_integer(expected)) {
    throw AlignmentError("enumerate: point count prod(L)/vol = " + format_double(expected) +
                         " is not an integer");
  }

  std::vector<char> seen(static_cast<size_t>(grid.size()), 0);
  std::deque<MultiIndex> queue;
  MultiIndex origin(n, 0);
  seen[0] = 1;
  queue.push_back(origin);
  std::vector<Index> flats;
  while (!queue.empty()) {
    MultiIndex cur = std::move(queue.front());
    queue.pop_front();
    flats.push_back(grid.flatten(cur));
    for (int c = 0; c < n; ++c) {
      MultiIndex next(n);
      for (int j = 0; j < n; ++j) {
        next[j] = ((cur[j] + steps[c][j]) % grid.count(j) + grid.count(j)) % grid.count(j);
      }
      const Index f = grid.flatten(next);
      if (!seen[f]) {
        seen[f] = 1;
        queue.push_back(std::move(next));
      }
    }
  }
  if (static_cast<Index>(flats.size()) != std::llround(expected)) {
    throw AlignmentError("enumerate: found " + std::to_string(flats.size()) +
                         " points, expected " + std::to_string(std::llround(expected)));
  }
  std::sort(flats.begin(), flats.end());

  std::vector<LatticePoint> points;
  points.reserve(flats.size());
  for (Index f : flats) {
    LatticePoint p;
    p.flat = f;
    p.index = grid.unflatten(f);
    p.position = grid.point(f);
    p.centered = grid.centered_point(f);
    const Eigen::VectorXd m = lattice.coordinates(p.centered);
    p.coords.resize(n);
    for (int j = 0; j < n; ++j) p.coords[j] = static_cast<Index>(std::llround(m[j]));
    points.push_back(std::move(p));
  }
  return points;
}

Index find_point(const std::vector<LatticePoint>& points, Index flat) {
  auto it = std::lower_bound(points.begin(), points.end(), flat,
                             [](const LatticePoint& p, Index f) { return p.flat < f; });
  if (it == points.end() || it->flat != flat) return -1;
  return static_cast<Index>(it - points.begin());
}

bool Box::contains(const Eigen::VectorXd& x) const {
  for (Index j = 0; j < x.size(); ++j) {
    if (!(std::abs(x[j]) < half_widths[j])) return false;
  }
  return true;
}

Box separation_box(const Lattice& lattice) {
  const Eigen::MatrixXd& a = lattice.generator();
  const int n = lattice.dim();
  if (lattice.is_diagonal()) return Box{a.diagonal().cwiseAbs() / 2.0};

  // Cube of half-width min_{lambda != 0} |lambda|_inf / 2. Any lambda with
  // |lambda|_inf <= r has |m|_inf <= |A^{-1}|_inf r.
  double r = kInf;
  for (int c = 0; c < n; ++c) r = std::min(r, a.col(c).cwiseAbs().maxCoeff());
  const Eigen::MatrixXd inv = a.inverse();
  const double inv_norm = inv.cwiseAbs().rowwise().sum().maxCoeff();
  const Index k = static_cast<Index>(std::ceil(inv_norm * r + 1e-9));

  double shortest = r;
  MultiIndex m(n, -k);
  while (true) {
    bool zero = true;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (m[j] != 0) zero = false;
      v += static_cast<double>(m[j]) * a.col(j);
    }
    if (!zero) shortest = std::min(shortest, v.cwiseAbs().maxCoeff());
    int j = 0;
    while (j < n && m[j] == k) m[j++] = -k;
    if (j == n) break;
    ++m[j];
  }
  return Box{Eigen::VectorXd::Constant(n, shortest / 2.0)};
}

}  // namespace twg
