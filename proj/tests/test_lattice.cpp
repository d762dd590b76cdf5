#include <gtest/gtest.h>

#include <set>

#include "twistgabor/lattice.hpp"

namespace twg {
namespace {

TEST(Lattice, VolumeAndDual) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.5, 0.0, 2.0;
  const Lattice lat(a);
  EXPECT_DOUBLE_EQ(lat.volume(), 2.0);
  EXPECT_FALSE(lat.is_diagonal());
  const Lattice d = lat.dual();
  EXPECT_NEAR(d.volume(), 0.5, 1e-15);
  // <A m, A^{-T} n> is an integer for all m, n.
  const Eigen::MatrixXd pairing = a.transpose() * d.generator();
  EXPECT_LT((pairing - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-14);
}

TEST(Lattice, RejectsSingularGenerator) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 2.0, 2.0, 4.0;
  EXPECT_THROW(Lattice{a}, InvalidArgument);
}

TEST(Lattice, Parse) {
  const Lattice d = Lattice::parse("diag:0.5,2");
  EXPECT_TRUE(d.is_diagonal());
  EXPECT_DOUBLE_EQ(d.generator()(1, 1), 2.0);
  const Lattice m = Lattice::parse("mat:1,0.5;0,1");
  EXPECT_DOUBLE_EQ(m.generator()(0, 1), 0.5);
  EXPECT_THROW(Lattice::parse("diag:"), InvalidArgument);
  EXPECT_THROW(Lattice::parse("mat:1,2;3"), InvalidArgument);
  EXPECT_THROW(Lattice::parse("hex:1"), InvalidArgument);
  EXPECT_THROW(Lattice::parse("diag:1,x"), InvalidArgument);
}

TEST(Lattice, ProductIsBlockDiagonal) {
  const Lattice p = product(Lattice::diagonal({0.5}), Lattice::parse("mat:1,1;0,1"));
  EXPECT_EQ(p.dim(), 3);
  EXPECT_DOUBLE_EQ(p.volume(), 0.5);
  EXPECT_DOUBLE_EQ(p.generator()(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(p.generator()(0, 1), 0.0);
}

TEST(Twist, StandardForm) {
  const MatrixB b = standard_twist(2);
  ASSERT_EQ(b.rows(), 4);
  EXPECT_TRUE(is_standard_twist(b));
  EXPECT_DOUBLE_EQ(b(2, 0), 1.0);
  EXPECT_DOUBLE_EQ(b(3, 1), 1.0);
  EXPECT_DOUBLE_EQ(b.sum(), 2.0);
  EXPECT_FALSE(is_standard_twist(zero_twist(4)));
}

TEST(Enumerate, DiagonalCountAndCoordinates) {
  const Grid g({8.0, 4.0}, {16, 8});
  const Lattice lat = Lattice::diagonal({0.5, 2.0});
  const auto pts = enumerate(lat, g);
  ASSERT_EQ(pts.size(), 32u);
  std::set<Index> flats;
  for (const auto& p : pts) {
    flats.insert(p.flat);
    const Eigen::VectorXd back = lat.generator() *
        Eigen::Vector2d(static_cast<double>(p.coords[0]), static_cast<double>(p.coords[1]));
    EXPECT_LT((back - p.centered).norm(), 1e-12);
    EXPECT_EQ(find_point(pts, p.flat), &p - pts.data());
  }
  EXPECT_EQ(flats.size(), pts.size());
  EXPECT_LT(find_point(pts, 1), 0);
}

TEST(Enumerate, ShearedLattice) {
  const Grid g({4.0, 4.0}, {8, 8});
  const Lattice lat = Lattice::parse("mat:1,0.5;0,1");
  const auto pts = enumerate(lat, g);
  ASSERT_EQ(pts.size(), 16u);
  for (const auto& p : pts) {
    const Eigen::VectorXd m = lat.coordinates(p.position);
    EXPECT_NEAR(m[0], std::round(m[0]), 1e-12);
    EXPECT_NEAR(m[1], std::round(m[1]), 1e-12);
  }
}

TEST(Enumerate, AlignmentFailures) {
  const Grid g({4.0}, {8});
  EXPECT_THROW(enumerate(Lattice::diagonal({0.3}), g), AlignmentError);  // not on the grid
  EXPECT_THROW(enumerate(Lattice::diagonal({1.5}), g), AlignmentError);  // not periodic
  EXPECT_THROW(enumerate(Lattice::diagonal({1.0, 1.0}), g), InvalidArgument);
}

// Translates of the separation box by distinct lattice points are disjoint.
void expect_disjoint_translates(const Lattice& lat) {
  const Box box = separation_box(lat);
  const int n = lat.dim();
  const int k = 4;
  MultiIndex m(n, -k);
  while (true) {
    bool zero = true;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      zero = zero && m[j] == 0;
      v += static_cast<double>(m[j]) * lat.generator().col(j);
    }
    if (!zero) {
      bool separated = false;
      for (int j = 0; j < n; ++j) separated = separated || std::abs(v[j]) >= 2 * box.half_widths[j] - 1e-12;
      EXPECT_TRUE(separated) << "lattice point overlaps: " << v.transpose();
    }
    int j = 0;
    while (j < n && m[j] == k) m[j++] = -k;
    if (j == n) break;
    ++m[j];
  }
}

TEST(SeparationBox, DiagonalAndSheared) {
  const Box d = separation_box(Lattice::diagonal({0.5, 2.0}));
  EXPECT_DOUBLE_EQ(d.half_widths[0], 0.25);
  EXPECT_DOUBLE_EQ(d.half_widths[1], 1.0);
  EXPECT_TRUE(d.contains(Eigen::Vector2d(0.2, -0.9)));
  EXPECT_FALSE(d.contains(Eigen::Vector2d(0.25, 0.0)));
  expect_disjoint_translates(Lattice::diagonal({0.5, 2.0}));
  expect_disjoint_translates(Lattice::parse("mat:1,0.5;0,1"));
  expect_disjoint_translates(Lattice::parse("mat:1,0.9;0.2,0.7"));
  const Box s = separation_box(Lattice::parse("mat:1,0.5;0,1"));
  EXPECT_GT(s.half_widths.minCoeff(), 0.0);
}

}  // namespace
}  // namespace twg
