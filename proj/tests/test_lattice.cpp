#include <gtest/gtest.h>

#include "mukaikit/lattice.hpp"
#include "support/generators.hpp"

using namespace mukaikit;
using mukaikit::testing::Rng;

namespace {
LatticeVector vec(const LatticePtr &l, std::initializer_list<long> xs) {
  return LatticeVector::from_integers(l, std::vector<Integer>(xs.begin(), xs.end()));
}
} // namespace

TEST(StandardLattice, HyperbolicPlane) {
  auto u = hyperbolic_plane();
  EXPECT_EQ(u->gram(), (IntMatrix{{0, 1}, {1, 0}}));
  EXPECT_EQ(u->signature(), (Signature{1, 0, 1}));
}

TEST(StandardLattice, K3AndMukaiLattices) {
  auto k3 = k3_lattice();
  EXPECT_EQ(k3->rank(), 22u);
  EXPECT_EQ(k3->signature(), (Signature{3, 0, 19}));
  EXPECT_EQ(abs(k3->determinant()), 1);
  auto mk = mukai_lattice();
  EXPECT_EQ(mk->rank(), 24u);
  EXPECT_EQ(mk->signature(), (Signature{4, 0, 20}));
  EXPECT_TRUE(e8_minus()->gram().is_symmetric());
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(e8_minus()->gram()(i, i), -2);
}

TEST(StandardLattice, DirectSumIsBlockDiagonal) {
  auto l = direct_sum({hyperbolic_plane(), diagonal_lattice({Integer(-10)})});
  EXPECT_EQ(l->gram(), (IntMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, -10}}));
  EXPECT_THROW(make_lattice(IntMatrix{{0, 1}, {2, 0}}), invalid_input);
}

TEST(Pairing, Examples) {
  auto u = hyperbolic_plane();
  EXPECT_EQ(pairing(vec(u, {1, 0}), vec(u, {0, 1})), 1);
  auto l = diagonal_lattice({Integer(-10)});
  EXPECT_EQ(square(vec(l, {1})), -10);
  auto d = diagonal_lattice({Integer(2), Integer(-2)});
  EXPECT_EQ(pairing(vec(d, {1, 1}), vec(d, {1, -1})), 4);
}

TEST(Pairing, LatticeMismatchRejected) {
  auto a = diagonal_lattice({Integer(2)});
  auto b = diagonal_lattice({Integer(-2)});
  EXPECT_THROW(pairing(vec(a, {1}), vec(b, {1})), invalid_input);
  EXPECT_THROW(pairing(vec(a, {1}), vec(hyperbolic_plane(), {1, 0})), invalid_input);
}

TEST(Pairing, Symmetric) {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    auto l = mukaikit::testing::random_even_lattice(rng, 3, 1);
    auto x = mukaikit::testing::random_rational_vector(rng, l, -6, 6);
    auto y = mukaikit::testing::random_rational_vector(rng, l, -6, 6);
    EXPECT_EQ(pairing(x, y), pairing(y, x));
  }
}

TEST(OrthogonalComplement, Examples) {
  auto u = hyperbolic_plane();
  auto c = orthogonal_complement(u, {vec(u, {1, 1})});
  EXPECT_EQ(c.basis, (IntMatrix{{1, -1}}));
  EXPECT_EQ(c.lattice->gram(), (IntMatrix{{-2}}));

  auto same = orthogonal_complement(u, {});
  EXPECT_EQ(same.basis, IntMatrix::identity(2));
  EXPECT_EQ(same.lattice->gram(), u->gram());
}

TEST(OrthogonalComplement, MukaiVectorWithSquareTwo) {
  auto mk = mukai_lattice();
  std::vector<Integer> coords(24);
  coords[22] = 1;
  coords[23] = 1; // e + f in the last U summand, square 2
  auto v = LatticeVector::from_integers(mk, coords);
  ASSERT_EQ(square(v), 2);
  auto c = orthogonal_complement(mk, {v});
  EXPECT_EQ(c.lattice->rank(), 23u);
  EXPECT_EQ(c.lattice->signature(), (Signature{3, 0, 20}));
  EXPECT_EQ(discriminant_group(*c.lattice), std::vector<Integer>{Integer(2)});
}

TEST(OrthogonalComplement, RandomComplementsAreSaturatedAndOrthogonal) {
  Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    auto n = static_cast<std::size_t>(mukaikit::testing::uniform(rng, 2, 5));
    auto l = mukaikit::testing::random_even_lattice(rng, n, 1);
    auto k = static_cast<std::size_t>(mukaikit::testing::uniform(rng, 1, static_cast<long>(n) - 1));
    std::vector<LatticeVector> vs;
    IntMatrix span(k, n);
    for (std::size_t i = 0; i < k; ++i) {
      vs.push_back(mukaikit::testing::random_vector(rng, l, -4, 4));
      for (std::size_t j = 0; j < n; ++j) span(i, j) = vs.back().integer_coords()[j];
    }
    if (rank(span) != k) continue;
    auto c = orthogonal_complement(l, vs);
    EXPECT_EQ(rank(span) + c.lattice->rank(), n);
    for (const auto &d : smith_normal_form(c.basis).diagonal) EXPECT_EQ(d, 1);
    for (std::size_t i = 0; i < c.lattice->rank(); ++i) {
      auto x = c.include(LatticeVector::basis(c.lattice, i));
      for (const auto &v : vs) EXPECT_EQ(pairing(x, v), 0);
    }
  }
}

TEST(DiscriminantGroup, Examples) {
  EXPECT_EQ(discriminant_group(*diagonal_lattice({Integer(-2)})), std::vector<Integer>{Integer(2)});
  EXPECT_TRUE(discriminant_group(*hyperbolic_plane()).empty());
  const long n = 5;
  EXPECT_EQ(discriminant_group(*diagonal_lattice({Integer(-2 * n + 2)})), std::vector<Integer>{Integer(8)});
  EXPECT_EQ(discriminant_order(*diagonal_lattice({Integer(2), Integer(-6)})), 12);
  EXPECT_THROW(discriminant_group(*make_lattice(IntMatrix(1, 1))), invalid_input);
}

TEST(Content, Examples) {
  auto l3 = diagonal_lattice({Integer(1), Integer(1), Integer(1)});
  auto l2 = hyperbolic_plane();
  EXPECT_EQ(content(vec(l3, {2, 4, 6})), 2);
  EXPECT_EQ(content(vec(l2, {1, 0})), 1);
  EXPECT_EQ(content(vec(l2, {-4, 6})), 2);
  EXPECT_THROW(content(LatticeVector::zero(l2)), invalid_input);
  EXPECT_THROW(content(LatticeVector(l2, {make_rational(1, 2), Rational(0)})), invalid_input);
}

TEST(Content, InvariantUnderUnimodularChange) {
  Rng rng(23);
  auto l = diagonal_lattice(std::vector<Integer>(4, Integer(1)));
  for (int trial = 0; trial < 200; ++trial) {
    auto x = mukaikit::testing::random_integers(rng, 4, -8, 8);
    if (std::all_of(x.begin(), x.end(), [](const Integer &a) { return a == 0; })) continue;
    IntMatrix u = mukaikit::testing::random_unimodular(rng, 4);
    auto y = u * std::span<const Integer>(x);
    EXPECT_EQ(content(LatticeVector::from_integers(l, x)), content(LatticeVector::from_integers(l, y)));
  }
}
