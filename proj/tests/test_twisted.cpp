#include <gtest/gtest.h>

#include "mukaikit/twisted.hpp"
#include "support/generators.hpp"

using namespace mukaikit;
using mukaikit::testing::Rng;

namespace {

Rational q(long n, long d = 1) { return make_rational(Integer(n), Integer(d)); }

struct RankOne {
  LatticePtr ns = diagonal_lattice({Integer(-10)});
  LatticeVector L = LatticeVector::basis(ns, 0);
  LatticeVector zero = LatticeVector::zero(ns);
};

} // namespace

TEST(ChE, Examples) {
  RankOne f;
  EXPECT_EQ(ch_E({2, f.L, 1}, {2, 0}), MukaiVector(2, f.L / 2, q(1, 2)));
  EXPECT_EQ(ch_E({2, f.zero, 4}, {2, 4}), MukaiVector(2, f.zero, 1));
  EXPECT_EQ(ch_E({3, f.L * 2, -7}, TwistData::trivial()), MukaiVector(3, f.L * 2, -7));
}

TEST(VE, Examples) {
  RankOne f;
  TwistedSheafData sheaf{2, f.L, 1};
  TwistData e{2, 0};
  EXPECT_EQ(v_E(sheaf, e), MukaiVector(2, f.L / 2, q(5, 2)));
  EXPECT_EQ(mukai_square(v_E(sheaf, e)), q(-25, 2));
  EXPECT_EQ(v_E_square_closed_form(sheaf, e), q(-25, 2));
  // trivial twist: v_E(F) = v(F) = (r, c1, ch2 + r)
  EXPECT_EQ(v_E({2, f.L, -4}, TwistData::trivial()), mukai_from_chern(2, f.L, -4));
}

TEST(SlopeE, Examples) {
  auto ns = diagonal_lattice({Integer(2), Integer(-2)});
  K3Model m(ns, nullptr, {}, {LatticeVector(ns, {Rational(1), Rational(0)}), LatticeVector::zero(make_lattice(IntMatrix(0, 0)))});
  auto h = LatticeVector::basis(ns, 0);
  auto omega = m.make_class({Rational(2), Rational(0)});
  EXPECT_EQ(pairing(h, omega), 4);
  EXPECT_EQ(slope_E({2, h, 0}, {2, 0}, omega), 1);
  EXPECT_EQ(slope_E({2, LatticeVector::zero(ns), 0}, {2, 0}, omega), 0);
  EXPECT_EQ(slope_E({3, h, 0}, TwistData::trivial(), omega), q(4, 3));
}

TEST(DeltaE, Examples) {
  RankOne f;
  EXPECT_EQ(delta_E({2, f.L, -4}, TwistData::trivial()), q(3, 4));
  TwistedSheafData sheaf{2, f.L, 1};
  TwistData e{2, 0};
  EXPECT_EQ(delta_E(sheaf, e), q(-9, 16));
  EXPECT_EQ(delta_E_endomorphism_route(sheaf, e), q(-9, 16));
  // F = E: ch(F⊗F^∨) = ch(E⊗E^∨)
  TwistData self{2, 4};
  TwistedSheafData as_sheaf{2, f.zero, 4};
  EXPECT_EQ(endomorphism_ch2(as_sheaf, self), 4);
  EXPECT_EQ(delta_E(as_sheaf, self), delta_from_endomorphism(2, 4));
}

TEST(WXi, Examples) {
  RankOne f;
  // w = (r, 0, r + c - ξ²/2r) recovers v = (r, ξ, r + c)
  auto minus = w_xi(MukaiVector(2, f.zero, q(-1, 2)), f.L, 2);
  EXPECT_EQ(minus.value, MukaiVector(2, f.L, -3));
  EXPECT_TRUE(minus.integral);
  auto plus = w_xi(MukaiVector(2, f.zero, q(1, 2)), f.L, 2);
  EXPECT_EQ(plus.value, MukaiVector(2, f.L, -2));
  EXPECT_EQ(untwisted_w(MukaiVector(2, f.L, -2)), MukaiVector(2, f.zero, q(1, 2)));
  EXPECT_EQ(untwisted_w(MukaiVector(2, f.L, -3)), MukaiVector(2, f.zero, q(-1, 2)));
  EXPECT_EQ(w_xi(MukaiVector(3, f.zero, q(2, 7)), f.zero, 3).value, MukaiVector(3, f.zero, q(2, 7)));
}

TEST(WXi, NonIntegralIsFlaggedNotRejected) {
  RankOne f;
  auto w = w_xi(MukaiVector(2, f.zero, 0), f.L, 2);
  EXPECT_FALSE(w.integral);
  EXPECT_EQ(w.value, MukaiVector(2, f.L, q(-5, 2)));
}

TEST(WXi, Preconditions) {
  RankOne f;
  EXPECT_THROW(w_xi(MukaiVector(2, f.L, 0), f.L, 2), invalid_input);
  EXPECT_THROW(w_xi(MukaiVector(3, f.zero, 0), f.L, 2), invalid_input);
}

TEST(ChB, Examples) {
  auto ns = diagonal_lattice({Integer(2), Integer(-2)});
  auto xi = LatticeVector::from_integers(ns, {Integer(1), Integer(3)});
  auto delta = LatticeVector(ns, {q(1, 3), q(-1, 2)});
  MukaiVector che(2, xi / 2, q(1, 2));
  TwistData zero_b(2, 0, LatticeVector::zero(ns));
  EXPECT_EQ(ch_B(che, zero_b), che);
  TwistData with_b(2, 0, delta);
  EXPECT_EQ(ch_B(che, with_b), MukaiVector(2, xi / 2 + delta * 2, q(1, 2) + pairing(delta, xi) / 2 + square(delta)));
  MukaiVector torsion(0, xi, 3);
  EXPECT_EQ(ch_B(torsion, with_b).v0(), 0);
  EXPECT_THROW(ch_B(che, TwistData(2, 0)), invalid_input);
}

TEST(TwistedSubobjectWall, WorkedInstance) {
  RankOne f;
  auto w = twisted_subobject_wall({2, f.zero, 0}, {1, f.L, 0}, TwistData::trivial());
  EXPECT_EQ(w.d, f.L * 2);
  EXPECT_EQ(w.d_square, -40);
  EXPECT_EQ(w.k, 20);
  EXPECT_EQ(w.quotient.xi, -f.L);
}

TEST(TwistedSubobjectWall, ProportionalAndUntwisted) {
  RankOne f;
  auto prop = twisted_subobject_wall({4, f.L * 2, 3}, {2, f.L, 1}, {3, 5});
  EXPECT_TRUE(prop.d.is_zero());
  EXPECT_EQ(prop.d_square, 0);
  EXPECT_EQ(prop.k, 0);
  // s = 1 gives D = r ζ - r' ξ
  auto ns = diagonal_lattice({Integer(2), Integer(-2)});
  auto h = LatticeVector::basis(ns, 0), fc = LatticeVector::basis(ns, 1);
  auto w = twisted_subobject_wall({2, h, 0}, {1, fc, 0}, TwistData::trivial());
  EXPECT_EQ(w.d, fc * 2 - h);
  EXPECT_EQ(w.d_square, -6);
  EXPECT_THROW(twisted_subobject_wall({2, h, 0}, {2, fc, 0}, TwistData::trivial()), invalid_input);
  EXPECT_THROW(twisted_subobject_wall({2, h, 0}, {0, fc, 0}, TwistData::trivial()), invalid_input);
}

TEST(TwistedProperties, VESquareClosedForm) {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    auto ns = mukaikit::testing::random_even_lattice(rng, 2, 1);
    TwistedSheafData f{mukaikit::testing::uniform(rng, 1, 6), mukaikit::testing::random_vector(rng, ns, -5, 5),
                       mukaikit::testing::random_rational(rng, -9, 9)};
    TwistData e{mukaikit::testing::uniform(rng, 1, 5), mukaikit::testing::random_rational(rng, -9, 9)};
    EXPECT_EQ(mukai_square(v_E(f, e)), v_E_square_closed_form(f, e));
    EXPECT_EQ(delta_E(f, e), delta_E_endomorphism_route(f, e));
  }
}

TEST(TwistedProperties, DeltaIndependentOfTwistingBundle) {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    auto ns = mukaikit::testing::random_even_lattice(rng, 2, 1);
    TwistedSheafData f{mukaikit::testing::uniform(rng, 1, 5), mukaikit::testing::random_vector(rng, ns, -5, 5),
                       mukaikit::testing::random_rational(rng, -9, 9)};
    TwistData e{mukaikit::testing::uniform(rng, 1, 4), mukaikit::testing::random_rational(rng, -9, 9)};
    MukaiVector ch_g(Rational(mukaikit::testing::uniform(rng, 1, 4)), mukaikit::testing::random_vector(rng, ns, -3, 3),
                     mukaikit::testing::random_rational(rng, -5, 5));
    auto [f2, e2] = twist_by_bundle(f, e, ch_g);
    EXPECT_EQ(endomorphism_ch2(f, e), endomorphism_ch2(f2, e2));
    EXPECT_EQ(delta_E(f, e), delta_E(f2, e2));
  }
}

TEST(TwistedProperties, SubobjectIdentityOnRandomSplittings) {
  Rng rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    auto ns = mukaikit::testing::random_even_lattice(rng, 3, 1);
    long r = mukaikit::testing::uniform(rng, 2, 7);
    TwistedSheafData f{r, mukaikit::testing::random_vector(rng, ns, -6, 6), mukaikit::testing::random_rational(rng, -9, 9)};
    TwistedSheafData sub{mukaikit::testing::uniform(rng, 1, r - 1), mukaikit::testing::random_vector(rng, ns, -6, 6),
                         mukaikit::testing::random_rational(rng, -9, 9)};
    TwistData e{mukaikit::testing::uniform(rng, 1, 4), mukaikit::testing::random_rational(rng, -9, 9)};
    auto w = twisted_subobject_wall(f, sub, e);
    Rational r1(sub.r), r2(w.quotient.r);
    EXPECT_EQ(w.d_square, -Rational(r) * r1 * r2 * w.k);
  }
}
