#pragma once

// Mukai vectors (v0, v1, v2) in H^0 + NS ⊗ Q + H^4 of a K3 surface, with
// H^4(S, Z) ≅ Z fixed once so that v2 is a bare scalar.

#include <utility>

#include "mukaikit/lattice.hpp"

namespace mukaikit {

class MukaiVector {
public:
  MukaiVector(Rational v0, LatticeVector v1, Rational v2) : v0_(std::move(v0)), v1_(std::move(v1)), v2_(std::move(v2)) {}

  /// (1, 0, 0), the unit of the cup product.
  static MukaiVector unit(LatticePtr ns) { return {Rational(1), LatticeVector::zero(std::move(ns)), Rational(0)}; }

  const Rational &v0() const { return v0_; }
  const LatticeVector &v1() const { return v1_; }
  const Rational &v2() const { return v2_; }
  const LatticePtr &ns() const { return v1_.lattice(); }

  bool is_integral() const { return is_integer(v0_) && is_integer(v2_) && v1_.is_integral(); }

  friend MukaiVector operator+(const MukaiVector &a, const MukaiVector &b) {
    return {a.v0_ + b.v0_, a.v1_ + b.v1_, a.v2_ + b.v2_};
  }
  friend MukaiVector operator-(const MukaiVector &a, const MukaiVector &b) {
    return {a.v0_ - b.v0_, a.v1_ - b.v1_, a.v2_ - b.v2_};
  }
  friend MukaiVector operator*(const Rational &s, const MukaiVector &a) { return {s * a.v0_, a.v1_ * s, s * a.v2_}; }
  friend bool operator==(const MukaiVector &a, const MukaiVector &b) {
    return a.v0_ == b.v0_ && a.v1_ == b.v1_ && a.v2_ == b.v2_;
  }

private:
  Rational v0_;
  LatticeVector v1_;
  Rational v2_;
};

inline std::ostream &operator<<(std::ostream &os, const MukaiVector &v) {
  return os << '(' << v.v0() << ", " << v.v1() << ", " << v.v2() << ')';
}

struct TopologicalType {
  Integer r;
  LatticeVector c1;
  Integer c2;

  friend bool operator==(const TopologicalType &, const TopologicalType &) = default;
};

/// v = ch · √td(S) with √td(S) = (1, 0, 1): (r, c1, ch2 + r).
inline MukaiVector mukai_from_chern(const Rational &r, const LatticeVector &c1, const Rational &ch2) {
  detail::require(r >= 0, "rank must be nonnegative");
  return {r, c1, ch2 + r};
}

/// ch = v / √td(S): (v0, v1, v2 - v0).
inline MukaiVector chern_character(const MukaiVector &v) { return {v.v0(), v.v1(), v.v2() - v.v0()}; }

/// v1·w1 - v0 w2 - v2 w0.
inline Rational mukai_pairing(const MukaiVector &v, const MukaiVector &w) {
  return pairing(v.v1(), w.v1()) - v.v0() * w.v2() - v.v2() * w.v0();
}

inline Rational mukai_square(const MukaiVector &v) { return mukai_pairing(v, v); }

/// Δ(v) = v²/(2 v0²) + 1.
inline Rational discriminant(const MukaiVector &v) {
  detail::require(v.v0() != 0, "discriminant undefined for v0 = 0");
  return mukai_square(v) / (2 * v.v0() * v.v0()) + 1;
}

/// Δ(τ) = (1/r)(c2 - (r-1)/(2r) c1²).
inline Rational discriminant(const TopologicalType &tau) {
  detail::require(tau.r != 0, "discriminant undefined for rank 0");
  Rational r(tau.r);
  return (Rational(tau.c2) - (r - 1) / (2 * r) * square(tau.c1)) / r;
}

/// τ_v = (r, ξ, ξ²/2 + r - a) for an integral v = (r, ξ, a) with r ≥ 1.
inline TopologicalType topological_type(const MukaiVector &v) {
  detail::require(v.is_integral(), "topological type needs an integral Mukai vector");
  detail::require(v.v0() >= 1, "topological type needs rank >= 1");
  Rational c2 = square(v.v1()) / 2 + v.v0() - v.v2();
  detail::require(is_integer(c2), "c2 = xi^2/2 + r - a is not an integer");
  return {v.v0().get_num(), v.v1(), c2.get_num()};
}

/// Cup product of even classes: (x0 y0, x0 y1 + x1 y0, x0 y2 + x2 y0 + x1·y1).
inline MukaiVector mukai_product(const MukaiVector &x, const MukaiVector &y) {
  LatticeVector::check_same(x.v1(), y.v1());
  return {x.v0() * y.v0(), x.v1() * y.v0() + y.v1() * x.v0(),
          x.v0() * y.v2() + x.v2() * y.v0() + pairing(x.v1(), y.v1())};
}

/// e^δ = (1, δ, δ²/2).
inline MukaiVector exp_class(const LatticeVector &delta) {
  return {Rational(1), delta, square(delta) / 2};
}

/// Multiplicative inverse; needs x0 ≠ 0.
inline MukaiVector mukai_inverse(const MukaiVector &x) {
  detail::require(x.v0() != 0, "class with x0 = 0 is not invertible");
  Rational x0 = x.v0();
  return {Rational(1 / x0), x.v1() * Rational(-1 / (x0 * x0)),
          square(x.v1()) / (x0 * x0 * x0) - x.v2() / (x0 * x0)};
}

/// x / y in the cup-product ring.
inline MukaiVector mukai_quotient(const MukaiVector &x, const MukaiVector &y) {
  return mukai_product(x, mukai_inverse(y));
}

namespace detail {
inline bool rational_sqrt(const Rational &q, Rational &root) {
  if (q <= 0) return false;
  if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0) return false;
  Integer n = sqrt(q.get_num()), d = sqrt(q.get_den());
  root = make_rational(n, d);
  return true;
}
} // namespace detail

/// The square root with positive degree-0 part: (s, m, t)² = (s², 2sm, 2st + m²).
inline MukaiVector mukai_sqrt(const MukaiVector &x) {
  Rational s;
  if (!detail::rational_sqrt(x.v0(), s)) throw invalid_input("mukai_sqrt: x0 is not the square of a positive rational");
  LatticeVector m = x.v1() / (2 * s);
  Rational t = (x.v2() - square(m)) / (2 * s);
  return {s, m, t};
}

/// (x0, -x1, x2).
inline MukaiVector dual(const MukaiVector &x) { return {x.v0(), -x.v1(), x.v2()}; }

} // namespace mukaikit
