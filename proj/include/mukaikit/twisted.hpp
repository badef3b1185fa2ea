#pragma once

// Numerical invariants of twisted sheaves relative to a locally free twisted
// sheaf E: characters, slopes, discriminants, B-field characters and the
// sub-object wall relation. Sheaves are represented by invariants only.

#include <optional>
#include <stdexcept>
#include <utility>

#include "mukaikit/mukai.hpp"
#include "mukaikit/surface.hpp"

namespace mukaikit {

/// Invariants of the twisting bundle E: s = rk E, b = ch2(E ⊗ E^∨),
/// optional B_E = c1^B(E)/rk E.
struct TwistData {
  Integer s;
  Rational b;
  std::optional<LatticeVector> b_field;

  TwistData(Integer s_, Rational b_, std::optional<LatticeVector> b_field_ = std::nullopt)
      : s(std::move(s_)), b(std::move(b_)), b_field(std::move(b_field_)) {
    detail::require(s >= 1, "rank of the twisting bundle must be >= 1");
  }

  /// E = O_S.
  static TwistData trivial() { return {Integer(1), Rational(0)}; }
};

/// r = rk F, xi = c1(F ⊗ E^∨), a = ch2(F ⊗ E^∨).
struct TwistedSheafData {
  Integer r;
  LatticeVector xi;
  Rational a;
};

/// ch_E(F) = (r, ξ/s, (2as - rb)/2s²).
inline MukaiVector ch_E(const TwistedSheafData &f, const TwistData &e) {
  Rational r(f.r), s(e.s);
  return {r, f.xi / s, (2 * f.a * s - r * e.b) / (2 * s * s)};
}

/// v_E(F) = ch_E(F) · √td = (r, ξ/s, r + (2as - rb)/2s²).
inline MukaiVector v_E(const TwistedSheafData &f, const TwistData &e) {
  auto ch = ch_E(f, e);
  return {ch.v0(), ch.v1(), ch.v2() + ch.v0()};
}

/// Closed form ξ²/s² - 2ra/s + r²b/s² - 2r².
inline Rational v_E_square_closed_form(const TwistedSheafData &f, const TwistData &e) {
  Rational r(f.r), s(e.s);
  return square(f.xi) / (s * s) - 2 * r * f.a / s + r * r * e.b / (s * s) - 2 * r * r;
}

/// μ_{E,ω}(F) = ξ·ω / (r s).
inline Rational slope_E(const TwistedSheafData &f, const TwistData &e, const H11Class &omega) {
  detail::require(f.r >= 1, "slope needs positive rank");
  return pairing(f.xi, omega) / (Rational(f.r) * Rational(e.s));
}

/// Δ_E(F) = v_E²/(2r²) + 1.
inline Rational delta_E(const TwistedSheafData &f, const TwistData &e) {
  detail::require(f.r >= 1, "discriminant needs positive rank");
  Rational r(f.r);
  return mukai_square(v_E(f, e)) / (2 * r * r) + 1;
}

/// ch(F ⊗ E^∨) = (rs, ξ, a).
inline MukaiVector ch_twisted_tensor(const TwistedSheafData &f, const TwistData &e) {
  return {Rational(f.r * e.s), f.xi, f.a};
}

/// ch(E ⊗ E^∨) = (s², 0, b).
inline MukaiVector ch_endomorphisms(const TwistData &e, const LatticePtr &ns) {
  return {Rational(e.s * e.s), LatticeVector::zero(ns), e.b};
}

/// ch2(F ⊗ F^∨) from ch(F⊗F^∨)·ch(E⊗E^∨) = ch(F⊗E^∨)·ch(F⊗E^∨)^∨, solved in
/// the cup-product ring.
inline Rational endomorphism_ch2(const TwistedSheafData &f, const TwistData &e) {
  auto fe = ch_twisted_tensor(f, e);
  auto end = mukai_quotient(mukai_product(fe, dual(fe)), ch_endomorphisms(e, f.xi.lattice()));
  return end.v2();
}

/// Δ = (1/2r²)(-ch2(F⊗F^∨) - 2r²) + 1; no E enters.
inline Rational delta_from_endomorphism(const Integer &r, const Rational &ch2_end) {
  detail::require(r >= 1, "discriminant needs positive rank");
  Rational rr(r * r);
  return (-ch2_end - 2 * rr) / (2 * rr) + 1;
}

inline Rational delta_E_endomorphism_route(const TwistedSheafData &f, const TwistData &e) {
  return delta_from_endomorphism(f.r, endomorphism_ch2(f, e));
}

/// Re-expresses (F, E) against E' = E ⊗ G for an untwisted bundle G with
/// Chern character ch_g: ch(F⊗E'^∨) = ch(F⊗E^∨)·ch(G)^∨ and
/// ch(E'⊗E'^∨) = ch(E⊗E^∨)·ch(G)·ch(G)^∨.
inline std::pair<TwistedSheafData, TwistData> twist_by_bundle(const TwistedSheafData &f, const TwistData &e,
                                                               const MukaiVector &ch_g) {
  detail::require(ch_g.v0() >= 1 && is_integer(ch_g.v0()), "bundle rank must be a positive integer");
  auto fe = mukai_product(ch_twisted_tensor(f, e), dual(ch_g));
  auto ee = mukai_product(ch_endomorphisms(e, f.xi.lattice()), mukai_product(ch_g, dual(ch_g)));
  Integer s2 = e.s * ch_g.v0().get_num();
  return {TwistedSheafData{f.r, fe.v1(), fe.v2()}, TwistData{s2, ee.v2()}};
}

struct WXi {
  MukaiVector value;
  bool integral;
};

/// w_ξ = e^{ξ/r}·w = (r, ξ, a + ξ²/2r) for w = (r, 0, a). Non-integral results
/// are returned with integral = false rather than rejected.
inline WXi w_xi(const MukaiVector &w, const LatticeVector &xi, const Integer &r) {
  detail::require(r >= 1, "w_xi needs r >= 1");
  detail::require(w.v1().is_zero(), "w_xi needs w1 = 0");
  detail::require(w.v0() == Rational(r), "w_xi needs w0 = r");
  auto value = mukai_product(exp_class(xi / Rational(r)), w);
  return {value, value.is_integral()};
}

/// 0-twisted Mukai vector of a sheaf with v = (r, ξ, a): (r, 0, r + c - ξ²/2r), c = a - r.
inline MukaiVector untwisted_w(const MukaiVector &v) {
  detail::require(v.v0() >= 1, "untwisted_w needs rank >= 1");
  Rational c = v.v2() - v.v0();
  return {v.v0(), LatticeVector::zero(v.ns()), v.v0() + c - square(v.v1()) / (2 * v.v0())};
}

/// ch^B(F) = ch_E(F) · exp(B_E).
inline MukaiVector ch_B(const MukaiVector &ch_e, const TwistData &e) {
  if (!e.b_field) throw invalid_input("ch_B needs a B-field class on the twisting data");
  return mukai_product(ch_e, exp_class(*e.b_field));
}

struct SubobjectWall {
  LatticeVector d;   ///< r ξ'/s - r' ξ/s
  Rational d_square;
  Rational k;        ///< v²(F)/r - v²(F')/r' - v²(F'')/r''
  TwistedSheafData quotient;
};

/// Wall class of a sub-object F' ⊂ F; checks D² = -r r' r'' K exactly.
inline SubobjectWall twisted_subobject_wall(const TwistedSheafData &f, const TwistedSheafData &sub, const TwistData &e) {
  if (!(sub.r > 0 && sub.r < f.r)) throw invalid_input("sub-object rank must satisfy 0 < r' < r");
  TwistedSheafData quot{f.r - sub.r, f.xi - sub.xi, f.a - sub.a};
  Rational r(f.r), r1(sub.r), r2(quot.r), s(e.s);
  LatticeVector d = sub.xi * (r / s) - f.xi * (r1 / s);
  Rational k = mukai_square(v_E(f, e)) / r - mukai_square(v_E(sub, e)) / r1 - mukai_square(v_E(quot, e)) / r2;
  Rational d2 = square(d);
  if (d2 != -r * r1 * r2 * k) throw std::logic_error("D^2 = -r r' r'' K failed");
  return {std::move(d), d2, k, std::move(quot)};
}

} // namespace mukaikit
