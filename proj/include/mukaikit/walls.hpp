#pragma once

// Walls D^⊥ for D in NS with -r⁴Δ/2 ≤ D² < 0, genericity of polarizations
// and wall crossings along segments of polarizations. Twisted walls use the
// same code with a rational (twisted) Mukai vector.

#include <algorithm>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "mukaikit/mukai.hpp"
#include "mukaikit/short_vectors.hpp"
#include "mukaikit/surface.hpp"

namespace mukaikit {

struct Destabilizer {
  Integer s;
  LatticeVector zeta;
};

struct Wall {
  LatticeVector d; ///< primitive, first nonzero coordinate positive
  Integer d_square;
  Rational bound;
  std::optional<Destabilizer> source;
};

struct Segment {
  H11Class start;
  H11Class end;

  H11Class at(const Rational &t) const { return start + t * (end - start); }
};

struct Crossing {
  Wall wall;
  Rational t; ///< D·ω_t = 0 at ω_t = (1-t) start + t end
};

/// r⁴Δ/2 for Δ = Δ(v) (or the twisted discriminant when v is twisted).
inline Rational wall_bound(const MukaiVector &v) {
  detail::require(v.v0() != 0, "wall bound undefined for rank 0");
  Rational r = v.v0();
  return r * r * r * r * discriminant(v) / 2;
}

/// Δ ≥ 0. When it fails the wall set is empty and semistable data is impossible.
inline bool bogomolov_satisfied(const MukaiVector &v) { return discriminant(v) >= 0; }

inline bool is_wall(const LatticeVector &d, const MukaiVector &v) {
  detail::require(d.is_integral(), "wall candidate must be integral");
  detail::require(same_lattice(d.lattice(), v.ns()), "wall candidate is not in NS");
  Rational d2 = square(d);
  return -wall_bound(v) <= d2 && d2 < 0;
}

enum class DestabilizerKind { zero, wall, out_of_range };

struct DestabilizerVerdict {
  DestabilizerKind kind;
  LatticeVector d;
  Integer d_square;
  Rational bound;
};

/// D = rζ - sξ for a sub-object of rank s and first Chern class ζ.
/// out_of_range means the data cannot come from a semistable sheaf.
inline DestabilizerVerdict destabilizer_wall(const MukaiVector &v, const Integer &s, const LatticeVector &zeta) {
  detail::require(v.v0() >= 1 && is_integer(v.v0()), "rank must be a positive integer");
  if (!(s > 0 && Rational(s) < v.v0())) throw invalid_input("destabilizer rank must satisfy 0 < s < r");
  detail::require(zeta.is_integral() && v.v1().is_integral(), "destabilizer classes must be integral");
  LatticeVector d = zeta * v.v0() - v.v1() * Rational(s);
  Rational bound = wall_bound(v);
  Rational d2 = square(d);
  DestabilizerKind kind = DestabilizerKind::out_of_range;
  if (d.is_zero())
    kind = DestabilizerKind::zero;
  else if (-bound <= d2 && d2 < 0)
    kind = DestabilizerKind::wall;
  return {kind, std::move(d), d2.get_num(), bound};
}

namespace detail {

inline bool wall_order(const Wall &a, const Wall &b) {
  Integer na = -a.d_square, nb = -b.d_square;
  if (na != nb) return na < nb;
  return a.d.coords() < b.d.coords();
}

/// Candidate D (integral coordinates in NS) → Wall if primitive, canonical
/// and inside the wall range.
inline std::optional<Wall> as_wall(const LatticePtr &ns, std::vector<Integer> coords, const Rational &bound) {
  if (mukaikit::content(std::span<const Integer>(coords)) != 1) return std::nullopt;
  if (canonical_sign(coords) != coords) return std::nullopt;
  auto d = LatticeVector::from_integers(ns, coords);
  Rational d2 = square(d);
  if (!(-bound <= d2 && d2 < 0)) return std::nullopt;
  return Wall{std::move(d), d2.get_num(), bound, std::nullopt};
}

/// Short vectors of a definite form, except that in rank 1 only the two
/// primitive candidates ±1 are produced: walls are primitive by definition.
inline std::vector<std::vector<Integer>> wall_candidates(const RatMatrix &q, const Rational &bound, unsigned threads) {
  if (q.rows() != 1) return short_vectors(q, bound, threads);
  if (q(0, 0) > bound) return {};
  return {{Integer(-1)}, {Integer(1)}};
}

} // namespace detail

/// Every wall D with D·ω = 0, found by enumerating the negative-definite
/// lattice ω^⊥ ∩ NS.
inline std::vector<Wall> walls_through_class(const K3Model &m, const MukaiVector &v, const H11Class &omega,
                                             unsigned threads = 1) {
  require_polarization(m, omega);
  detail::require(same_lattice(v.ns(), m.ns()), "Mukai vector is not over the model's NS");
  const Rational bound = wall_bound(v);
  if (bound <= 0) return {};

  const auto &ns = m.ns();
  IntMatrix condition(1, ns->rank());
  auto row = primitive_integer_multiple(dual_row(omega.ns_part));
  for (std::size_t j = 0; j < row.size(); ++j) condition(0, j) = row[j];
  IntMatrix kernel = integer_kernel_saturated(condition);
  if (kernel.rows() == 0) return {};

  RatMatrix definite = to_rational(-(kernel * ns->gram() * kernel.transpose()));
  std::vector<Wall> out;
  for (const auto &y : detail::wall_candidates(definite, bound, threads)) {
    std::vector<Integer> coords(ns->rank());
    for (std::size_t i = 0; i < y.size(); ++i)
      for (std::size_t j = 0; j < coords.size(); ++j) coords[j] += y[i] * kernel(i, j);
    if (auto w = detail::as_wall(ns, std::move(coords), bound)) out.push_back(std::move(*w));
  }
  std::sort(out.begin(), out.end(), detail::wall_order);
  return out;
}

inline bool is_generic(const K3Model &m, const MukaiVector &v, const H11Class &omega, unsigned threads = 1) {
  return walls_through_class(m, v, omega, threads).empty();
}

/// Whether W_v is empty, when that can be decided by finite enumeration:
/// always if the bound is ≤ 0, and for negative-definite NS. nullopt otherwise.
inline std::optional<bool> wall_set_empty(const K3Model &m, const MukaiVector &v, unsigned threads = 1) {
  detail::require(same_lattice(v.ns(), m.ns()), "Mukai vector is not over the model's NS");
  const Rational bound = wall_bound(v);
  if (bound <= 0 || m.ns()->rank() == 0) return true;
  auto sig = m.ns()->signature();
  if (sig.negative != m.ns()->rank()) return std::nullopt;
  for (auto &coords : detail::wall_candidates(to_rational(-m.ns()->gram()), bound, threads))
    if (detail::as_wall(m.ns(), std::move(coords), bound)) return false;
  return true;
}

/// Walls separating the endpoints, each with its crossing parameter, sorted by t.
///
/// Any such D satisfies M_ω(D) ≤ B(1 + 2N/m) for the positive-definite form
/// M_ω(x) = 2(x·ω)²/ω² - x², where B is the wall bound, N = -n² for the
/// component n of ω'-ω orthogonal to ω, and m = min(ω², ω'²) ≤ ω_t².
inline std::vector<Crossing> walls_crossing_segment(const K3Model &m, const MukaiVector &v, const Segment &seg,
                                                    unsigned threads = 1) {
  require_polarization(m, seg.start, "segment start");
  require_polarization(m, seg.end, "segment end");
  if (pairing(seg.start, seg.end) <= 0) throw hypothesis_violation("segment endpoints lie in different positive-cone components");
  if (!is_generic(m, v, seg.start, threads)) throw hypothesis_violation("segment start lies on a wall");
  if (!is_generic(m, v, seg.end, threads)) throw hypothesis_violation("segment end lies on a wall");
  const Rational bound = wall_bound(v);
  if (bound <= 0) return {};

  const H11Class &w0 = seg.start;
  const H11Class &w1 = seg.end;
  const Rational a = square(w0);
  const H11Class u = w1 - w0;
  const Rational uw = pairing(u, w0);
  const Rational n_norm = -(square(u) - uw * uw / a);
  const Rational min_square = std::min(a, square(w1));
  const Rational majorant_bound = bound * (1 + 2 * n_norm / min_square);

  const auto &ns = m.ns();
  const std::size_t n = ns->rank();
  auto gw = dual_row(w0.ns_part);
  RatMatrix majorant(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) majorant(i, j) = 2 * gw[i] * gw[j] / a - ns->gram()(i, j);

  std::vector<Crossing> out;
  for (auto &coords : detail::wall_candidates(majorant, majorant_bound, threads)) {
    auto w = detail::as_wall(ns, std::move(coords), bound);
    if (!w) continue;
    Rational s0 = pairing(w->d, w0), s1 = pairing(w->d, w1);
    if (sgn(s0) * sgn(s1) >= 0) continue;
    Rational t = s0 / (s0 - s1);
    out.push_back({std::move(*w), t});
  }
  std::sort(out.begin(), out.end(), [](const Crossing &x, const Crossing &y) {
    if (x.t != y.t) return x.t < y.t;
    return detail::wall_order(x.wall, y.wall);
  });
  return out;
}

/// Generic ω, ω' lie in one chamber iff no wall separates them (chambers are convex).
inline bool same_chamber(const K3Model &m, const MukaiVector &v, const H11Class &omega, const H11Class &omega_prime,
                         unsigned threads = 1) {
  return walls_crossing_segment(m, v, {omega, omega_prime}, threads).empty();
}

} // namespace mukaikit
