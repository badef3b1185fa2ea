#pragma once

// Brute-force references for wall enumeration: scan every D in a box of
// NS coordinates in machine integers, then compare with the library.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "support/generators.hpp"

namespace mukaikit::testing {

using Coords = std::vector<long>;

struct BoxScan {
  std::vector<Coords> through;             // walls with D·ω = 0
  std::map<Coords, Rational> crossings;    // walls separating ω, ω' with crossing t
};

namespace detail {

inline std::vector<long> integer_scaled(const LatticeVector &x) {
  auto ints = primitive_integer_multiple(x.coords());
  std::vector<long> out;
  for (const auto &v : ints) out.push_back(v.get_si());
  return out;
}

inline long dot(const std::vector<long> &a, const std::vector<long> &b) {
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline long gcd_all(const Coords &c) {
  long g = 0;
  for (long x : c) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

inline bool canonical(const Coords &c) {
  for (long x : c)
    if (x != 0) return x > 0;
  return false;
}

} // namespace detail

/// Every primitive canonical D with |D_i| ≤ box and -bound ≤ D² < 0; `through`
/// holds those with D·ω = 0, `crossings` those with a sign change between ω, ω'.
inline BoxScan box_scan(const LatticePtr &ns, const Rational &bound, const LatticeVector &omega,
                        const std::optional<LatticeVector> &omega_prime, long box) {
  const std::size_t n = ns->rank();
  std::vector<std::vector<long>> gram(n, std::vector<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = ns->gram()(i, j).get_si();
  auto row_of = [&](const LatticeVector &w) {
    auto s = detail::integer_scaled(w);
    std::vector<long> row(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) row[i] += gram[i][j] * s[j];
    return row;
  };
  auto w0 = row_of(omega);
  std::vector<long> w1 = omega_prime ? row_of(*omega_prime) : std::vector<long>{};
  const long num = bound.get_num().get_si(), den = bound.get_den().get_si();

  BoxScan out;
  Coords d(n, -box);
  for (;;) {
    if (detail::canonical(d) && detail::gcd_all(d) == 1) {
      long d2 = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d2 += d[i] * gram[i][j] * d[j];
      if (d2 < 0 && -d2 * den <= num) {
        long s0 = detail::dot(d, w0);
        if (s0 == 0) out.through.push_back(d);
        if (omega_prime) {
          long s1 = detail::dot(d, w1);
          if ((s0 < 0 && s1 > 0) || (s0 > 0 && s1 < 0)) {
            std::vector<Integer> di(d.begin(), d.end());
            auto dv = LatticeVector::from_integers(ns, di);
            Rational p0 = pairing(dv, omega), p1 = pairing(dv, *omega_prime);
            out.crossings.emplace(d, p0 / (p0 - p1));
          }
        }
      }
    }
    std::size_t k = 0;
    while (k < n && d[k] == box) d[k++] = -box;
    if (k == n) break;
    ++d[k];
  }
  return out;
}

/// Largest coordinate any x with M(x) ≤ c can have, squared: c·(M⁻¹)_ii.
inline Rational coordinate_bound_squared(const RatMatrix &majorant, const Rational &c) {
  RatMatrix inv = inverse(majorant);
  Rational best = 0;
  for (std::size_t i = 0; i < inv.rows(); ++i) best = std::max(best, Rational(c * inv(i, i)));
  return best;
}

/// M_ω(x) = 2(x·ω)²/ω² - x² on NS.
inline RatMatrix majorant_form(const LatticePtr &ns, const LatticeVector &omega) {
  const std::size_t n = ns->rank();
  auto gw = dual_row(omega);
  Rational a = square(omega);
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = 2 * gw[i] * gw[j] / a - ns->gram()(i, j);
  return m;
}

/// The enumeration bound used for segments, recomputed independently.
inline Rational segment_majorant_bound(const Rational &bound, const LatticeVector &w0, const LatticeVector &w1) {
  Rational a = square(w0);
  LatticeVector u = w1 - w0;
  Rational uw = pairing(u, w0);
  Rational nn = -(square(u) - uw * uw / a);
  return bound * (1 + 2 * nn / std::min(a, square(w1)));
}

inline Coords to_coords(const LatticeVector &d) {
  Coords c;
  for (const auto &x : d.integer_coords()) c.push_back(x.get_si());
  return c;
}

/// Short positive-square NS vector for use as the reference class.
inline std::optional<LatticeVector> find_positive(const LatticePtr &ns, long box = 4) {
  const std::size_t n = ns->rank();
  std::optional<LatticeVector> best;
  Coords d(n, -box);
  for (;;) {
    std::vector<Integer> di(d.begin(), d.end());
    auto v = LatticeVector::from_integers(ns, di);
    if (square(v) > 0 && (!best || square(v) < square(*best))) best = v;
    std::size_t k = 0;
    while (k < n && d[k] == box) d[k++] = -box;
    if (k == n) break;
    ++d[k];
  }
  return best;
}

/// Random rational NS class with positive square in the component of `ref`.
inline LatticeVector random_positive_class(Rng &rng, const LatticePtr &ns, const LatticeVector &ref, long spread = 4) {
  for (;;) {
    auto x = ref * Rational(uniform(rng, 1, 3)) + random_rational_vector(rng, ns, -spread, spread, 4);
    if (square(x) > 0 && pairing(x, ref) > 0) return x;
  }
}

struct WallCase {
  K3Model model;
  MukaiVector v;
  H11Class omega;
  H11Class omega_prime;
};

/// Random projective rank-n model (no transcendental block), Mukai vector and
/// two generic polarizations, retried until every wall the library could
/// return is certified to have coordinates below `box`.
inline WallCase random_wall_case(Rng &rng, std::size_t rank, long box = 50, long max_bound = 40) {
  for (;;) {
    auto ns = random_even_lattice(rng, rank, 1, 3);
    auto ref = find_positive(ns);
    if (!ref) continue;
    K3Model model(ns, nullptr, {}, {*ref, LatticeVector::zero(make_lattice(IntMatrix(0, 0)))});
    long r = uniform(rng, 2, 3);
    auto xi = random_vector(rng, ns, -3, 3);
    MukaiVector v(Rational(r), xi, Rational(uniform(rng, -6, 6)));
    if (discriminant(v) < 0 || wall_bound(v) > max_bound) continue;
    auto w0 = random_positive_class(rng, ns, *ref);
    auto w1 = random_positive_class(rng, ns, *ref);
    H11Class o0 = model.from_ns(w0), o1 = model.from_ns(w1);
    if (!is_generic(model, v, o0) || !is_generic(model, v, o1)) continue;
    const Rational limit = Rational(box) * box;
    const Rational bound = wall_bound(v);
    if (coordinate_bound_squared(majorant_form(ns, w0), bound) >= limit) continue;
    if (coordinate_bound_squared(majorant_form(ns, w0), segment_majorant_bound(bound, w0, w1)) >= limit) continue;
    return {std::move(model), std::move(v), std::move(o0), std::move(o1)};
  }
}

/// Library output compared with the box scan; returns an empty string on agreement.
inline std::string compare_with_box(const WallCase &c, long box = 50, unsigned threads = 1) {
  auto scan = box_scan(c.model.ns(), wall_bound(c.v), c.omega.ns_part, c.omega_prime.ns_part, box);
  std::vector<Coords> through;
  for (const auto &w : walls_through_class(c.model, c.v, c.omega, threads)) through.push_back(to_coords(w.d));
  std::sort(through.begin(), through.end());
  std::sort(scan.through.begin(), scan.through.end());
  if (through != scan.through) return "walls_through_class differs from box scan";
  std::map<Coords, Rational> crossings;
  for (const auto &x : walls_crossing_segment(c.model, c.v, {c.omega, c.omega_prime}, threads))
    crossings.emplace(to_coords(x.wall.d), x.t);
  if (crossings != scan.crossings) return "walls_crossing_segment differs from box scan";

  // a class on the first crossed wall exercises the non-generic side
  if (crossings.empty()) return {};
  H11Class on_wall = Segment{c.omega, c.omega_prime}.at(crossings.begin()->second);
  auto w = on_wall.ns_part;
  if (coordinate_bound_squared(majorant_form(c.model.ns(), w), wall_bound(c.v)) >= Rational(box) * box) return {};
  auto scan_on = box_scan(c.model.ns(), wall_bound(c.v), w, std::nullopt, box);
  std::vector<Coords> on;
  for (const auto &x : walls_through_class(c.model, c.v, on_wall, threads)) on.push_back(to_coords(x.d));
  std::sort(on.begin(), on.end());
  std::sort(scan_on.through.begin(), scan_on.through.end());
  if (on.empty() || on != scan_on.through) return "walls_through_class differs from box scan on a wall";
  return {};
}

} // namespace mukaikit::testing
