#pragma once

// Integral lattices given by Gram matrices, vectors in them, orthogonal
// complements and discriminant invariants.

#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mukaikit/exactlin.hpp"

namespace mukaikit {

class Lattice {
public:
  explicit Lattice(IntMatrix gram, std::string label = {}) : gram_(std::move(gram)), label_(std::move(label)) {
    detail::require(gram_.is_symmetric(), "lattice Gram matrix must be square and symmetric");
  }

  std::size_t rank() const { return gram_.rows(); }
  const IntMatrix &gram() const { return gram_; }
  const std::string &label() const { return label_; }

  Integer determinant() const { return rank() == 0 ? Integer(1) : mukaikit::determinant(gram_); }
  bool is_degenerate() const { return determinant() == 0; }
  Signature signature() const { return rational_signature(gram_); }

private:
  IntMatrix gram_;
  std::string label_;
};

using LatticePtr = std::shared_ptr<const Lattice>;

inline LatticePtr make_lattice(IntMatrix gram, std::string label = {}) {
  return std::make_shared<const Lattice>(std::move(gram), std::move(label));
}

/// Hyperbolic plane, Gram [[0,1],[1,0]].
inline LatticePtr hyperbolic_plane() { return make_lattice(IntMatrix{{0, 1}, {1, 0}}, "U"); }

/// Negative-definite E8, i.e. minus the E8 Cartan matrix.
inline LatticePtr e8_minus() {
  IntMatrix cartan{
      {2, -1, 0, 0, 0, 0, 0, 0},  {-1, 2, -1, 0, 0, 0, 0, 0}, {0, -1, 2, -1, 0, 0, 0, -1},
      {0, 0, -1, 2, -1, 0, 0, 0}, {0, 0, 0, -1, 2, -1, 0, 0}, {0, 0, 0, 0, -1, 2, -1, 0},
      {0, 0, 0, 0, 0, -1, 2, 0},  {0, 0, -1, 0, 0, 0, 0, 2},
  };
  return make_lattice(-cartan, "E8(-1)");
}

inline LatticePtr diagonal_lattice(const std::vector<Integer> &entries) {
  std::string label = "<";
  for (std::size_t i = 0; i < entries.size(); ++i) label += (i ? "," : "") + entries[i].get_str();
  label += ">";
  return make_lattice(IntMatrix::diagonal(entries), label);
}

inline LatticePtr direct_sum(const std::vector<LatticePtr> &parts) {
  std::size_t n = 0;
  for (const auto &p : parts) n += p->rank();
  IntMatrix g(n, n);
  std::string label;
  std::size_t offset = 0;
  for (const auto &p : parts) {
    for (std::size_t i = 0; i < p->rank(); ++i)
      for (std::size_t j = 0; j < p->rank(); ++j) g(offset + i, offset + j) = p->gram()(i, j);
    offset += p->rank();
    label += (label.empty() ? "" : "+") + p->label();
  }
  return make_lattice(std::move(g), label);
}

/// H^2 of a K3 surface: U^3 + E8(-1)^2, rank 22.
inline LatticePtr k3_lattice() {
  auto u = hyperbolic_plane();
  auto e8 = e8_minus();
  return direct_sum({u, u, u, e8, e8});
}

/// Abstract Mukai lattice Λ_K3 + U, rank 24. The trailing U carries
/// H^0 + H^4; see moduli.hpp for the identification used.
inline LatticePtr mukai_lattice() { return direct_sum({k3_lattice(), hyperbolic_plane()}); }

inline bool same_lattice(const LatticePtr &a, const LatticePtr &b) {
  return a == b || (a && b && a->gram() == b->gram());
}

/// Element of L ⊗ Q, coordinates relative to the lattice basis.
class LatticeVector {
public:
  LatticeVector(LatticePtr lattice, std::vector<Rational> coords)
      : lattice_(std::move(lattice)), coords_(std::move(coords)) {
    detail::require(lattice_ != nullptr, "vector without lattice");
    detail::require(coords_.size() == lattice_->rank(), "vector length does not match lattice rank");
  }

  static LatticeVector zero(LatticePtr lattice) {
    std::vector<Rational> c(lattice->rank());
    return {std::move(lattice), std::move(c)};
  }

  static LatticeVector from_integers(LatticePtr lattice, const std::vector<Integer> &coords) {
    return {std::move(lattice), std::vector<Rational>(coords.begin(), coords.end())};
  }

  /// i-th basis vector.
  static LatticeVector basis(LatticePtr lattice, std::size_t i) {
    auto v = zero(std::move(lattice));
    v.coords_.at(i) = 1;
    return v;
  }

  const LatticePtr &lattice() const { return lattice_; }
  const std::vector<Rational> &coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  const Rational &operator[](std::size_t i) const { return coords_[i]; }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational &q) { return q == 0; });
  }
  bool is_integral() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational &q) { return is_integer(q); });
  }
  std::vector<Integer> integer_coords() const {
    detail::require(is_integral(), "vector is not integral");
    std::vector<Integer> out;
    out.reserve(coords_.size());
    for (const auto &q : coords_) out.push_back(q.get_num());
    return out;
  }

  friend LatticeVector operator+(const LatticeVector &a, const LatticeVector &b) {
    check_same(a, b);
    LatticeVector c = a;
    for (std::size_t i = 0; i < c.coords_.size(); ++i) c.coords_[i] += b.coords_[i];
    return c;
  }
  friend LatticeVector operator-(const LatticeVector &a, const LatticeVector &b) { return a + (-b); }
  friend LatticeVector operator-(const LatticeVector &a) { return a * Rational(-1); }
  friend LatticeVector operator*(const LatticeVector &a, const Rational &s) {
    LatticeVector c = a;
    for (auto &x : c.coords_) x *= s;
    return c;
  }
  friend LatticeVector operator*(const Rational &s, const LatticeVector &a) { return a * s; }
  friend LatticeVector operator/(const LatticeVector &a, const Rational &s) {
    detail::require(s != 0, "division of a vector by zero");
    return a * Rational(1 / s);
  }
  friend bool operator==(const LatticeVector &a, const LatticeVector &b) {
    return same_lattice(a.lattice_, b.lattice_) && a.coords_ == b.coords_;
  }

  static void check_same(const LatticeVector &a, const LatticeVector &b) {
    detail::require(same_lattice(a.lattice_, b.lattice_), "vectors live in different lattices");
  }

private:
  LatticePtr lattice_;
  std::vector<Rational> coords_;
};

inline std::ostream &operator<<(std::ostream &os, const LatticeVector &v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os << ')';
}

/// x^T G y.
inline Rational pairing(const LatticeVector &x, const LatticeVector &y) {
  LatticeVector::check_same(x, y);
  const IntMatrix &g = x.lattice()->gram();
  Rational sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < y.size(); ++j) row += g(i, j) * y[j];
    sum += x[i] * row;
  }
  return sum;
}

inline Rational square(const LatticeVector &x) { return pairing(x, x); }

/// G x, i.e. the linear form y ↦ x·y in coordinates.
inline std::vector<Rational> dual_row(const LatticeVector &x) {
  std::vector<Rational> row(x.size());
  const IntMatrix &g = x.lattice()->gram();
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t i = 0; i < x.size(); ++i) row[j] += x[i] * g(i, j);
  return row;
}

/// Divisibility of a nonzero integral vector: gcd of its coordinates.
inline Integer content(const LatticeVector &x) {
  detail::require(!x.is_zero(), "content of the zero vector");
  auto c = x.integer_coords();
  return mukaikit::content(std::span<const Integer>(c));
}

/// Flip so that the first nonzero coordinate is positive.
inline std::vector<Integer> canonical_sign(std::vector<Integer> v) {
  for (const auto &x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto &y : v) y = -y;
    break;
  }
  return v;
}

/// Sublattice of an ambient lattice: rows of `basis` are ambient coordinates,
/// `lattice` carries the induced Gram.
struct Sublattice {
  LatticePtr ambient;
  IntMatrix basis;
  LatticePtr lattice;

  LatticeVector include(const LatticeVector &x) const {
    detail::require(same_lattice(x.lattice(), lattice), "vector is not in this sublattice");
    std::vector<Rational> out(ambient->rank());
    for (std::size_t i = 0; i < basis.rows(); ++i)
      for (std::size_t j = 0; j < basis.cols(); ++j) out[j] += x[i] * basis(i, j);
    return {ambient, std::move(out)};
  }
};

inline LatticePtr induced_lattice(const IntMatrix &basis, const IntMatrix &gram, std::string label) {
  return make_lattice(basis * gram * basis.transpose(), std::move(label));
}

/// Saturated sublattice {x : x·v = 0 for all v in vs}, Hermite basis.
inline Sublattice orthogonal_complement(const LatticePtr &l, const std::vector<LatticeVector> &vs) {
  IntMatrix conditions(vs.size(), l->rank());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    detail::require(same_lattice(vs[i].lattice(), l), "orthogonal_complement: vector not in lattice");
    auto row = dual_row(vs[i]);
    auto prim = primitive_integer_multiple(row);
    for (std::size_t j = 0; j < prim.size(); ++j) conditions(i, j) = prim[j];
  }
  IntMatrix basis = integer_kernel_saturated(conditions);
  auto sub = induced_lattice(basis, l->gram(), vs.empty() ? l->label() : "perp in " + l->label());
  return {l, std::move(basis), std::move(sub)};
}

/// Invariant factors of the discriminant group L^∨/L (unit factors dropped).
inline std::vector<Integer> discriminant_group(const Lattice &l) {
  detail::require(!l.is_degenerate(), "discriminant group of a degenerate lattice");
  auto snf = smith_normal_form(l.gram());
  std::vector<Integer> out;
  for (const auto &d : snf.diagonal)
    if (d != 1) out.push_back(d);
  return out;
}

inline Integer discriminant_order(const Lattice &l) {
  Integer n = 1;
  for (const auto &d : discriminant_group(l)) n *= d;
  return n;
}

} // namespace mukaikit
