#pragma once

// Lattice-level verdicts about moduli of slope-stable sheaves: dimension and
// deformation type, the H^2 lattice v^⊥ (or v^⊥/Zv), the projectivity
// criterion, the transfer isometry h and the rank-r existence checker.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mukaikit/twisted.hpp"
#include "mukaikit/walls.hpp"

namespace mukaikit {

/// Coordinates in the abstract Mukai lattice Λ_K3 ⊕ U (rank 24). Indices
/// 0..21 hold H², index 22 the rank r and index 23 the value -v2, so that the
/// trailing U pairing reproduces -r w2 - v2 w0.
struct EmbeddedMukaiVector {
  std::vector<Integer> coords;
  std::optional<MukaiVector> origin;

  LatticeVector as_vector() const {
    return LatticeVector::from_integers(mukai_lattice_instance(), coords);
  }

  static const LatticePtr &mukai_lattice_instance() {
    static const LatticePtr l = mukai_lattice();
    return l;
  }
};

constexpr std::size_t k3_rank = 22;
constexpr std::size_t mukai_rank = 24;

/// Primitive isometric embedding NS ↪ Λ_K3; rows are images of the NS basis.
class NSEmbedding {
public:
  NSEmbedding(LatticePtr ns, IntMatrix images) : ns_(std::move(ns)), images_(std::move(images)) {
    detail::require(images_.rows() == ns_->rank() && images_.cols() == k3_rank,
                    "embedding matrix must be rank(NS) x 22");
    detail::require(images_ * k3_lattice()->gram() * images_.transpose() == ns_->gram(),
                    "embedding does not preserve the NS Gram matrix");
    auto snf = smith_normal_form(images_);
    for (const auto &d : snf.diagonal) detail::require(d == 1, "embedding is not primitive");
  }

  const LatticePtr &ns() const { return ns_; }
  const IntMatrix &images() const { return images_; }

  EmbeddedMukaiVector embed(const MukaiVector &v) const {
    detail::require(same_lattice(v.ns(), ns_), "Mukai vector is not over the embedded NS");
    detail::require(v.is_integral(), "only integral Mukai vectors embed in the Mukai lattice");
    std::vector<Integer> coords(mukai_rank);
    auto xi = v.v1().integer_coords();
    for (std::size_t i = 0; i < xi.size(); ++i)
      for (std::size_t j = 0; j < k3_rank; ++j) coords[j] += xi[i] * images_(i, j);
    coords[k3_rank] = v.v0().get_num();
    coords[k3_rank + 1] = -v.v2().get_num();
    return {std::move(coords), v};
  }

private:
  LatticePtr ns_;
  IntMatrix images_;
};

/// Standard embeddings into the U summands of Λ_K3: <2k> ↦ e1 + k f1 and
/// diag(2a, 2b) ↦ {e1 + a f1, e2 + b f2}.
inline NSEmbedding standard_embedding(const LatticePtr &ns) {
  const IntMatrix &g = ns->gram();
  auto half = [](const Integer &x) {
    detail::require(x != 0 && x % 2 == 0, "standard embedding needs nonzero even diagonal entries");
    return Integer(x / 2);
  };
  IntMatrix images(ns->rank(), k3_rank);
  if (ns->rank() == 1) {
    images(0, 0) = 1;
    images(0, 1) = half(g(0, 0));
  } else if (ns->rank() == 2 && g.is_diagonal()) {
    images(0, 0) = 1;
    images(0, 1) = half(g(0, 0));
    images(1, 2) = 1;
    images(1, 3) = half(g(1, 1));
  } else {
    throw invalid_input("no standard embedding for this NS lattice; supply one explicitly");
  }
  return {ns, std::move(images)};
}

struct H2Lattice {
  LatticePtr lattice;        ///< v^⊥ (v² > 0) or a complement of Zv in v^⊥ (v² = 0)
  IntMatrix basis;           ///< rows in Mukai-lattice coordinates
  Signature signature;
  std::vector<Integer> discriminant_group;
  bool quotient;
};

/// H²(M) as a lattice: v^⊥ for v² > 0, v^⊥/Zv for v² = 0.
inline H2Lattice h2_lattice(const EmbeddedMukaiVector &v) {
  detail::require(v.coords.size() == mukai_rank, "embedded Mukai vector must have 24 coordinates");
  detail::require(mukaikit::content(std::span<const Integer>(v.coords)) == 1, "Mukai vector must be primitive");
  const auto &mukai = EmbeddedMukaiVector::mukai_lattice_instance();
  auto vec = v.as_vector();
  Rational v2 = square(vec);
  if (v2 < 0) throw hypothesis_violation("h2_lattice needs v^2 >= 0");

  auto perp = orthogonal_complement(mukai, {vec});
  if (v2 > 0) {
    auto sig = perp.lattice->signature();
    return {perp.lattice, perp.basis, sig, discriminant_group(*perp.lattice), false};
  }

  // v lies in the radical of v^⊥; split Zv off with a unimodular change of basis.
  const IntMatrix &k = perp.basis;
  RatMatrix kr = to_rational(k);
  RatMatrix gram_inv = inverse(kr * kr.transpose());
  std::vector<Rational> vr(v.coords.begin(), v.coords.end());
  auto kv = kr * std::span<const Rational>(vr);
  auto c = gram_inv * std::span<const Rational>(kv);
  IntMatrix row(1, c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!is_integer(c[j])) throw std::logic_error("v is not in its own orthogonal complement");
    row(0, j) = c[j].get_num();
  }
  auto snf = smith_normal_form(row);
  IntMatrix change = unimodular_inverse(snf.right);
  IntMatrix complement = change.row_block(1, change.rows() - 1) * k;
  auto lattice = induced_lattice(complement, mukai->gram(), "v-perp / Zv");
  auto sig = lattice->signature();
  return {lattice, complement, sig, discriminant_group(*lattice), true};
}

struct ProjectivityWitness {
  bool projective;
  bool surface_projective;
  std::vector<MukaiVector> generators; ///< e^{ξ/r}(0, ζ_i, 0) for an NS basis, then e^{ξ/r}(2r², 0, v²)
  RatMatrix gram;
  Signature signature;
  Rational extra_square;               ///< (e^{ξ/r}(2r², 0, v²))² = -4r²v²
};

/// Positivity of the (1,1)-part of v^⊥ ⊗ Q, spanned by e^{ξ/r}·(NS_Q ⊕ Q(2r², 0, v²)).
inline ProjectivityWitness projectivity_check(const K3Model &m, const MukaiVector &v) {
  detail::require(same_lattice(v.ns(), m.ns()), "Mukai vector is not over the model's NS");
  if (v.v0() < 2) throw hypothesis_violation("projectivity check needs r >= 2");
  Rational v2 = mukai_square(v);
  if (v2 < 0) throw hypothesis_violation("projectivity check needs v^2 >= 0");

  const Rational r = v.v0();
  auto twist = exp_class(v.v1() / r);
  const auto &ns = m.ns();
  std::vector<MukaiVector> gens;
  for (std::size_t i = 0; i < ns->rank(); ++i)
    gens.push_back(mukai_product(twist, MukaiVector(Rational(0), LatticeVector::basis(ns, i), Rational(0))));
  gens.push_back(mukai_product(twist, MukaiVector(2 * r * r, LatticeVector::zero(ns), v2)));

  for (const auto &g : gens)
    if (mukai_pairing(g, v) != 0) throw std::logic_error("generator of (v-perp)^{1,1} is not orthogonal to v");

  RatMatrix gram(gens.size(), gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) gram(i, j) = mukai_pairing(gens[i], gens[j]);
  auto sig = rational_signature(gram);
  Rational extra = gram(gens.size() - 1, gens.size() - 1);
  return {sig.positive >= 1, is_projective_surface(m), std::move(gens), std::move(gram), sig, extra};
}

/// ch(F^∨)/√ch(F⊗F^∨) for a sheaf F with Mukai vector v, computed from v alone.
inline MukaiVector transfer_multiplier(const MukaiVector &v) {
  detail::require(v.is_integral() && v.v0() >= 1, "transfer needs an integral v with r >= 1");
  auto ch = chern_character(v);
  auto ch_dual = dual(ch);
  auto root = mukai_sqrt(mukai_product(ch, ch_dual));
  auto m = mukai_quotient(ch_dual, root);
  if (!(mukai_product(m, root) == ch_dual)) throw std::logic_error("transfer multiplier: inexact division");
  return m;
}

/// β ↦ β · ch(F^∨)/√ch(F⊗F^∨), without the v^⊥ membership check.
inline MukaiVector transfer_image(const MukaiVector &v, const MukaiVector &beta) {
  return mukai_product(beta, transfer_multiplier(v));
}

/// h: v^⊥ → w^⊥, an isometry.
inline MukaiVector transfer_isometry(const MukaiVector &v, const MukaiVector &beta) {
  if (mukai_pairing(beta, v) != 0) throw invalid_input("transfer_isometry: beta is not in v-perp");
  return transfer_image(v, beta);
}

struct IrreducibilityVerdict {
  bool irreducible;
  std::optional<Rational> min_lower_bound; ///< min over splittings of -(r2ξ/r - ξ2)²/(2 r1 r2)
  std::optional<Rational> proof_bound;     ///< -ξ²/(2r²(r-1))
  std::optional<std::pair<Integer, Integer>> witness; ///< (r1, n2) with bound ≤ Δ
};

/// Brute force over splittings r = r1 + r2, ξ2 = n2 L of a sheaf on a surface
/// with NS = Z L, L² = xi_square < 0.
inline IrreducibilityVerdict irreducibility_oracle(const Integer &r, const Integer &xi_square, const Rational &delta) {
  detail::require(r >= 1, "rank must be >= 1");
  if (xi_square >= 0) throw invalid_input("irreducibility oracle needs NS = Z L with L^2 < 0");
  if (r == 1) return {true, std::nullopt, std::nullopt, std::nullopt};

  const Rational rr(r);
  std::optional<Rational> best;
  std::optional<std::pair<Integer, Integer>> best_at;
  for (Integer r1 = 1; r1 < r; ++r1) {
    Integer r2 = r - r1;
    Rational centre = Rational(r2) / rr;
    // the bound is convex in n2 with minimum at r2/r ∈ (0,1)
    for (Integer n2 : {floor(centre), ceil(centre)}) {
      Rational offset = centre - Rational(n2);
      Rational lb = -Rational(xi_square) * offset * offset / (2 * Rational(r1) * Rational(r2));
      if (!best || lb < *best) {
        best = lb;
        best_at = std::make_pair(r1, n2);
      }
    }
  }
  Rational proof = -Rational(xi_square) / (2 * rr * rr * (rr - 1));
  bool irreducible = *best > delta;
  return {irreducible, best, proof, irreducible ? std::nullopt : best_at};
}

struct ExistenceVerdict {
  bool accepted = false;
  std::vector<std::string> failed;
  std::optional<Integer> xi_square;
  std::optional<Rational> delta;
  std::optional<Integer> c2;
  std::optional<MukaiVector> v;
  std::optional<Integer> dim;
  std::optional<IrreducibilityVerdict> irreducibility;
};

namespace hypothesis {
inline const std::string rank_positive = "r >= 1";
inline const std::string d_even = "d even";
inline const std::string d_range = "d in [0, 2r-2]";
inline const std::string g_bound = "g <= -(r^2-1)(r-1)";
inline const std::string g_congruence = "g congruent to d/2 mod r";
} // namespace hypothesis

/// Hypotheses and invariants of the cyclic-NS existence statement for
/// irreducible rank-r bundles with 2r²Δ - 2(r²-1) = d.
inline ExistenceVerdict bundle_existence_check(const Integer &r, const Integer &d, const Integer &g) {
  ExistenceVerdict out;
  if (r < 1) {
    out.failed.push_back(hypothesis::rank_positive);
    return out;
  }
  bool even = d % 2 == 0;
  if (!even) out.failed.push_back(hypothesis::d_even);
  if (d < 0 || d > 2 * r - 2) out.failed.push_back(hypothesis::d_range);
  if (g > -(r * r - 1) * (r - 1)) out.failed.push_back(hypothesis::g_bound);
  if (even) {
    Integer diff = g - d / 2;
    Integer rem;
    mpz_fdiv_r(rem.get_mpz_t(), diff.get_mpz_t(), r.get_mpz_t());
    if (rem != 0) out.failed.push_back(hypothesis::g_congruence);
  }
  if (!out.failed.empty()) return out;

  const Rational rr(r);
  Integer xi2 = 2 * g - 2;
  Rational delta = (Rational(d) + 2 * rr * rr - 2) / (2 * rr * rr);
  Rational c2 = rr * delta + (rr - 1) * Rational(xi2) / (2 * rr);
  if (!is_integer(c2)) throw std::logic_error("c2 not integral despite the congruence hypothesis");

  auto ns = diagonal_lattice({xi2});
  auto xi = LatticeVector::basis(ns, 0);
  MukaiVector v(rr, xi, Rational(xi2) / 2 - c2 + rr);
  if (discriminant(v) != delta) throw std::logic_error("discriminant routes disagree");

  out.accepted = true;
  out.xi_square = xi2;
  out.delta = delta;
  out.c2 = c2.get_num();
  out.dim = Rational(mukai_square(v) + 2).get_num();
  out.v = std::move(v);
  out.irreducibility = irreducibility_oracle(r, xi2, delta);
  return out;
}

struct ModuliReport {
  bool valid = false;
  std::vector<std::string> reasons;
  Rational v_square;
  std::optional<Rational> discriminant;
  std::optional<Integer> dim;
  std::optional<Integer> n;
  std::optional<std::string> deformation_class;
  std::optional<int> b2;
  bool rigid = false;
  bool generic = false;
  std::optional<bool> projective_moduli;
  bool projective_surface = false;
  std::vector<std::string> interpretation_notes;
};

/// Verdicts for M_v(S, ω): hypotheses, dimension, b2, deformation type and
/// projectivity. Hypothesis violations are listed in `reasons`.
inline ModuliReport moduli_report(const K3Model &m, const MukaiVector &v, const H11Class &omega, unsigned threads = 1) {
  detail::require(same_lattice(v.ns(), m.ns()), "Mukai vector is not over the model's NS");
  ModuliReport rep;
  rep.v_square = mukai_square(v);
  rep.projective_surface = is_projective_surface(m);
  rep.interpretation_notes.push_back("(r, xi) = 1 is read as gcd(r, content(xi)) = 1");

  if (!v.is_integral()) rep.reasons.push_back("v must be integral");
  if (v.v0() < 2) rep.reasons.push_back("r >= 2 required");
  if (v.v0() != 0) rep.discriminant = discriminant(v);
  if (v.is_integral() && v.v0() >= 2) {
    if (v.v1().is_zero())
      rep.reasons.push_back("gcd(r, content(xi)) = 1 fails: xi = 0");
    else if (gcd(v.v0().get_num(), content(v.v1())) != 1)
      rep.reasons.push_back("gcd(r, content(xi)) = 1 fails");
  }
  if (is_integer(rep.v_square) && rep.v_square.get_num() % 2 != 0) rep.reasons.push_back("v^2 must be even");
  if (rep.v_square < -2) rep.reasons.push_back("v^2 >= -2 required");

  if (!is_polarization(m, omega)) {
    rep.reasons.push_back("omega is not a polarization");
  } else if (v.v0() >= 1) {
    rep.generic = is_generic(m, v, omega, threads);
    if (!rep.generic) rep.reasons.push_back("omega is not v-generic");
  }
  rep.valid = rep.reasons.empty();

  if (rep.v_square >= -2 && is_integer(rep.v_square)) rep.dim = Rational(rep.v_square + 2).get_num();
  if (rep.v_square == -2) {
    rep.rigid = true;
    rep.interpretation_notes.push_back("v^2 = -2: zero-dimensional (rigid) moduli, no Hilbert-scheme claims");
  }
  if (rep.v_square >= 0 && rep.valid) {
    Integer n = Rational(rep.v_square / 2 + 1).get_num();
    rep.n = n;
    rep.b2 = rep.v_square > 0 ? 23 : 22;
    rep.deformation_class = "Hilb^" + n.get_str() + " of K3";
    rep.projective_moduli = projectivity_check(m, v).projective;
    if (rep.v_square == 0)
      rep.interpretation_notes.push_back("v^2 = 0: H^2 is v-perp / Zv of rank 22, so b2 = 22");
    rep.interpretation_notes.push_back("genericity is decided exactly for the rational class omega");
  }
  return rep;
}

} // namespace mukaikit
