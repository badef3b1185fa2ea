#pragma once

// Finite-rank model of H^{1,1} of a K3 surface: NS plus an optional block
// standing in for the transcendental part, a positive-cone reference class
// and user-listed curve classes cutting out the polarization cone.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mukaikit/lattice.hpp"

namespace mukaikit {

/// Class in NS_Q ⊕ T_Q; the two blocks are orthogonal.
struct H11Class {
  LatticeVector ns_part;
  LatticeVector t_part;

  friend H11Class operator+(const H11Class &a, const H11Class &b) {
    return {a.ns_part + b.ns_part, a.t_part + b.t_part};
  }
  friend H11Class operator-(const H11Class &a, const H11Class &b) {
    return {a.ns_part - b.ns_part, a.t_part - b.t_part};
  }
  friend H11Class operator-(const H11Class &a) { return {-a.ns_part, -a.t_part}; }
  friend H11Class operator*(const Rational &s, const H11Class &a) { return {a.ns_part * s, a.t_part * s}; }
  friend bool operator==(const H11Class &, const H11Class &) = default;
};

inline Rational pairing(const H11Class &x, const H11Class &y) {
  return pairing(x.ns_part, y.ns_part) + pairing(x.t_part, y.t_part);
}

inline Rational square(const H11Class &x) { return pairing(x, x); }

/// NS classes pair only with the NS block.
inline Rational pairing(const LatticeVector &ns_class, const H11Class &omega) {
  return pairing(ns_class, omega.ns_part);
}

class K3Model {
public:
  /// Validates: ns ⊕ t11 nondegenerate with exactly one positive direction,
  /// ns has at most one, reference_positive² > 0, curve classes integral in ns.
  K3Model(LatticePtr ns, LatticePtr t11, std::vector<LatticeVector> curve_classes, H11Class reference_positive)
      : ns_(std::move(ns)), t11_(t11 ? std::move(t11) : make_lattice(IntMatrix(0, 0), "0")),
        curves_(std::move(curve_classes)), reference_(std::move(reference_positive)) {
    auto total = direct_sum({ns_, t11_});
    detail::require(!total->is_degenerate(), "NS ⊕ T11 must be nondegenerate");
    auto sig = total->signature();
    detail::require(sig.positive == 1, "NS ⊕ T11 must have exactly one positive direction");
    detail::require(ns_->signature().positive <= 1, "NS has more than one positive direction");
    detail::require(same_lattice(reference_.ns_part.lattice(), ns_) && same_lattice(reference_.t_part.lattice(), t11_),
                    "reference class does not live in NS ⊕ T11");
    detail::require(square(reference_) > 0, "reference class must have positive square");
    for (const auto &c : curves_) {
      detail::require(same_lattice(c.lattice(), ns_), "curve class is not in NS");
      detail::require(c.is_integral(), "curve class must be integral");
    }
  }

  const LatticePtr &ns() const { return ns_; }
  const LatticePtr &t11() const { return t11_; }
  const std::vector<LatticeVector> &curve_classes() const { return curves_; }
  const H11Class &reference_positive() const { return reference_; }

  H11Class make_class(std::vector<Rational> ns_coords, std::vector<Rational> t_coords = {}) const {
    if (t_coords.empty()) t_coords.resize(t11_->rank());
    return {LatticeVector(ns_, std::move(ns_coords)), LatticeVector(t11_, std::move(t_coords))};
  }

  H11Class from_ns(const LatticeVector &x) const {
    detail::require(same_lattice(x.lattice(), ns_), "class is not in NS");
    return {x, LatticeVector::zero(t11_)};
  }

private:
  LatticePtr ns_;
  LatticePtr t11_;
  std::vector<LatticeVector> curves_;
  H11Class reference_;
};

/// S is projective iff NS represents a positive square.
inline bool is_projective_surface(const Lattice &ns) { return ns.signature().positive >= 1; }
inline bool is_projective_surface(const K3Model &m) { return is_projective_surface(*m.ns()); }

/// ω² > 0, ω in the component of the reference class, ω·C > 0 for listed curves.
inline bool is_polarization(const K3Model &m, const H11Class &omega) {
  if (!same_lattice(omega.ns_part.lattice(), m.ns()) || !same_lattice(omega.t_part.lattice(), m.t11()))
    throw invalid_input("class does not live in this model");
  if (square(omega) <= 0) return false;
  if (pairing(omega, m.reference_positive()) <= 0) return false;
  for (const auto &c : m.curve_classes())
    if (pairing(c, omega) <= 0) return false;
  return true;
}

inline void require_polarization(const K3Model &m, const H11Class &omega, const std::string &what = "omega") {
  if (!is_polarization(m, omega)) throw hypothesis_violation(what + " is not a polarization of the model");
}

struct NSProjection {
  LatticeVector omega_ns;
  bool polarization; ///< ω_NS passes is_polarization as a class with zero T-part
};

/// ω ↦ ω_NS; ξ·ω = ξ·ω_NS for every ξ in NS because the blocks are orthogonal.
inline NSProjection project_to_ns(const K3Model &m, const H11Class &omega) {
  require_polarization(m, omega);
  return {omega.ns_part, is_polarization(m, m.from_ns(omega.ns_part))};
}

} // namespace mukaikit
