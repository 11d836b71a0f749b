#pragma once

// Even lattices as values: a symmetric even Gram matrix plus basis labels.
// Vectors carry exact rational coordinates in the owning lattice's basis;
// integral coordinates mean honest lattice elements, rationals appear only
// in dual / glue contexts.

#include <string>
#include <vector>

#include "k3mds/normal_forms.hpp"

namespace k3mds {

struct Lattice {
  IntMatrix gram;
  std::vector<std::string> basis_names;
  std::string label;

  Lattice() = default;
  Lattice(IntMatrix g, std::vector<std::string> names, std::string lab)
      : gram(std::move(g)), basis_names(std::move(names)), label(std::move(lab)) {
    validate();
  }

  std::size_t rank() const { return gram.rows(); }

  void validate() const {
    if (!gram.is_symmetric()) throw std::invalid_argument("lattice: Gram matrix not symmetric");
    for (std::size_t i = 0; i < gram.rows(); ++i)
      if (gram(i, i) % 2 != 0)
        throw std::invalid_argument("lattice: Gram diagonal not even at index " +
                                    std::to_string(i));
    if (basis_names.size() != gram.rows())
      throw std::invalid_argument("lattice: basis name count != rank");
  }
};

struct LatticeVector {
  std::vector<Rat> coords;

  LatticeVector() = default;
  explicit LatticeVector(std::vector<Rat> c) : coords(std::move(c)) {}
  explicit LatticeVector(const std::vector<Int>& c) : coords(to_rat(c)) {}

  std::size_t size() const { return coords.size(); }

  bool is_integral() const {
    for (const auto& x : coords)
      if (!is_integer(x)) return false;
    return true;
  }

  std::vector<Int> integral() const { return to_int(coords); }

  bool is_zero() const {
    for (const auto& x : coords)
      if (x != 0) return false;
    return true;
  }

  LatticeVector operator+(const LatticeVector& o) const {
    LatticeVector r = *this;
    for (std::size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
    return r;
  }
  LatticeVector operator-(const LatticeVector& o) const {
    LatticeVector r = *this;
    for (std::size_t i = 0; i < coords.size(); ++i) r.coords[i] -= o.coords[i];
    return r;
  }
  LatticeVector operator-() const {
    LatticeVector r = *this;
    for (auto& x : r.coords) x = -x;
    return r;
  }
  friend LatticeVector operator*(const Rat& s, const LatticeVector& v) {
    LatticeVector r = v;
    for (auto& x : r.coords) x *= s;
    return r;
  }
  bool operator==(const LatticeVector& o) const { return coords == o.coords; }
};

inline LatticeVector basis_vector(const Lattice& l, std::size_t i) {
  std::vector<Rat> c(l.rank());
  c.at(i) = 1;
  return LatticeVector(std::move(c));
}

inline Rat pairing(const Lattice& l, const LatticeVector& a, const LatticeVector& b) {
  if (a.size() != l.rank() || b.size() != l.rank())
    throw std::invalid_argument("pairing: vector length != rank");
  return dot(a.coords * to_rat(l.gram), b.coords);
}

inline Rat norm(const Lattice& l, const LatticeVector& v) { return pairing(l, v, v); }

inline Lattice direct_sum(const Lattice& a, const Lattice& b) {
  std::vector<std::string> names = a.basis_names;
  names.insert(names.end(), b.basis_names.begin(), b.basis_names.end());
  return Lattice(block_diag(a.gram, b.gram), std::move(names), a.label + "+" + b.label);
}

// L(m): multiply the Gram matrix by m. Negative m flips the signature.
inline Lattice twist(const Lattice& l, const Int& m) {
  if (m == 0) throw std::invalid_argument("twist: multiplier must be nonzero");
  IntMatrix g = l.gram;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= m;
  return Lattice(g, l.basis_names, l.label + "(" + m.str() + ")");
}

struct LatticeInvariants {
  std::size_t rank = 0;
  std::size_t sig_positive = 0, sig_negative = 0, sig_zero = 0;
  Int determinant;       // signed
  bool even = true;      // checked at construction, reported for completeness
  bool hyperbolic = false;
  bool nondegenerate = false;
};

inline LatticeInvariants invariants(const Lattice& l) {
  LatticeInvariants inv;
  inv.rank = l.rank();
  auto d = congruence_diagonalize(l.gram);
  inv.sig_positive = d.positive;
  inv.sig_negative = d.negative;
  inv.sig_zero = d.zero;
  inv.determinant = det(l.gram);
  inv.nondegenerate = (d.zero == 0);
  inv.hyperbolic = (d.positive == 1 && d.zero == 0 && inv.rank >= 1);
  return inv;
}

inline bool is_hyperbolic(const Lattice& l) { return invariants(l).hyperbolic; }

inline bool is_negative_definite(const Lattice& l) {
  auto inv = invariants(l);
  return inv.sig_positive == 0 && inv.sig_zero == 0;
}

}  // namespace k3mds
