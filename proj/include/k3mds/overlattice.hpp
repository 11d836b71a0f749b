#pragma once

// Even overlattices via isotropic glue classes, orthogonal complements, and
// saturations. Overlattices of prime index r correspond to order-r classes
// x of A_L with q(x) = 0 in Q/2Z; the new lattice is rebuilt through the
// Hermite form of the base basis together with the glue lift.

#include <functional>
#include <string>
#include <vector>

#include "k3mds/discriminant.hpp"

namespace k3mds {

struct OverlatticeResult {
  Lattice lattice;
  std::vector<std::vector<Rat>> glues;  // all glue classes landing in this genus class
  Int index;
  RatMatrix result_in_base;  // rows: result basis in base coordinates
  IntMatrix base_in_result;  // rows: base basis in result coordinates
  bool integral_q = false;
  GenusInvariants genus;
  bool dedup_uncertain = false;  // kept separate because genus comparison was inconclusive
};

struct OverlatticeEnumeration {
  std::vector<OverlatticeResult> classes;
  long total_isotropic_classes = 0;  // order-r isotropic subgroups before dedup
};

namespace detail {

inline bool is_prime_small(const Int& r) {
  if (r < 2) return false;
  for (Int p = 2; p * p <= r; ++p)
    if (r % p == 0) return false;
  return true;
}

// Build base + Z*glue as a lattice; glue has denominators dividing r.
inline OverlatticeResult build_overlattice(const Lattice& base, const std::vector<Rat>& glue,
                                           const Int& r) {
  std::size_t n = base.rank();
  IntMatrix rows(n + 1, n);
  for (std::size_t i = 0; i < n; ++i) rows(i, i) = r;
  for (std::size_t j = 0; j < n; ++j) {
    Rat scaled = Rat(r) * glue[j];
    rows(n, j) = to_int(scaled);
  }
  auto h = hermite_normal_form(rows);
  if (h.rank() != n) throw std::logic_error("build_overlattice: glue drops rank");
  RatMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = Rat(h.H(i, j)) / Rat(r);

  RatMatrix gram_rat = b * to_rat(base.gram) * b.transpose();
  IntMatrix gram = to_int(gram_rat);  // throws if the glue class is not integral against base

  OverlatticeResult out;
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "b" + std::to_string(i + 1);
  std::string glue_str;
  for (std::size_t j = 0; j < n; ++j) glue_str += (j ? "," : "") + to_string(glue[j]);
  out.lattice = Lattice(gram, names, base.label + "+[" + glue_str + "]");
  out.glues = {glue};
  out.result_in_base = b;
  out.base_in_result = to_int(inverse(b));
  out.index = abs(det(out.base_in_result));
  if (out.index != r) throw std::logic_error("build_overlattice: index != r");
  out.genus = genus_invariants(out.lattice);
  out.integral_q = out.genus.fqf->q_is_integral();
  return out;
}

}  // namespace detail

// glue_filter, when given, keeps only glue classes it accepts (it sees the
// glue lift reduced into [0,1)^n); the returned class count is post-filter.
inline OverlatticeEnumeration even_overlattices(
    const Lattice& base, const Int& r, const FqfIsoConfig& cfg = {},
    const std::function<bool(const std::vector<Rat>&)>& glue_filter = {}) {
  if (!detail::is_prime_small(r))
    throw std::invalid_argument("even_overlattices: index must be prime");
  auto fqf = discriminant_form(base);
  OverlatticeEnumeration out;

  // canonical representatives of order-r subgroups: lexicographically least
  // generator among the r-1 nonzero multiples
  std::vector<FqfElement> reps;
  for (const auto& x : fqf.elements()) {
    if (fqf.order_of(x) != r) continue;
    if (fqf.q(x) != 0) continue;  // isotropic: q(x) = 0 in Q/2Z (values live in [0,2))
    bool least = true;
    for (Int k = 2; k < r && least; ++k)
      if (fqf.scale(k, x) < x) least = false;
    if (least) reps.push_back(x);
  }
  if (glue_filter) {
    std::vector<FqfElement> kept;
    for (const auto& x : reps) {
      std::vector<Rat> glue = fqf.lift(x);
      for (auto& c : glue) c = mod1z(c);
      if (glue_filter(glue)) kept.push_back(x);
    }
    reps.swap(kept);
  }
  out.total_isotropic_classes = static_cast<long>(reps.size());

  for (const auto& x : reps) {
    std::vector<Rat> glue = fqf.lift(x);
    for (auto& c : glue) c = mod1z(c);
    OverlatticeResult cand = detail::build_overlattice(base, glue, r);
    // q(glue) = 0 re-verified on the built lattice: evenness is checked by the
    // Lattice constructor, integrality by the to_int conversion above
    bool merged = false;
    for (auto& cls : out.classes) {
      if (cls.genus.key() != cand.genus.key()) continue;
      auto gv = genus_equal(cls.genus, cand.genus, cfg);
      if (gv.result == Tri::Yes) {
        cls.glues.push_back(glue);
        merged = true;
        break;
      }
      if (gv.result == Tri::Inconclusive) cand.dedup_uncertain = true;
    }
    if (!merged) out.classes.push_back(std::move(cand));
  }
  return out;
}

struct ComplementResult {
  Lattice lattice;
  IntMatrix embedding;  // rows: complement basis in ambient coordinates, saturated
  std::size_t span_rank = 0;
  bool span_degenerate = false;
};

inline ComplementResult orthogonal_complement(const Lattice& ambient,
                                              const std::vector<std::vector<Int>>& vectors) {
  std::size_t n = ambient.rank();
  for (const auto& v : vectors)
    if (v.size() != n)
      throw std::invalid_argument("orthogonal_complement: vector length != ambient rank");
  IntMatrix v = from_rows(vectors, n);
  IntMatrix pairing_rows = v * ambient.gram;
  auto basis = integer_kernel(pairing_rows);
  IntMatrix k = from_rows(basis, n);
  IntMatrix gram = k * ambient.gram * k.transpose();

  ComplementResult out;
  std::vector<std::string> names(basis.size());
  for (std::size_t i = 0; i < names.size(); ++i) names[i] = "b" + std::to_string(i + 1);
  out.lattice = Lattice(gram, names, ambient.label + "-perp");
  out.embedding = k;
  out.span_rank = rank(v);
  IntMatrix span_gram = v * ambient.gram * v.transpose();
  out.span_degenerate = (vectors.empty() ? false : det(span_gram) == 0);
  // every basis vector pairs to zero against every input vector
  IntMatrix cross = v * ambient.gram * k.transpose();
  if (!cross.is_zero()) throw std::logic_error("orthogonal_complement: nonzero pairing");
  return out;
}

inline ComplementResult orthogonal_complement(const Lattice& ambient,
                                              const std::vector<LatticeVector>& vectors) {
  std::vector<std::vector<Int>> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (!v.is_integral())
      throw std::invalid_argument("orthogonal_complement: vectors must be integral");
    rows.push_back(v.integral());
  }
  return orthogonal_complement(ambient, rows);
}

struct SaturationResult {
  Lattice lattice;      // the saturated sublattice with its restricted Gram
  IntMatrix basis;      // rows: saturation basis in ambient coordinates
  Int index;            // [saturation : span]
};

inline SaturationResult saturation_and_index(const Lattice& ambient,
                                             const std::vector<std::vector<Int>>& sub) {
  std::size_t n = ambient.rank();
  if (sub.empty()) throw std::invalid_argument("saturation_and_index: empty input");
  for (const auto& v : sub)
    if (v.size() != n)
      throw std::invalid_argument("saturation_and_index: vector length != ambient rank");
  IntMatrix s = from_rows(sub, n);
  auto snf = smith_normal_form(s);
  std::size_t k = sub.size();
  for (std::size_t i = 0; i < k; ++i)
    if (i >= std::min(s.rows(), s.cols()) || snf.S(i, i) == 0)
      throw std::invalid_argument("saturation_and_index: dependent input vectors");

  // row span of S = { sum sigma_i Z * row_i(V^{-1}) }; its saturation is the
  // span of those rows of V^{-1} with coefficient 1
  IntMatrix vinv = unimodular_inverse(snf.V);
  IntMatrix basis(k, n);
  Int index(1);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < n; ++j) basis(i, j) = vinv(i, j);
    index *= snf.S(i, i);
  }
  auto h = hermite_normal_form(basis);
  for (const auto& row : sub)
    if (!in_row_span(h, row))
      throw std::logic_error("saturation_and_index: input escapes the saturation");

  SaturationResult out;
  std::vector<std::string> names(k);
  for (std::size_t i = 0; i < k; ++i) names[i] = "b" + std::to_string(i + 1);
  out.lattice = Lattice(basis * ambient.gram * basis.transpose(), names,
                        ambient.label + "-saturation");
  out.basis = basis;
  out.index = index;
  return out;
}

inline SaturationResult saturation_and_index(const Lattice& ambient,
                                             const std::vector<LatticeVector>& sub) {
  std::vector<std::vector<Int>> rows;
  rows.reserve(sub.size());
  for (const auto& v : sub) rows.push_back(v.integral());
  return saturation_and_index(ambient, rows);
}

}  // namespace k3mds
