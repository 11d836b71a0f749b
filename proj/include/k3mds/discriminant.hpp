#pragma once

// Discriminant groups A_L = L*/L with their quadratic form q: A_L -> Q/2Z and
// bilinear form b: A_L -> Q/Z, finite-form isomorphism testing, and
// genus-invariant equality of even lattices.
//
// Elements of A_L are coordinate tuples over the invariant factors; lifts
// into L* are carried as rational vectors in the basis of L, so q and b are
// evaluated exactly.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "k3mds/lattice.hpp"

namespace k3mds {

struct FqfElement {
  std::vector<Int> a;  // a_i mod d_i
  bool operator==(const FqfElement& o) const { return a == o.a; }
  bool operator<(const FqfElement& o) const { return a < o.a; }
};

class FiniteQuadraticForm {
 public:
  std::vector<Int> invariant_factors;          // d_1 | d_2 | ..., all > 1
  std::vector<std::vector<Rat>> generator_lifts;  // coords in the basis of L
  std::size_t sig_positive = 0, sig_negative = 0;  // of the source lattice

  Int group_order() const {
    Int o(1);
    for (const auto& d : invariant_factors) o *= d;
    return o;
  }

  std::size_t ngens() const { return invariant_factors.size(); }

  FqfElement zero() const { return {std::vector<Int>(ngens())}; }

  FqfElement reduce(std::vector<Int> a) const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] %= invariant_factors[i];
      if (a[i] < 0) a[i] += invariant_factors[i];
    }
    return {std::move(a)};
  }

  FqfElement add(const FqfElement& x, const FqfElement& y) const {
    std::vector<Int> a(ngens());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = x.a[i] + y.a[i];
    return reduce(std::move(a));
  }

  FqfElement scale(const Int& n, const FqfElement& x) const {
    std::vector<Int> a(ngens());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = n * x.a[i];
    return reduce(std::move(a));
  }

  Int order_of(const FqfElement& x) const {
    Int o(1);
    for (std::size_t i = 0; i < ngens(); ++i) {
      Int d = invariant_factors[i];
      o = lcm(o, d / gcd(d, x.a[i]));
    }
    return o;
  }

  // Lift of an element into L* (rational coordinates in the basis of L).
  std::vector<Rat> lift(const FqfElement& x) const {
    std::vector<Rat> v(dim());
    for (std::size_t i = 0; i < ngens(); ++i) {
      if (x.a[i] == 0) continue;
      for (std::size_t k = 0; k < v.size(); ++k) v[k] += Rat(x.a[i]) * generator_lifts[i][k];
    }
    return v;
  }

  Rat q(const FqfElement& x) const {
    if (fast_path_()) {
      long long s = 0;
      std::size_t k = ngens();
      for (std::size_t i = 0; i < k; ++i) {
        if (fast_a_(x, i) == 0) continue;
        for (std::size_t j = 0; j < k; ++j)
          s += fast_a_(x, i) * fast_a_(x, j) % (2 * fast_den_) * fast_pnum_[i * k + j];
      }
      long long m = 2 * fast_den_;
      s %= m;
      if (s < 0) s += m;
      return Rat(Int(s)) / Rat(Int(fast_den_));
    }
    Rat s(0);
    for (std::size_t i = 0; i < ngens(); ++i)
      for (std::size_t j = 0; j < ngens(); ++j)
        if (x.a[i] != 0 && x.a[j] != 0) s += Rat(x.a[i] * x.a[j]) * pair_(i, j);
    return mod2z(s);
  }

  Rat b(const FqfElement& x, const FqfElement& y) const {
    if (fast_path_()) {
      long long s = 0;
      std::size_t k = ngens();
      for (std::size_t i = 0; i < k; ++i) {
        if (fast_a_(x, i) == 0) continue;
        for (std::size_t j = 0; j < k; ++j)
          s += fast_a_(x, i) * fast_a_(y, j) % fast_den_ * fast_pnum_[i * k + j];
      }
      s %= fast_den_;
      if (s < 0) s += fast_den_;
      return Rat(Int(s)) / Rat(Int(fast_den_));
    }
    Rat s(0);
    for (std::size_t i = 0; i < ngens(); ++i)
      for (std::size_t j = 0; j < ngens(); ++j)
        if (x.a[i] != 0 && y.a[j] != 0) s += Rat(x.a[i] * y.a[j]) * pair_(i, j);
    return mod1z(s);
  }

  bool q_is_integral() const {
    for (const auto& [key, count] : value_histogram())
      if (!is_integer(key.second)) return false;
    return true;
  }

  // All group elements (including zero), in odometer order.
  std::vector<FqfElement> elements() const {
    std::vector<FqfElement> out;
    FqfElement cur = zero();
    while (true) {
      out.push_back(cur);
      std::size_t i = 0;
      while (i < ngens()) {
        if (++cur.a[i] < invariant_factors[i]) break;
        cur.a[i] = 0;
        ++i;
      }
      if (i == ngens()) break;
    }
    return out;
  }

  // Multiset of (element order, q value): the cheap isomorphism invariant.
  const std::map<std::pair<Int, Rat>, long>& value_histogram() const {
    if (!histogram_cache_) {
      std::map<std::pair<Int, Rat>, long> h;
      for (const auto& x : elements()) ++h[{order_of(x), q(x)}];
      histogram_cache_ = std::move(h);
    }
    return *histogram_cache_;
  }

  std::size_t dim() const {
    return generator_lifts.empty() ? ambient_dim_ : generator_lifts.front().size();
  }

  // Internal: pairing matrix of the generator lifts under the source Gram.
  void set_pairings(RatMatrix p, std::size_t ambient_dim) {
    pairings_ = std::move(p);
    ambient_dim_ = ambient_dim;
  }

 private:
  Rat pair_(std::size_t i, std::size_t j) const { return pairings_(i, j); }

  static long long fast_a_(const FqfElement& x, std::size_t i) {
    return static_cast<long long>(x.a[i]);
  }

  // Pairings over a common denominator in int64, when everything fits; the
  // exact rational path stays as the fallback.
  bool fast_path_() const {
    if (fast_state_ == 0) {
      fast_state_ = -1;
      std::size_t k = ngens();
      const long long kLimit = 1LL << 21;
      Int den(1);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) den = lcm(den, denominator(pairings_(i, j)));
      Int maxfac = k == 0 ? Int(1) : invariant_factors.back();
      if (den < kLimit && maxfac < kLimit) {
        fast_den_ = static_cast<long long>(den);
        fast_pnum_.assign(k * k, 0);
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i)
          for (std::size_t j = 0; j < k; ++j) {
            Int num = numerator(pairings_(i, j)) * (den / denominator(pairings_(i, j)));
            num %= 2 * den;
            if (num < 0) num += 2 * den;
            if (num >= kLimit * 4) {
              ok = false;
              break;
            }
            fast_pnum_[i * k + j] = static_cast<long long>(num);
          }
        // worst-case |term| = maxfac^2 * pnum, summed k^2 times, must fit int64
        if (ok) {
          long double bound = static_cast<long double>(fast_den_) * 2 *
                              static_cast<long double>(fast_den_) * 2 * k * k;
          if (bound < 9e18L) fast_state_ = 1;
        }
      }
    }
    return fast_state_ == 1;
  }

  RatMatrix pairings_;
  std::size_t ambient_dim_ = 0;
  // lazily built speedups; share FiniteQuadraticForm values across threads by
  // copy, not by reference
  mutable int fast_state_ = 0;  // 0 unknown, 1 usable, -1 fallback
  mutable long long fast_den_ = 1;
  mutable std::vector<long long> fast_pnum_;
  mutable std::optional<std::map<std::pair<Int, Rat>, long>> histogram_cache_;
};

// A_L = L*/L for a nondegenerate even lattice, with generator lifts and the
// full quadratic/bilinear data.
inline FiniteQuadraticForm discriminant_form(const Lattice& l) {
  Int d = det(l.gram);
  if (d == 0) throw std::domain_error("discriminant_form: degenerate lattice");
  std::size_t n = l.rank();
  auto snf = smith_normal_form(l.gram);
  IntMatrix uinv = unimodular_inverse(snf.U);
  RatMatrix ginv = inverse(l.gram);

  FiniteQuadraticForm fqf;
  auto sig = congruence_diagonalize(l.gram);
  fqf.sig_positive = sig.positive;
  fqf.sig_negative = sig.negative;
  for (std::size_t i = 0; i < n; ++i) {
    if (snf.S(i, i) == 1) continue;
    fqf.invariant_factors.push_back(snf.S(i, i));
    // generator = class of G^{-1} U^{-1} e_i in L*/L, written in L's basis
    std::vector<Rat> lift = ginv * to_rat(uinv.col(i));
    fqf.generator_lifts.push_back(std::move(lift));
  }
  std::size_t k = fqf.invariant_factors.size();
  RatMatrix pairings(k, k);
  RatMatrix g = to_rat(l.gram);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Rat> gi = g * fqf.generator_lifts[i];
    for (std::size_t j = 0; j < k; ++j) pairings(i, j) = dot(fqf.generator_lifts[j], gi);
  }
  fqf.set_pairings(std::move(pairings), n);
  if (fqf.group_order() != abs(d))
    throw std::logic_error("discriminant_form: |A_L| != |det L|");
  return fqf;
}

// The group part only; same object, kept as a named entry point.
inline FiniteQuadraticForm discriminant_group(const Lattice& l) { return discriminant_form(l); }

enum class Tri { Yes, No, Inconclusive };

struct FqfIsoVerdict {
  Tri result = Tri::Inconclusive;
  std::string reason;
  // witness: column i is the image of generator i of the source, in the
  // target's generator coordinates
  IntMatrix witness;
  long nodes_visited = 0;
};

struct FqfIsoConfig {
  long node_budget = 10'000'000;
  Int enumeration_cap = Int(1) << 20;
};

namespace detail {

// Do the chosen images generate the whole target group?
inline bool images_generate(const FiniteQuadraticForm& target,
                            const std::vector<FqfElement>& images) {
  std::size_t k = target.ngens();
  IntMatrix m(k, images.size() + k);
  for (std::size_t j = 0; j < images.size(); ++j)
    for (std::size_t i = 0; i < k; ++i) m(i, j) = images[j].a[i];
  for (std::size_t i = 0; i < k; ++i) m(i, images.size() + i) = target.invariant_factors[i];
  auto snf = smith_normal_form(m);
  Int idx(1);
  for (std::size_t i = 0; i < k; ++i) idx *= snf.S(i, i);
  return idx == 1;
}

}  // namespace detail

inline FqfIsoVerdict fqf_isomorphic(const FiniteQuadraticForm& q1, const FiniteQuadraticForm& q2,
                                    const FqfIsoConfig& cfg = {}) {
  FqfIsoVerdict v;
  if (q1.group_order() != q2.group_order()) {
    v.result = Tri::No;
    v.reason = "group orders differ: " + q1.group_order().str() + " vs " + q2.group_order().str();
    return v;
  }
  if (q1.invariant_factors != q2.invariant_factors) {
    v.result = Tri::No;
    v.reason = "invariant factors differ";
    return v;
  }
  if (q1.group_order() > cfg.enumeration_cap) {
    v.result = Tri::Inconclusive;
    v.reason = "group too large to enumerate";
    return v;
  }
  if (q1.value_histogram() != q2.value_histogram()) {
    v.result = Tri::No;
    v.reason = "(order, q) value multisets differ";
    return v;
  }
  std::size_t k = q1.ngens();
  if (k == 0) {
    v.result = Tri::Yes;
    v.reason = "both trivial";
    v.witness = IntMatrix(0, 0);
    return v;
  }

  // assign images for generators from largest order down
  std::vector<std::size_t> order_idx(k);
  for (std::size_t i = 0; i < k; ++i) order_idx[i] = k - 1 - i;

  auto all2 = q2.elements();
  // candidate pools bucketed by (order, q)
  std::map<std::pair<Int, Rat>, std::vector<FqfElement>> pool;
  for (const auto& x : all2) pool[{q2.order_of(x), q2.q(x)}].push_back(x);

  std::vector<FqfElement> gens1(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Int> a(k);
    a[i] = 1;
    gens1[i] = {a};
  }

  std::vector<FqfElement> images(k);
  long nodes = 0;
  bool exhausted = false;

  auto backtrack = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == k) return detail::images_generate(q2, images);
    std::size_t gi = order_idx[depth];
    auto key = std::pair<Int, Rat>{q1.order_of(gens1[gi]), q1.q(gens1[gi])};
    auto it = pool.find(key);
    if (it == pool.end()) return false;
    for (const auto& cand : it->second) {
      if (++nodes > cfg.node_budget) {
        exhausted = true;
        return false;
      }
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        std::size_t gj = order_idx[d];
        if (q2.b(cand, images[gj]) != q1.b(gens1[gi], gens1[gj])) ok = false;
      }
      if (!ok) continue;
      images[gi] = cand;
      if (self(self, depth + 1)) return true;
      if (exhausted) return false;
    }
    return false;
  };

  bool found = backtrack(backtrack, 0);
  v.nodes_visited = nodes;
  if (exhausted && !found) {
    v.result = Tri::Inconclusive;
    v.reason = "node budget exhausted";
    return v;
  }
  if (!found) {
    v.result = Tri::No;
    v.reason = "no generator assignment preserves q and b";
    return v;
  }
  // verify the witness exhaustively on generators
  for (std::size_t i = 0; i < k; ++i) {
    if (q2.order_of(images[i]) != q1.order_of(gens1[i]))
      throw std::logic_error("fqf_isomorphic: witness breaks orders");
    if (q2.q(images[i]) != q1.q(gens1[i]))
      throw std::logic_error("fqf_isomorphic: witness breaks q");
    for (std::size_t j = 0; j < k; ++j)
      if (q2.b(images[i], images[j]) != q1.b(gens1[i], gens1[j]))
        throw std::logic_error("fqf_isomorphic: witness breaks b");
  }
  v.result = Tri::Yes;
  v.reason = "generator images preserve q and b and generate the target";
  v.witness = IntMatrix(q2.ngens(), k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < q2.ngens(); ++i) v.witness(i, j) = images[j].a[i];
  return v;
}

struct GenusInvariants {
  std::size_t rank = 0;
  std::size_t sig_positive = 0, sig_negative = 0;
  bool even = true;
  std::vector<Int> invariant_factors;
  std::shared_ptr<FiniteQuadraticForm> fqf;

  // cheap grouping key: everything short of the isomorphism search
  std::string key() const {
    std::string s = std::to_string(rank) + "|" + std::to_string(sig_positive) + "," +
                    std::to_string(sig_negative) + "|";
    for (const auto& d : invariant_factors) s += d.str() + ".";
    s += "|";
    for (const auto& [k, c] : fqf->value_histogram())
      s += k.first.str() + ":" + to_string(k.second) + "x" + std::to_string(c) + ";";
    return s;
  }
};

inline GenusInvariants genus_invariants(const Lattice& l) {
  GenusInvariants g;
  g.rank = l.rank();
  auto fqf = discriminant_form(l);
  g.sig_positive = fqf.sig_positive;
  g.sig_negative = fqf.sig_negative;
  g.invariant_factors = fqf.invariant_factors;
  g.fqf = std::make_shared<FiniteQuadraticForm>(std::move(fqf));
  return g;
}

struct GenusVerdict {
  Tri result = Tri::Inconclusive;
  std::string reason;
  // a "yes" certifies equality of genus invariants (rank, signature,
  // discriminant form); treating that as isometry is an extra assumption,
  // valid for the indefinite lattices handled here, and flagged explicitly
  bool isometry_caveat = false;
  FqfIsoVerdict fqf_verdict;
};

inline GenusVerdict genus_equal(const GenusInvariants& a, const GenusInvariants& b,
                                const FqfIsoConfig& cfg = {}) {
  GenusVerdict v;
  if (a.rank != b.rank) {
    v.result = Tri::No;
    v.reason = "ranks differ";
    return v;
  }
  if (a.sig_positive != b.sig_positive || a.sig_negative != b.sig_negative) {
    v.result = Tri::No;
    v.reason = "signatures differ";
    return v;
  }
  v.fqf_verdict = fqf_isomorphic(*a.fqf, *b.fqf, cfg);
  v.result = v.fqf_verdict.result;
  v.reason = v.fqf_verdict.reason;
  v.isometry_caveat = (v.result == Tri::Yes);
  return v;
}

inline GenusVerdict genus_equal(const Lattice& a, const Lattice& b, const FqfIsoConfig& cfg = {}) {
  return genus_equal(genus_invariants(a), genus_invariants(b), cfg);
}

}  // namespace k3mds
