#pragma once

// Néron–Severi lattice of an elliptic K3 with given reducible fibers and
// trivial Mordell–Weil group. Basis: F (fiber), s0 (zero section), then the
// non-identity fiber components Th<j>_<i> per fiber j.
//
// Pairings: F^2 = 0, F.s0 = 1, s0^2 = -2, F.Th = s0.Th = 0; each fiber's
// component block is the negated Dynkin matrix of its non-identity
// components. I_n* components are numbered
//
//   Th0 - Th2, Th1 - Th2, chain Th2 - Th3 - ... - Th(n+2),
//   Th(n+3) - Th(n+2), Th(n+4) - Th(n+2)
//
// with Th0 the identity component. I_n fibers are an (n-1)-cycle through the
// identity; II*/III*/IV* attach the identity to the long-arm end of
// E8/E7/E6. Identity components are not basis vectors; they are recovered as
// F minus the marked sum of the others (multiplicities solved exactly from
// the block Gram, so the construction self-checks).

#include <string>
#include <vector>

#include "k3mds/lattice.hpp"
#include "k3mds/lattice_expr.hpp"

namespace k3mds {

struct FiberType {
  enum Kind { I, IStar, IIStar, IIIStar, IVStar } kind;
  long n = 0;  // index for I / I*

  static FiberType In(long n) { return {I, n}; }
  static FiberType InStar(long n) { return {IStar, n}; }
  static FiberType II_star() { return {IIStar, 0}; }
  static FiberType III_star() { return {IIIStar, 0}; }
  static FiberType IV_star() { return {IVStar, 0}; }

  // Order of the component group: I_n -> n, I_n* -> 4, II* -> 1, III* -> 2, IV* -> 3.
  Int component_group_order() const {
    switch (kind) {
      case I: return Int(n == 0 ? 1 : n);
      case IStar: return Int(4);
      case IIStar: return Int(1);
      case IIIStar: return Int(2);
      case IVStar: return Int(3);
    }
    throw std::logic_error("unreachable");
  }

  std::string name() const {
    switch (kind) {
      case I: return "I" + std::to_string(n);
      case IStar: return "I" + std::to_string(n) + "*";
      case IIStar: return "II*";
      case IIIStar: return "III*";
      case IVStar: return "IV*";
    }
    throw std::logic_error("unreachable");
  }
};

// Parse "I2", "I4*", "I0*", "II*", "III*", "IV*".
inline FiberType parse_fiber(const std::string& s) {
  if (s == "II*") return FiberType::II_star();
  if (s == "III*") return FiberType::III_star();
  if (s == "IV*") return FiberType::IV_star();
  if (s == "II" || s == "III" || s == "IV")
    throw std::invalid_argument("fiber type " + s +
                                " is not supported; use the I2 spelling for III");
  if (!s.empty() && s[0] == 'I') {
    bool star = s.back() == '*';
    std::string num = s.substr(1, s.size() - 1 - (star ? 1 : 0));
    if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos) {
      long n = std::stol(num);
      return star ? FiberType::InStar(n) : FiberType::In(n);
    }
  }
  throw std::invalid_argument("unsupported fiber type: '" + s + "'");
}

struct EllipticFiberBlock {
  FiberType type;
  std::size_t offset = 0;  // basis index of Th1 in the ambient lattice
  std::size_t size = 0;    // number of non-identity components
  std::vector<Int> marks;  // multiplicities of Th1..Th_size in the fiber class
};

struct EllipticNS {
  Lattice lattice;
  std::vector<EllipticFiberBlock> fibers;
  std::vector<std::string> notes;

  LatticeVector fiber_class() const { return basis_vector(lattice, 0); }
  LatticeVector zero_section() const { return basis_vector(lattice, 1); }

  // Non-identity component Th_i of fiber j (both 1-based, i >= 1).
  LatticeVector theta(std::size_t j, std::size_t i) const {
    const auto& f = fiber_at(j);
    if (i < 1 || i > f.size) throw std::out_of_range("theta: component index out of range");
    return basis_vector(lattice, f.offset + i - 1);
  }

  // Identity component Th_0 of fiber j: F - sum(marks_i * Th_i).
  LatticeVector identity_theta(std::size_t j) const {
    const auto& f = fiber_at(j);
    LatticeVector v = fiber_class();
    for (std::size_t i = 0; i < f.size; ++i)
      v = v - Rat(f.marks[i]) * basis_vector(lattice, f.offset + i);
    return v;
  }

 private:
  const EllipticFiberBlock& fiber_at(std::size_t j) const {
    if (j < 1 || j > fibers.size()) throw std::out_of_range("fiber index out of range");
    return fibers[j - 1];
  }
};

namespace detail {

struct FiberGraph {
  std::size_t size;                                        // non-identity components
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // 0-based, within non-identity
  std::vector<Int> identity_adj;  // pairing of Th0 with Th1..Th_size
};

inline FiberGraph fiber_graph(const FiberType& t) {
  FiberGraph g;
  switch (t.kind) {
    case FiberType::I: {
      if (t.n < 2) throw std::invalid_argument("I_n fiber needs n >= 2 to contribute");
      g.size = t.n - 1;
      for (std::size_t i = 0; i + 1 < g.size; ++i) g.edges.push_back({i, i + 1});
      g.identity_adj.assign(g.size, Int(0));
      if (t.n == 2) {
        g.identity_adj[0] = 2;  // the two components of I_2 meet twice
      } else {
        g.identity_adj.front() = 1;
        g.identity_adj.back() = 1;
      }
      break;
    }
    case FiberType::IStar: {
      if (t.n < 0) throw std::invalid_argument("I_n* fiber needs n >= 0");
      g.size = t.n + 4;
      // chain Th1..Th(n+3), then Th(n+4) attached to Th(n+2)
      for (std::size_t i = 0; i + 2 < g.size; ++i) g.edges.push_back({i, i + 1});
      if (g.size >= 3) g.edges.push_back({g.size - 3, g.size - 1});
      g.identity_adj.assign(g.size, Int(0));
      g.identity_adj[1] = 1;  // Th0 - Th2
      break;
    }
    case FiberType::IIStar:
    case FiberType::IIIStar:
    case FiberType::IVStar: {
      std::size_t n = t.kind == FiberType::IIStar ? 8 : (t.kind == FiberType::IIIStar ? 7 : 6);
      g.size = n;
      for (std::size_t i = 0; i + 2 < n; ++i) g.edges.push_back({i, i + 1});
      g.edges.push_back({2, n - 1});
      g.identity_adj.assign(g.size, Int(0));
      if (t.kind == FiberType::IIStar) g.identity_adj[6] = 1;       // long-arm end of E8
      else if (t.kind == FiberType::IIIStar) g.identity_adj[0] = 1; // arm end of E7
      else g.identity_adj[5] = 1;                                   // branch node tail of E6
      break;
    }
  }
  return g;
}

}  // namespace detail

inline EllipticNS build_elliptic_ns(const std::vector<FiberType>& fibers, bool trivial_mw = true) {
  if (!trivial_mw)
    throw std::invalid_argument("build_elliptic_ns: nontrivial Mordell-Weil is not modeled");
  EllipticNS out;
  std::vector<detail::FiberGraph> graphs;
  std::vector<FiberType> kept;
  for (const auto& f : fibers) {
    if (f.kind == FiberType::I && f.n <= 1) {
      out.notes.push_back("fiber " + f.name() + " contributes no lattice component; ignored");
      continue;
    }
    graphs.push_back(detail::fiber_graph(f));
    kept.push_back(f);
  }
  std::size_t rank = 2;
  for (const auto& g : graphs) rank += g.size;

  IntMatrix gram(rank, rank);
  gram(0, 1) = gram(1, 0) = 1;
  gram(1, 1) = -2;
  std::vector<std::string> names(rank);
  names[0] = "F";
  names[1] = "s0";

  std::size_t off = 2;
  for (std::size_t j = 0; j < graphs.size(); ++j) {
    const auto& g = graphs[j];
    EllipticFiberBlock blk;
    blk.type = kept[j];
    blk.offset = off;
    blk.size = g.size;
    IntMatrix bg(g.size, g.size);
    for (std::size_t i = 0; i < g.size; ++i) {
      gram(off + i, off + i) = -2;
      bg(i, i) = -2;
      names[off + i] = "Th" + std::to_string(j + 1) + "_" + std::to_string(i + 1);
    }
    for (auto [a, b] : g.edges) {
      gram(off + a, off + b) = gram(off + b, off + a) = 1;
      bg(a, b) = bg(b, a) = 1;
    }
    // marks m solve (block gram) * m = -identity_adj; they must come out as
    // positive integers, and then Th0 = F - sum(m_i Th_i) has norm -2.
    std::vector<Rat> rhs(g.size);
    for (std::size_t i = 0; i < g.size; ++i) rhs[i] = -Rat(g.identity_adj[i]);
    std::vector<Rat> m = solve(to_rat(bg), rhs);
    blk.marks.resize(g.size);
    Int theta0_norm(0);
    for (std::size_t i = 0; i < g.size; ++i) {
      blk.marks[i] = to_int(m[i]);
      if (blk.marks[i] <= 0) throw std::logic_error("build_elliptic_ns: nonpositive mark");
      theta0_norm -= blk.marks[i] * g.identity_adj[i];
    }
    if (theta0_norm != -2)
      throw std::logic_error("build_elliptic_ns: identity component norm != -2");
    out.fibers.push_back(std::move(blk));
    off += g.size;
  }
  out.lattice = Lattice(gram, names, "NS(" + [&] {
                          std::string s;
                          for (std::size_t j = 0; j < kept.size(); ++j)
                            s += (j ? "+" : "") + kept[j].name();
                          return s;
                        }() + ")");
  return out;
}

}  // namespace k3mds
