#pragma once

// Parser for lattice expressions:
//
//   term   := "U" | "U(" int ")" | "A"n | "D"n | "E"n | "<" even-int ">"
//   factor := term [ "(" int ")" ] [ "^" count ]
//   expr   := factor { "+" factor }
//
// Whitespace is ignored. Root lattices A_n, D_n, E_n are NEGATIVE definite
// (negated Cartan matrices); U = [[0,1],[1,0]]; <k> is the rank-1 lattice of
// norm k (k even); L(m) multiplies the Gram matrix by m.
//
// Node orderings for the root blocks (edges carry pairing +1):
//   A_n : chain 1-2-...-n
//   D_n : chain 1-2-...-(n-1), node n attached to node n-2   (n >= 2)
//   E_n : chain 1-2-...-(n-1), node n attached to node 3     (n in {6,7,8})
//
// Basis vectors are named b1..bn in expression order.

#include <cctype>
#include <string>
#include <vector>

#include "k3mds/lattice.hpp"

namespace k3mds {

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

namespace detail {

inline IntMatrix negated_cartan(char family, long n, std::size_t err_pos) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (family == 'A') {
    if (n < 1) throw ParseError("A_n requires n >= 1", err_pos);
    for (long i = 1; i < n; ++i) edges.push_back({i - 1, i});
  } else if (family == 'D') {
    if (n < 2) throw ParseError("D_n requires n >= 2", err_pos);
    for (long i = 1; i + 1 < n; ++i) edges.push_back({i - 1, i});
    if (n >= 3) edges.push_back({std::size_t(n - 3), std::size_t(n - 1)});
  } else if (family == 'E') {
    if (n < 6 || n > 8) throw ParseError("E_n requires n in {6,7,8}", err_pos);
    for (long i = 1; i + 1 < n; ++i) edges.push_back({i - 1, i});
    edges.push_back({2, std::size_t(n - 1)});
  } else {
    throw ParseError("unknown root family", err_pos);
  }
  IntMatrix g(n, n);
  for (long i = 0; i < n; ++i) g(i, i) = -2;
  for (auto [i, j] : edges) g(i, j) = g(j, i) = 1;
  return g;
}

class ExprParser {
 public:
  explicit ExprParser(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i)
      if (!std::isspace(static_cast<unsigned char>(text[i]))) {
        src_ += text[i];
        pos_map_.push_back(i);
      }
  }

  Lattice parse() {
    if (src_.empty()) throw ParseError("empty lattice expression", 0);
    Lattice l = factor();
    while (pos_ < src_.size()) {
      expect('+');
      Lattice r = factor();
      l = direct_sum(l, r);
    }
    rename(l);
    return l;
  }

 private:
  std::string src_;
  std::vector<std::size_t> pos_map_;
  std::size_t pos_ = 0;

  std::size_t here() const { return pos_ < pos_map_.size() ? pos_map_[pos_] : pos_map_.size(); }

  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "'", here());
    ++pos_;
  }

  Int integer() {
    std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    std::size_t digits = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw ParseError("expected an integer", here());
    return Int(src_.substr(start, pos_ - start));
  }

  Lattice term() {
    char c = peek();
    if (c == 'U') {
      ++pos_;
      if (peek() == '(') return u_twisted();
      return Lattice(IntMatrix(2, 2, {Int(0), Int(1), Int(1), Int(0)}), {"b", "b"}, "U");
    }
    if (c == 'A' || c == 'D' || c == 'E') {
      std::size_t err = here();
      ++pos_;
      Int n = integer();
      if (n <= 0 || n > 1000) throw ParseError("root lattice index out of range", err);
      long ln = static_cast<long>(n);
      IntMatrix g = negated_cartan(c, ln, err);
      return Lattice(g, std::vector<std::string>(ln, "b"), std::string(1, c) + n.str());
    }
    if (c == '<') {
      std::size_t err = here();
      ++pos_;
      Int k = integer();
      expect('>');
      if (k % 2 != 0)
        throw ParseError("<" + k.str() + "> is odd; only even lattices are supported", err);
      if (k == 0) throw ParseError("<0> is degenerate", err);
      return Lattice(IntMatrix(1, 1, {k}), {"b"}, "<" + k.str() + ">");
    }
    throw ParseError("expected a lattice term (U, An, Dn, En or <k>)", here());
  }

  Lattice u_twisted() {
    expect('(');
    Int m = integer();
    expect(')');
    if (m == 0) throw ParseError("U(0) is degenerate", here());
    return Lattice(IntMatrix(2, 2, {Int(0), m, m, Int(0)}), {"b", "b"},
                   "U(" + m.str() + ")");
  }

  Lattice factor() {
    Lattice l = term();
    if (peek() == '(') {
      ++pos_;
      Int m = integer();
      expect(')');
      if (m == 0) throw ParseError("twist by 0 is degenerate", here());
      l = twist(l, m);
    }
    if (peek() == '^') {
      ++pos_;
      Int k = integer();
      if (k <= 0) throw ParseError("power must be positive", here());
      if (k > 64) throw ParseError("power too large", here());
      Lattice sum = l;
      std::string base_label = l.label;
      for (Int i = 1; i < k; ++i) sum = direct_sum(sum, l);
      sum.label = base_label + "^" + k.str();
      return sum;
    }
    return l;
  }

  static void rename(Lattice& l) {
    for (std::size_t i = 0; i < l.basis_names.size(); ++i)
      l.basis_names[i] = "b" + std::to_string(i + 1);
  }
};

}  // namespace detail

inline Lattice parse_lattice(const std::string& expr) {
  return detail::ExprParser(expr).parse();
}

}  // namespace k3mds
