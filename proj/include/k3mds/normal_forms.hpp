#pragma once

// Integer normal forms: Smith, Hermite (row-style), integer kernels, and
// symmetric congruence diagonalization over Q. These are the primitives the
// lattice layer is built on; every decomposition re-checks its defining
// identity before returning.

#include <optional>
#include <stdexcept>
#include <vector>

#include "k3mds/matrix.hpp"

namespace k3mds {

struct SmithDecomposition {
  IntMatrix U;  // unimodular, rows() == A.rows()
  IntMatrix S;  // diagonal, U*A*V == S, s_1 | s_2 | ..., entries >= 0
  IntMatrix V;  // unimodular, rows() == A.cols()

  std::vector<Int> diagonal() const {
    std::size_t n = std::min(S.rows(), S.cols());
    std::vector<Int> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = S(i, i);
    return d;
  }
};

namespace detail {

inline bool find_min_nonzero(const IntMatrix& s, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < s.rows(); ++i)
    for (std::size_t j = t; j < s.cols(); ++j) {
      if (s(i, j) == 0) continue;
      Int a = abs(s(i, j));
      if (!found || a < best) {
        found = true;
        best = a;
        pi = i;
        pj = j;
      }
    }
  return found;
}

}  // namespace detail

inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  std::size_t m = a.rows(), n = a.cols();
  SmithDecomposition d{IntMatrix::identity(m), a, IntMatrix::identity(n)};
  IntMatrix& s = d.S;
  std::size_t t = 0;
  std::size_t limit = std::min(m, n);
  while (t < limit) {
    std::size_t pi, pj;
    if (!detail::find_min_nonzero(s, t, pi, pj)) break;
    if (pi != t) {
      s.swap_rows(t, pi);
      d.U.swap_rows(t, pi);
    }
    if (pj != t) {
      s.swap_cols(t, pj);
      d.V.swap_cols(t, pj);
    }
    bool clean = true;
    for (std::size_t i = t + 1; i < m; ++i) {
      if (s(i, t) == 0) continue;
      Int q = floor_div(s(i, t), s(t, t));
      s.add_row(i, t, -q);
      d.U.add_row(i, t, -q);
      if (s(i, t) != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      if (s(t, j) == 0) continue;
      Int q = floor_div(s(t, j), s(t, t));
      s.add_col(j, t, -q);
      d.V.add_col(j, t, -q);
      if (s(t, j) != 0) clean = false;
    }
    if (!clean) continue;
    // pivot divides the rest of the submatrix, else pull a bad row in and redo
    bool divides_all = true;
    for (std::size_t i = t + 1; i < m && divides_all; ++i)
      for (std::size_t j = t + 1; j < n; ++j)
        if (s(i, j) % s(t, t) != 0) {
          s.add_row(t, i, Int(1));
          d.U.add_row(t, i, Int(1));
          divides_all = false;
          break;
        }
    if (!divides_all) continue;
    if (s(t, t) < 0) {
      s.scale_row(t, Int(-1));
      d.U.scale_row(t, Int(-1));
    }
    ++t;
  }
  if (d.U * a * d.V != s) throw std::logic_error("smith_normal_form: U*A*V != S");
  for (std::size_t i = 0; i + 1 < limit; ++i) {
    if (s(i, i) < 0 || s(i + 1, i + 1) < 0) throw std::logic_error("smith: negative diagonal");
    if (s(i, i) != 0 && s(i + 1, i + 1) % s(i, i) != 0)
      throw std::logic_error("smith: divisibility chain broken");
    if (s(i, i) == 0 && s(i + 1, i + 1) != 0)
      throw std::logic_error("smith: zero before nonzero on diagonal");
  }
  if (!is_unimodular(d.U) || !is_unimodular(d.V))
    throw std::logic_error("smith: transform not unimodular");
  return d;
}

struct HermiteForm {
  IntMatrix H;  // row echelon, pivots positive, entries above pivots in [0, pivot)
  IntMatrix T;  // unimodular, T*A == H
  std::vector<std::size_t> pivot_cols;

  std::size_t rank() const { return pivot_cols.size(); }
};

// Row-style Hermite normal form: upper echelon, positive pivots, entries
// above each pivot reduced into [0, pivot). Zero rows sink to the bottom.
inline HermiteForm hermite_normal_form(const IntMatrix& a) {
  std::size_t m = a.rows(), n = a.cols();
  HermiteForm h{a, IntMatrix::identity(m), {}};
  std::size_t r = 0;
  for (std::size_t j = 0; j < n && r < m; ++j) {
    // gcd-reduce column j below row r until one nonzero entry remains
    while (true) {
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i) {
        if (h.H(i, j) == 0) continue;
        if (best == m || abs(h.H(i, j)) < abs(h.H(best, j))) best = i;
      }
      if (best == m) break;  // column clear below r
      if (best != r) {
        h.H.swap_rows(r, best);
        h.T.swap_rows(r, best);
      }
      bool lone = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h.H(i, j) == 0) continue;
        Int q = floor_div(h.H(i, j), h.H(r, j));
        h.H.add_row(i, r, -q);
        h.T.add_row(i, r, -q);
        if (h.H(i, j) != 0) lone = false;
      }
      if (lone) break;
    }
    if (h.H(r, j) == 0) continue;
    if (h.H(r, j) < 0) {
      h.H.scale_row(r, Int(-1));
      h.T.scale_row(r, Int(-1));
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q = floor_div(h.H(i, j), h.H(r, j));
      if (q != 0) {
        h.H.add_row(i, r, -q);
        h.T.add_row(i, r, -q);
      }
    }
    h.pivot_cols.push_back(j);
    ++r;
  }
  if (h.T * a != h.H) throw std::logic_error("hermite_normal_form: T*A != H");
  if (!is_unimodular(h.T)) throw std::logic_error("hermite: transform not unimodular");
  return h;
}

// Is the row vector v in the integer row span of hnf.H?
inline bool in_row_span(const HermiteForm& hnf, const std::vector<Int>& v) {
  std::vector<Int> w = v;
  std::size_t r = 0;
  for (std::size_t j : hnf.pivot_cols) {
    if (w[j] % hnf.H(r, j) != 0) return false;
    Int q = w[j] / hnf.H(r, j);
    if (q != 0)
      for (std::size_t k = 0; k < w.size(); ++k) w[k] -= q * hnf.H(r, k);
    ++r;
  }
  for (const Int& x : w)
    if (x != 0) return false;
  return true;
}

// Basis of { v : A * v = 0 } over Z, returned as rows. The basis is
// saturated: it consists of columns of a unimodular matrix.
inline std::vector<std::vector<Int>> integer_kernel(const IntMatrix& a) {
  SmithDecomposition d = smith_normal_form(a);
  std::size_t n = a.cols();
  std::size_t limit = std::min(a.rows(), n);
  std::vector<std::vector<Int>> basis;
  for (std::size_t j = 0; j < n; ++j) {
    bool zero_col = j >= limit || d.S(j, j) == 0;
    if (!zero_col) continue;
    std::vector<Int> v = d.V.col(j);
    std::vector<Int> av = a * v;
    for (const Int& x : av)
      if (x != 0) throw std::logic_error("integer_kernel: basis vector not in kernel");
    basis.push_back(std::move(v));
  }
  return basis;
}

struct CongruenceDiagonalization {
  std::vector<Rat> diag;  // entries of D = P^T * G * P
  RatMatrix P;            // invertible over Q
  std::size_t positive = 0, negative = 0, zero = 0;
};

// Symmetric congruence diagonalization over Q. Zero diagonal pivots are
// repaired by adding a row/column with nonzero pairing; degenerate forms are
// allowed and surface as zero entries.
inline CongruenceDiagonalization congruence_diagonalize(const IntMatrix& g) {
  if (!g.is_symmetric()) throw std::invalid_argument("congruence_diagonalize: not symmetric");
  std::size_t n = g.rows();
  RatMatrix d = to_rat(g);
  RatMatrix p = RatMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) == 0) {
      std::size_t j = i + 1;
      while (j < n && d(i, j) == 0) ++j;
      if (j < n) {
        Rat f = (2 * d(i, j) + d(j, j) != 0) ? Rat(1) : Rat(-1);
        d.add_row(i, j, f);
        d.add_col(i, j, f);
        p.add_col(i, j, f);
      }
    }
    if (d(i, i) == 0) continue;  // row is null on the remaining block
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d(j, i) == 0) continue;
      Rat f = -d(j, i) / d(i, i);
      d.add_row(j, i, f);
      d.add_col(j, i, f);
      p.add_col(j, i, f);
    }
  }
  CongruenceDiagonalization out;
  out.P = p;
  out.diag.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.diag[i] = d(i, i);
    if (d(i, i) > 0)
      ++out.positive;
    else if (d(i, i) < 0)
      ++out.negative;
    else
      ++out.zero;
  }
  RatMatrix check = p.transpose() * to_rat(g) * p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (check(i, j) != (i == j ? out.diag[i] : Rat(0)))
        throw std::logic_error("congruence_diagonalize: P^T*G*P not diagonal");
  return out;
}

}  // namespace k3mds
