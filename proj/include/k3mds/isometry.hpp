#pragma once

// Isometry checks and order computation for integer matrices acting on a
// lattice (column convention: v -> M v). A matrix has finite order iff its
// characteristic polynomial is a product of cyclotomics AND the power at the
// lcm of their orders is the identity; unipotent-type isometries fail the
// power test even though their spectrum is cyclotomic.

#include <optional>
#include <string>
#include <vector>

#include "k3mds/lattice.hpp"

namespace k3mds {

// Monic integer polynomial, coefficients ascending: p[0] + p[1] x + ...
using IntPoly = std::vector<Int>;

inline std::size_t degree(const IntPoly& p) { return p.size() - 1; }

// Exact division p / q over Z; returns nullopt when q does not divide p.
inline std::optional<IntPoly> poly_div_exact(const IntPoly& p, const IntPoly& q) {
  if (q.back() == 0) throw std::invalid_argument("poly_div_exact: zero leading coefficient");
  if (p.size() < q.size()) return std::nullopt;
  IntPoly rem = p;
  IntPoly quot(p.size() - q.size() + 1, Int(0));
  for (std::size_t k = quot.size(); k-- > 0;) {
    Int lead = rem[k + q.size() - 1];
    if (lead % q.back() != 0) return std::nullopt;
    Int f = lead / q.back();
    quot[k] = f;
    for (std::size_t i = 0; i < q.size(); ++i) rem[k + i] -= f * q[i];
  }
  for (const auto& c : rem)
    if (c != 0) return std::nullopt;
  return quot;
}

// x^n - 1
inline IntPoly x_pow_minus_one(std::size_t n) {
  IntPoly p(n + 1, Int(0));
  p[0] = -1;
  p[n] = 1;
  return p;
}

// Cyclotomic polynomial by repeated exact division of x^m - 1.
inline IntPoly cyclotomic(std::size_t m) {
  IntPoly p = x_pow_minus_one(m);
  for (std::size_t d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    auto q = poly_div_exact(p, cyclotomic(d));
    if (!q) throw std::logic_error("cyclotomic: division failed");
    p = *q;
  }
  return p;
}

// Characteristic polynomial via Faddeev-LeVerrier, exact.
inline IntPoly char_poly(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("char_poly: not square");
  std::size_t n = m.rows();
  RatMatrix a = to_rat(m);
  RatMatrix b = RatMatrix::identity(n);
  std::vector<Rat> coeff(n + 1);
  coeff[n] = 1;
  RatMatrix mb = a;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k > 1) mb = a * b;
    Rat tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += mb(i, i);
    Rat c = -tr / Rat(k);
    coeff[n - k] = c;
    b = mb;
    for (std::size_t i = 0; i < n; ++i) b(i, i) += c;
  }
  IntPoly out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = to_int(coeff[i]);
  return out;
}

inline std::size_t euler_phi(std::size_t m) {
  std::size_t result = m, n = m;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

struct IsometryReport {
  IntMatrix matrix;
  bool is_isometry = false;
  bool finite = false;
  std::optional<long> order;
  std::string certificate;
};

inline bool preserves_gram(const IntMatrix& m, const Lattice& l) {
  return m.transpose() * l.gram * m == l.gram;
}

inline IsometryReport isometry_order(const IntMatrix& m, const Lattice& l) {
  if (m.rows() != l.rank() || m.cols() != l.rank())
    throw std::invalid_argument("isometry_order: matrix size != lattice rank");
  IsometryReport rep;
  rep.matrix = m;
  rep.is_isometry = preserves_gram(m, l);
  IntPoly p = char_poly(m);
  long order_lcm = 1;
  // strip cyclotomic factors; only indices with phi(cyc) <= deg(p) can divide
  std::size_t deg0 = degree(p);
  for (std::size_t cyc = 1; cyc <= 2 * deg0 * deg0 + 6 && degree(p) > 0; ++cyc) {
    if (euler_phi(cyc) > degree(p)) continue;
    IntPoly phi = cyclotomic(cyc);
    while (true) {
      auto q = poly_div_exact(p, phi);
      if (!q) break;
      p = *q;
      order_lcm = static_cast<long>(lcm(Int(order_lcm), Int(cyc)));
    }
  }
  if (degree(p) > 0) {
    rep.finite = false;
    rep.certificate = "non-cyclotomic irreducible factor in the characteristic polynomial";
    return rep;
  }
  // all eigenvalues are roots of unity; finite iff the power closes
  IntMatrix pw = IntMatrix::identity(m.rows());
  for (long i = 0; i < order_lcm; ++i) pw = pw * m;
  if (pw == IntMatrix::identity(m.rows())) {
    rep.finite = true;
    rep.order = order_lcm;
    rep.certificate = "power " + std::to_string(order_lcm) + " is the identity";
  } else {
    rep.finite = false;
    rep.certificate = "cyclotomic spectrum but a power fails to close (not semisimple)";
  }
  return rep;
}

// Restrict the action to an invariant sublattice given by basis rows; throws
// when the sublattice is not invariant.
inline IntMatrix restrict_isometry(const IntMatrix& m, const Lattice& l,
                                   const IntMatrix& basis_rows) {
  if (m.rows() != l.rank()) throw std::invalid_argument("restrict_isometry: size mismatch");
  if (basis_rows.cols() != l.rank())
    throw std::invalid_argument("restrict_isometry: basis width != rank");
  std::size_t k = basis_rows.rows();
  RatMatrix bt = to_rat(basis_rows.transpose());      // n x k, columns are the basis
  RatMatrix mbt = to_rat(m) * bt;                     // images of the basis
  RatMatrix gram_b = to_rat(basis_rows) * bt;         // k x k, invertible for independent rows
  RatMatrix r = inverse(gram_b) * (to_rat(basis_rows) * mbt);
  if (bt * r != mbt)
    throw std::invalid_argument("restrict_isometry: sublattice is not invariant");
  IntMatrix out(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (!is_integer(r(i, j)))
        throw std::invalid_argument("restrict_isometry: restriction is not integral");
      out(i, j) = to_int(r(i, j));
    }
  return out;
}

}  // namespace k3mds
