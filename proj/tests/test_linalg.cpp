#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "k3mds/lattice_expr.hpp"
#include "k3mds/normal_forms.hpp"

using namespace k3mds;

namespace {

IntMatrix diag2(Int a, Int b) { return IntMatrix(2, 2, {a, Int(0), Int(0), b}); }

// Small random unimodular matrix as a product of elementary row operations.
IntMatrix random_unimodular(std::size_t n, std::mt19937& rng) {
  IntMatrix q = IntMatrix::identity(n);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    q.add_row(i, j, Int(coef(rng)));
  }
  return q;
}

IntMatrix random_symmetric_even(std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> off(-3, 3);
  std::uniform_int_distribution<int> di(-3, 3);
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    g(i, i) = 2 * di(rng);
    for (std::size_t j = i + 1; j < n; ++j) g(i, j) = g(j, i) = off(rng);
  }
  return g;
}

bool same_row_span(const IntMatrix& a, const IntMatrix& b) {
  HermiteForm ha = hermite_normal_form(a), hb = hermite_normal_form(b);
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (!in_row_span(hb, a.row(i))) return false;
  for (std::size_t i = 0; i < b.rows(); ++i)
    if (!in_row_span(ha, b.row(i))) return false;
  return true;
}

}  // namespace

TEST_CASE("smith normal form of hyperbolic plane is trivial") {
  IntMatrix u(2, 2, {Int(0), Int(1), Int(1), Int(0)});
  auto d = smith_normal_form(u);
  CHECK(d.S == IntMatrix::identity(2));
}

TEST_CASE("smith normal form of diag(2,-4)") {
  auto d = smith_normal_form(diag2(2, -4));
  CHECK(d.S == diag2(2, 4));
  CHECK(d.U * diag2(2, -4) * d.V == d.S);
}

TEST_CASE("smith normal form of E8 is the identity") {
  Lattice e8 = parse_lattice("E8");
  CHECK(abs(det(e8.gram)) == 1);  // forced: row reduction over Z clears everything
  auto d = smith_normal_form(e8.gram);
  CHECK(d.S == IntMatrix::identity(8));
}

TEST_CASE("smith decomposition invariants on random matrices") {
  std::mt19937 rng(20240811);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    std::size_t m = dim(rng), n = dim(rng);
    std::uniform_int_distribution<int> val(-6, 6);
    IntMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = val(rng);
    auto d = smith_normal_form(a);
    CHECK(d.U * a * d.V == d.S);
    CHECK(abs(det(d.U)) == 1);
    CHECK(abs(det(d.V)) == 1);
    auto diag = d.diagonal();
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
      CHECK(diag[i] >= 0);
      if (diag[i] != 0) CHECK(diag[i + 1] % diag[i] == 0);
    }
  }
}

TEST_CASE("hermite normal form of identity") {
  auto h = hermite_normal_form(IntMatrix::identity(3));
  CHECK(h.H == IntMatrix::identity(3));
}

TEST_CASE("hermite normal form by hand: rows (2,0),(1,1)") {
  IntMatrix a(2, 2, {Int(2), Int(0), Int(1), Int(1)});
  auto h = hermite_normal_form(a);
  CHECK(h.H == IntMatrix(2, 2, {Int(1), Int(1), Int(0), Int(2)}));
  CHECK(h.T * a == h.H);
}

TEST_CASE("hermite pivot product measures glue index") {
  // basis of <4>+<-2>+<-2> plus the glue (1,1,1)/2, all scaled by 2
  IntMatrix rows(4, 3,
                 {Int(2), Int(0), Int(0), Int(0), Int(2), Int(0), Int(0), Int(0), Int(2),
                  Int(1), Int(1), Int(1)});
  auto h = hermite_normal_form(rows);
  REQUIRE(h.rank() == 3);
  Int pivot_product = h.H(0, 0) * h.H(1, 1) * h.H(2, 2);
  CHECK(pivot_product == 4);  // [2Z^3 : span] = 4, so the glue extension has index 8/4 = 2
}

TEST_CASE("hermite row span preserved") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    std::size_t m = dim(rng), n = dim(rng);
    std::uniform_int_distribution<int> val(-5, 5);
    IntMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = val(rng);
    auto h = hermite_normal_form(a);
    CHECK(abs(det(h.T)) == 1);
    CHECK(same_row_span(a, h.H));
  }
}

TEST_CASE("integer kernel of a single linear form") {
  IntMatrix a(1, 3, {Int(2), Int(2), Int(2)});
  auto basis = integer_kernel(a);
  REQUIRE(basis.size() == 2);
  IntMatrix got = from_rows(basis, 3);
  IntMatrix expected(2, 3, {Int(1), Int(-1), Int(0), Int(0), Int(1), Int(-1)});
  CHECK(same_row_span(got, expected));
}

TEST_CASE("kernel of pairing with isotropic e1 in U") {
  // pairing with e1 in U is the row (0,1); e1 itself is self-orthogonal
  IntMatrix a(1, 2, {Int(0), Int(1)});
  auto basis = integer_kernel(a);
  REQUIRE(basis.size() == 1);
  CHECK((basis[0] == std::vector<Int>{Int(1), Int(0)} ||
         basis[0] == std::vector<Int>{Int(-1), Int(0)}));
}

TEST_CASE("kernel of the K3 pairing rows has rank 20") {
  Lattice k3 = parse_lattice("U^3+E8^2");
  REQUIRE(k3.rank() == 22);
  std::vector<Int> n1(22), n2(22);
  n1[0] = 1;
  n1[1] = 2;
  n2[2] = 1;
  n2[3] = -1;
  IntMatrix pairing_rows =
      from_rows(std::vector<std::vector<Int>>{n1, n2}, 22) * k3.gram;
  auto basis = integer_kernel(pairing_rows);
  CHECK(basis.size() == 20);
}

TEST_CASE("kernel basis completes to full rank") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> val(-4, 4);
    IntMatrix a(2, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = val(rng);
    auto basis = integer_kernel(a);
    for (const auto& v : basis) {
      auto av = a * v;
      for (const auto& x : av) CHECK(x == 0);
    }
    // kernel dim + row rank = 4
    CHECK(basis.size() + rank(a) == 4);
  }
}

TEST_CASE("congruence diagonalization signatures") {
  auto su = congruence_diagonalize(parse_lattice("U").gram);
  CHECK(su.positive == 1);
  CHECK(su.negative == 1);
  CHECK(su.zero == 0);

  auto sm = congruence_diagonalize(parse_lattice("<4>+<-2>").gram);
  CHECK(sm.positive == 1);
  CHECK(sm.negative == 1);

  auto sk = congruence_diagonalize(parse_lattice("U^3+E8^2").gram);
  CHECK(sk.positive == 3);
  CHECK(sk.negative == 19);
  CHECK(sk.zero == 0);
}

TEST_CASE("degenerate forms report corank") {
  IntMatrix g(2, 2);  // zero form
  auto s = congruence_diagonalize(g);
  CHECK(s.zero == 2);
  IntMatrix h(2, 2, {Int(2), Int(2), Int(2), Int(2)});
  auto t = congruence_diagonalize(h);
  CHECK(t.zero == 1);
  CHECK(t.positive == 1);
}

TEST_CASE("signature is a congruence invariant") {
  std::mt19937 rng(20250101);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    std::size_t n = dim(rng);
    IntMatrix g = random_symmetric_even(n, rng);
    auto s1 = congruence_diagonalize(g);
    IntMatrix q = random_unimodular(n, rng);
    IntMatrix g2 = q.transpose() * g * q;
    auto s2 = congruence_diagonalize(g2);
    CHECK(s1.positive == s2.positive);
    CHECK(s1.negative == s2.negative);
    CHECK(s1.zero == s2.zero);
  }
}
