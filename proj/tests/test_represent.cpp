#include <catch2/catch_amalgamated.hpp>

#include "k3mds/lattice_expr.hpp"
#include "k3mds/overlattice.hpp"
#include "k3mds/represent.hpp"

using namespace k3mds;

namespace {

std::vector<Int> iv(std::initializer_list<long> xs) {
  std::vector<Int> v;
  for (long x : xs) v.push_back(Int(x));
  return v;
}

// Independent of the block DP: plain enumeration of y mod m on the affine
// system.
bool brute_solvable_mod(const AffineQuadraticSystem& aff, long m) {
  std::size_t f = aff.gr.rows();
  Int want = ((aff.target - aff.c0) % m + m) % m;
  std::vector<Int> y(f);
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == f) {
      Int q(0);
      for (std::size_t a = 0; a < f; ++a) {
        q += 2 * aff.u[a] * y[a];
        for (std::size_t b = 0; b < f; ++b) q += aff.gr(a, b) * y[a] * y[b];
      }
      return ((q % m) + m) % m == want;
    }
    for (long c = 0; c < m; ++c) {
      y[i] = c;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  if (f == 0) return want == 0;
  return rec(rec, 0);
}

Lattice ns_sd(long d) { return parse_lattice("U+<" + std::to_string(-2 * d) + ">"); }

std::vector<Int> s1_of(long d) { return iv({d - 1, 1, 1}); }

}  // namespace

TEST_CASE("<4>+<-2> does not represent -6: obstruction at 9") {
  Lattice l = parse_lattice("<4>+<-2>");
  auto v = represents(l, {Int(-6), {}, std::nullopt});
  REQUIRE(v.kind == ReprVerdict::ObstructedMod);
  CHECK(v.modulus == 9);
  // independent oracle: the first modulus in the scan list with no solution
  for (Int m : {2, 3, 4, 8}) {
    auto aff = build_affine_system(l, {Int(-6), {}, std::nullopt});
    CHECK(brute_solvable_mod(aff, static_cast<long>(m)));
  }
  auto aff = build_affine_system(l, {Int(-6), {}, std::nullopt});
  CHECK(!brute_solvable_mod(aff, 9));
  // and a bounded search to 50 finds nothing
  for (long x = -50; x <= 50; ++x)
    for (long y = -50; y <= 50; ++y) REQUIRE(4 * x * x - 2 * y * y != -6);
}

TEST_CASE("<2>+<-8> represents 0 nontrivially") {
  Lattice l = parse_lattice("<2>+<-8>");
  auto v = represents(l, {Int(0), {}, std::nullopt});
  REQUIRE(v.kind == ReprVerdict::Witness);
  Int x = v.witness[0], y = v.witness[1];
  CHECK((x != 0 || y != 0));
  CHECK(2 * x * x - 8 * y * y == 0);
  CHECK(abs(x) == 2);
  CHECK(abs(y) == 1);
}

TEST_CASE("U represents -2 with a small witness") {
  auto v = represents(parse_lattice("U"), {Int(-2), {}, std::nullopt});
  REQUIRE(v.kind == ReprVerdict::Witness);
  CHECK(abs(v.witness[0]) == 1);
  CHECK(abs(v.witness[1]) == 1);
  CHECK(v.witness[0] * v.witness[1] == -1);
}

TEST_CASE("NS(S_d) blocks v^2 = -2, v.s1 = 1 mod 2 for even d") {
  for (long d : {2, 4, 12, 18}) {
    Lattice ns = ns_sd(d);
    ConstraintSystem sys{Int(-2), {{s1_of(d), Int(1)}}, std::nullopt};
    // the halved substituted equation is blocked mod 2 ...
    ReprConfig halved;
    halved.halved_scan = true;
    auto v = represents(ns, sys, halved);
    REQUIRE(v.kind == ReprVerdict::ObstructedMod);
    CHECK(v.modulus == 2);
    // ... equivalently the raw equation mod 4
    auto raw = represents(ns, sys);
    REQUIRE(raw.kind == ReprVerdict::ObstructedMod);
    CHECK(raw.modulus == 4);
    // and the B_X entry point reports the halved certificate
    auto bx = minus2_dot1_exists(ns, s1_of(d));
    REQUIRE(bx.kind == ReprVerdict::ObstructedMod);
    CHECK(bx.modulus == 2);
  }
}

TEST_CASE("odd target is rejected") {
  CHECK_THROWS_AS(represents(parse_lattice("U"), {Int(3), {}, std::nullopt}),
                  std::invalid_argument);
}

TEST_CASE("vector length mismatch is rejected") {
  ConstraintSystem sys{Int(-2), {{iv({1, 0, 0}), Int(1)}}, std::nullopt};
  CHECK_THROWS_AS(represents(parse_lattice("U"), sys), std::invalid_argument);
}

TEST_CASE("definite lattices are decided exhaustively") {
  Lattice l = parse_lattice("A2");  // negative definite
  auto yes = represents(l, {Int(-2), {}, std::nullopt});
  REQUIRE(yes.kind == ReprVerdict::Witness);
  auto no = represents(l, {Int(-10), {}, std::nullopt});
  CHECK(no.kind == ReprVerdict::NoneExhaustive);
  // E8(-1) is positive definite and represents every small even positive norm
  Lattice e8 = parse_lattice("E8(-1)");
  CHECK(represents(e8, {Int(2), {}, std::nullopt}).kind == ReprVerdict::Witness);
  CHECK(represents(e8, {Int(-2), {}, std::nullopt}).kind == ReprVerdict::NoneExhaustive);
}

TEST_CASE("definite restriction of an indefinite lattice") {
  // in U + A1, the constraint v.(e1+e2) = 0 restricts to a definite plane
  Lattice l = parse_lattice("U+A1");
  std::vector<Int> h = iv({1, 1, 0});
  ConstraintSystem sys{Int(-4), {{h, Int(0)}}, std::nullopt};
  auto v = represents(l, sys);
  REQUIRE(v.kind == ReprVerdict::Witness);
  ConstraintSystem sys2{Int(-12), {{h, Int(0)}}, std::nullopt};
  // -12 = -2 a^2 - 2 b^2 has no solution (6 is not a sum of two squares)
  CHECK(represents(l, sys2).kind == ReprVerdict::NoneExhaustive);
}

TEST_CASE("definite enumeration with an affine center") {
  // in A2 the constraint v.e1 = 1 leaves a definite line with offset; the
  // norm -2 points on it are (0,1) and (-1,-1), and -4 misses entirely
  Lattice a2 = parse_lattice("A2");
  ConstraintSystem hit{Int(-2), {{iv({1, 0}), Int(1)}}, std::nullopt};
  auto v = represents(a2, hit);
  REQUIRE(v.kind == ReprVerdict::Witness);
  CHECK((v.witness == iv({0, 1}) || v.witness == iv({-1, -1})));
  ConstraintSystem miss{Int(-4), {{iv({1, 0}), Int(1)}}, std::nullopt};
  CHECK(represents(a2, miss).kind == ReprVerdict::NoneExhaustive);
}

TEST_CASE("coset constraints with odd modulus") {
  // v = (1,0) mod 3U with v^2 = 6: v = (1+3a, 3b) needs b(1+3a) = 1
  Lattice u = parse_lattice("U");
  ConstraintSystem sys{Int(6), {}, std::make_pair(iv({1, 0}), Int(3))};
  auto v = represents(u, sys);
  REQUIRE(v.kind == ReprVerdict::Witness);
  CHECK(v.witness[0] % 3 == 1);
  CHECK(v.witness[1] % 3 == 0);
  CHECK(2 * v.witness[0] * v.witness[1] == 6);
}

TEST_CASE("unsolvable linear constraints give an exact no") {
  Lattice l = parse_lattice("U");
  // v.e2 pairs as v_1, so v.(2 e2) = 1 is unsolvable over Z
  ConstraintSystem sys{Int(0), {{iv({0, 2}), Int(1)}}, std::nullopt};
  auto v = represents(l, sys);
  CHECK(v.kind == ReprVerdict::NoneExhaustive);
}

TEST_CASE("incompatible coset gives an exact no") {
  Lattice l = parse_lattice("U");
  ConstraintSystem sys{Int(0), {{iv({0, 1}), Int(0)}}, std::make_pair(iv({1, 1}), Int(2))};
  // v.e2 = 0 forces v_1 = 0 = w_1 = 1 mod 2: impossible
  auto v = represents(l, sys);
  CHECK(v.kind == ReprVerdict::NoneExhaustive);
}

TEST_CASE("<2>+<-14> is blocked mod 8 from representing -2") {
  Lattice l = parse_lattice("<2>+<-14>");
  auto v = represents(l, {Int(-2), {}, std::nullopt});
  REQUIRE(v.kind == ReprVerdict::ObstructedMod);
  CHECK(v.modulus == 8);
}

TEST_CASE("indefinite with a distant witness returns unknown") {
  // x^2 - 61 y^2 = -1 is solvable, but its fundamental solution is
  // (29718, 3805), far outside the default shell bound
  Lattice l = parse_lattice("<2>+<-122>");
  auto v = represents(l, {Int(-2), {}, std::nullopt});
  CHECK(v.kind == ReprVerdict::Unknown);
  CHECK(v.bound == 32);
  auto pell = negative_pell(Int(61));
  REQUIRE(pell.kind == ReprVerdict::Witness);
  CHECK(pell.witness == iv({29718, 3805}));
}

TEST_CASE("congruence monotonicity on divisors") {
  for (auto expr : {"<4>+<-2>", "U(2)", "A3+A1"}) {
    Lattice l = parse_lattice(expr);
    for (long t : {0, -2, -4, -6, 2}) {
      auto aff = build_affine_system(l, {Int(2 * (t / 2)), {}, std::nullopt});
      for (long m : {4, 8, 9, 16, 27}) {
        auto big = dp_solvable_mod(aff, Int(m));
        REQUIRE(big.has_value());
        if (*big) {
          for (long dvs = 2; dvs < m; ++dvs) {
            if (m % dvs != 0) continue;
            auto small = dp_solvable_mod(aff, Int(dvs));
            REQUIRE(small.has_value());
            CHECK(*small);
          }
        }
      }
    }
  }
}

TEST_CASE("block DP agrees with brute force on rank <= 4 systems") {
  std::vector<std::string> corpus = {"U",  "U(2)", "A2", "A3",  "<4>+<-2>",
                                     "D4", "A1^4", "U+A1^2", "<2>+<-6>", "<2>+<-8>"};
  for (const auto& expr : corpus) {
    Lattice l = parse_lattice(expr);
    for (long t : {0, 2, -2, -4, -6}) {
      AffineQuadraticSystem aff = build_affine_system(l, {Int(t), {}, std::nullopt});
      for (long m : {2, 3, 4, 8, 9}) {
        auto dp = dp_solvable_mod(aff, Int(m));
        REQUIRE(dp.has_value());
        INFO(expr << " t=" << t << " m=" << m);
        CHECK(*dp == brute_solvable_mod(aff, m));
      }
    }
  }
}

TEST_CASE("block DP agrees with brute force under constraints") {
  // linear constraint
  Lattice l = parse_lattice("<4>+<-2>");
  ConstraintSystem c1{Int(-2), {{iv({1, 0}), Int(4)}}, std::nullopt};
  // coset constraint, exercising the period reduction at 16 and 32
  ConstraintSystem c2{Int(-6), {}, std::make_pair(iv({1, 1}), Int(2))};
  Lattice l2 = parse_lattice("U(2)+A1^2");
  ConstraintSystem c3{Int(-6), {}, std::make_pair(iv({0, 0, 1, 1}), Int(2))};
  struct Case {
    Lattice* lat;
    ConstraintSystem* sys;
  } cases[] = {{&l, &c1}, {&l, &c2}, {&l2, &c3}};
  for (auto& [lat, sys] : cases) {
    auto aff = build_affine_system(*lat, *sys);
    REQUIRE(!aff.empty);
    for (long m : {2, 3, 4, 8, 9, 16}) {
      auto dp = dp_solvable_mod(aff, Int(m));
      REQUIRE(dp.has_value());
      CHECK(*dp == brute_solvable_mod(aff, m));
    }
  }
}

TEST_CASE("binary form isotropy") {
  auto v = binary_form_tools(Int(2), Int(0), Int(-18), BinaryQuery::Isotropic);
  REQUIRE(v.kind == ReprVerdict::Witness);
  CHECK(v.witness == iv({3, 1}));
  CHECK(binary_form_tools(Int(2), Int(0), Int(-14), BinaryQuery::Isotropic).kind ==
        ReprVerdict::NoneExhaustive);
  CHECK(binary_form_tools(Int(2), Int(0), Int(6), BinaryQuery::Isotropic).kind ==
        ReprVerdict::NoneExhaustive);
  CHECK_THROWS_AS(binary_form_tools(Int(1), Int(1), Int(1), BinaryQuery::Isotropic),
                  std::invalid_argument);
}

TEST_CASE("negative Pell solutions") {
  auto p2 = negative_pell(Int(2));
  REQUIRE(p2.kind == ReprVerdict::Witness);
  CHECK(p2.witness == iv({1, 1}));
  auto p5 = negative_pell(Int(5));
  REQUIRE(p5.kind == ReprVerdict::Witness);
  CHECK(p5.witness == iv({2, 1}));
  CHECK(negative_pell(Int(3)).kind == ReprVerdict::NoneExhaustive);
  auto p13 = negative_pell(Int(13));
  REQUIRE(p13.kind == ReprVerdict::Witness);
  CHECK(p13.witness == iv({18, 5}));
  CHECK(negative_pell(Int(4)).kind == ReprVerdict::NoneExhaustive);
  CHECK(negative_pell(Int(1)).kind == ReprVerdict::Witness);
  // witnesses satisfy x^2 - d y^2 = -1 (checked internally as well)
  for (long d : {2, 5, 10, 13, 17, 26, 29}) {
    auto p = negative_pell(Int(d));
    REQUIRE(p.kind == ReprVerdict::Witness);
    CHECK(p.witness[0] * p.witness[0] - d * p.witness[1] * p.witness[1] == -1);
  }
  for (long d : {3, 6, 7, 8, 12, 15, 20}) CHECK(negative_pell(Int(d)).kind ==
                                                 ReprVerdict::NoneExhaustive);
}

TEST_CASE("pell query demands the <2>+<-2d> shape") {
  auto v = binary_form_tools(Int(2), Int(0), Int(-4), BinaryQuery::RepresentsMinus2For2Minus2d,
                             Int(2));
  REQUIRE(v.kind == ReprVerdict::Witness);
  CHECK(2 * v.witness[0] * v.witness[0] - 4 * v.witness[1] * v.witness[1] == -2);
  CHECK_THROWS_AS(
      binary_form_tools(Int(2), Int(1), Int(-4), BinaryQuery::RepresentsMinus2For2Minus2d, Int(2)),
      std::invalid_argument);
}

TEST_CASE("B_X fast path: U+E8^2+A1^2 with the last A1") {
  Lattice l = parse_lattice("U+E8^2+A1^2");
  std::vector<Int> n(20);
  n[19] = 1;
  auto v = minus2_dot1_exists(l, n);
  REQUIRE(v.kind == ReprVerdict::ObstructedMod);
  CHECK(v.modulus == 2);
}

TEST_CASE("B_X on the index-2 overlattice U+E8(2) is blocked mod 4 (halved: 2)") {
  auto e = even_overlattices(parse_lattice("U(2)+A1^8"), 2);
  const OverlatticeResult* cls = nullptr;
  for (const auto& c : e.classes)
    if (c.integral_q) cls = &c;
  REQUIRE(cls != nullptr);
  std::vector<Int> n8 = cls->base_in_result.row(9);  // the last A1 generator
  auto v = minus2_dot1_exists(cls->lattice, n8);
  REQUIRE(v.kind == ReprVerdict::ObstructedMod);
  // halved certificate at 2 = raw equation blocked mod 4
  CHECK(v.modulus == 2);
  ConstraintSystem direct{Int(-2), {{n8, Int(1)}}, std::nullopt};
  auto raw = represents(cls->lattice, direct);
  REQUIRE(raw.kind == ReprVerdict::ObstructedMod);
  CHECK(raw.modulus == 4);
}

TEST_CASE("B_X witness s0 on NS(S_3)") {
  Lattice ns = ns_sd(3);
  auto v = minus2_dot1_exists(ns, s1_of(3));
  REQUIRE(v.kind == ReprVerdict::Witness);
  LatticeVector w{v.witness};
  CHECK(norm(ns, w) == -2);
  CHECK(pairing(ns, w, LatticeVector{s1_of(3)}) == 1);
  // the minimal witness is the zero section s0 = b2 - b1
  CHECK(v.witness == iv({-1, 1, 0}));
}

TEST_CASE("B_X input validation") {
  Lattice u = parse_lattice("U");
  CHECK_THROWS_AS(minus2_dot1_exists(u, iv({1, 0})), std::invalid_argument);   // norm 0
  Lattice a = parse_lattice("A1+A1");
  CHECK_THROWS_AS(minus2_dot1_exists(a, iv({2, 1})), std::invalid_argument);   // norm != -2
}

TEST_CASE("<4>+<-2> represents -6 on no tested coset") {
  Lattice l = parse_lattice("<4>+<-2>");
  for (long a : {0, 1})
    for (long b : {0, 1}) {
      ConstraintSystem sys{Int(-6), {}, std::make_pair(iv({a, b}), Int(2))};
      auto v = represents(l, sys);
      CHECK(v.kind != ReprVerdict::Witness);
      CHECK(v.kind != ReprVerdict::Unknown);
      // independent bounded check on the coset
      for (long x = -49 + a; x <= 50; x += 2)
        for (long y = -49 + b; y <= 50; y += 2) REQUIRE(4 * x * x - 2 * y * y != -6);
    }
}

TEST_CASE("both rank-3 geometric models have the clean contraction wall") {
  // the two models share the contracted lattice <4>+<-2>, which misses -6,
  // so neither carries a (-2)-class meeting the contracted curve once
  Lattice x = parse_lattice("<4>+<-2>+<-2>");
  auto vx = minus2_dot1_exists(x, iv({0, 0, 1}));
  CHECK(vx.kind == ReprVerdict::ObstructedMod);
  CHECK(vx.modulus == 2);  // parity fast path: the summand pairs evenly

  Lattice s = parse_lattice("U+<-4>");
  auto vs = minus2_dot1_exists(s, iv({-1, 1, 0}));  // the contracted section
  REQUIRE(vs.kind == ReprVerdict::ObstructedMod);
  // consecutive-integer parity already blocks xy - 2z^2 = -1 on the wall
  CHECK(vs.modulus == 2);
}

TEST_CASE("obstructions imply an empty bounded search on the corpus") {
  struct Case {
    std::string expr;
    long target;
  } cases[] = {{"<4>+<-2>", -6}, {"<2>+<-4>", -2}};
  for (const auto& c : cases) {
    Lattice l = parse_lattice(c.expr);
    auto v = represents(l, {Int(c.target), {}, std::nullopt});
    if (v.kind != ReprVerdict::ObstructedMod) continue;
    for (long x = -50; x <= 50; ++x)
      for (long y = -50; y <= 50; ++y) {
        Int q = l.gram(0, 0) * x * x + 2 * l.gram(0, 1) * x * y + l.gram(1, 1) * y * y;
        REQUIRE(q != c.target);
      }
  }
}
