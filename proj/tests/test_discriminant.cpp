#include <catch2/catch_amalgamated.hpp>

#include "k3mds/lattice_expr.hpp"
#include "support.hpp"

using namespace k3mds;
using k3mds::testing::element_with_lift;
using k3mds::testing::milgram_defect;

namespace {
std::vector<Int> factors(const std::string& expr) {
  return discriminant_group(parse_lattice(expr)).invariant_factors;
}
}  // namespace

TEST_CASE("discriminant groups of the headline lattices") {
  CHECK(factors("U+E8^2+A1^2") == std::vector<Int>{Int(2), Int(2)});
  CHECK(factors("U+E8^2+A1") == std::vector<Int>{Int(2)});
  CHECK(factors("<4>+<-2>") == std::vector<Int>{Int(2), Int(4)});
  CHECK(factors("U+<-4>") == std::vector<Int>{Int(4)});
  CHECK(factors("U(2)+A1^8") == std::vector<Int>(10, Int(2)));
  CHECK(factors("E8(2)") == std::vector<Int>(8, Int(2)));
  CHECK(factors("U").empty());
}

TEST_CASE("group order equals |det| on a mixed corpus") {
  for (auto expr : {"U", "U(2)", "A2", "A7", "D5", "E6", "E7", "U+D8+D4", "<2>+<-6>",
                    "U+A7+A1", "E8(2)", "U(3)+A2^2"}) {
    Lattice l = parse_lattice(expr);
    CHECK(discriminant_form(l).group_order() == abs(det(l.gram)));
  }
}

TEST_CASE("degenerate lattices are rejected") {
  IntMatrix g(2, 2, {Int(2), Int(2), Int(2), Int(2)});
  Lattice l(g, {"b1", "b2"}, "degenerate");
  CHECK_THROWS_AS(discriminant_form(l), std::domain_error);
}

TEST_CASE("<4>+<-2> has the n1/4, n2/2 form values") {
  auto fqf = discriminant_form(parse_lattice("<4>+<-2>"));
  auto n1q = element_with_lift(fqf, {Rat(1, 4), Rat(0)});
  auto n2q = element_with_lift(fqf, {Rat(0), Rat(1, 2)});
  CHECK(fqf.order_of(n1q) == 4);
  CHECK(fqf.order_of(n2q) == 2);
  CHECK(fqf.q(n1q) == Rat(1, 4));
  CHECK(fqf.q(n2q) == Rat(3, 2));  // -1/2 mod 2Z
  // hand-derived multiset of (order, q) over all 8 elements
  std::map<std::pair<Int, Rat>, long> expected{
      {{Int(1), Rat(0)}, 1},     {{Int(4), Rat(1, 4)}, 2}, {{Int(2), Rat(1)}, 1},
      {{Int(2), Rat(3, 2)}, 1},  {{Int(4), Rat(7, 4)}, 2}, {{Int(2), Rat(1, 2)}, 1}};
  CHECK(fqf.value_histogram() == expected);
}

TEST_CASE("q on <-2> and U(2)") {
  auto fm2 = discriminant_form(parse_lattice("<-2>"));
  auto half = element_with_lift(fm2, {Rat(1, 2)});
  CHECK(fm2.q(half) == Rat(3, 2));  // (1/2)^2 * (-2) = -1/2 mod 2Z

  auto fu2 = discriminant_form(parse_lattice("U(2)"));
  auto u1 = element_with_lift(fu2, {Rat(1, 2), Rat(0)});
  auto u2 = element_with_lift(fu2, {Rat(0), Rat(1, 2)});
  CHECK(fu2.q(u1) == 0);
  CHECK(fu2.q(u2) == 0);
  CHECK(fu2.b(u1, u2) == Rat(1, 2));
}

TEST_CASE("E8(2) has integral discriminant form values") {
  auto fqf = discriminant_form(parse_lattice("E8(2)"));
  CHECK(fqf.group_order() == 256);
  CHECK(fqf.q_is_integral());
}

TEST_CASE("q and b satisfy the defining identities") {
  for (auto expr : {"<4>+<-2>", "U(2)+A1^2", "A7", "D5+A2"}) {
    auto fqf = discriminant_form(parse_lattice(expr));
    auto els = fqf.elements();
    for (std::size_t i = 0; i < els.size(); i += 3)
      for (std::size_t j = 0; j < els.size(); j += 5) {
        const auto& x = els[i];
        const auto& y = els[j];
        // q(x+y) - q(x) - q(y) = 2 b(x,y) in Q/2Z
        CHECK(mod2z(fqf.q(fqf.add(x, y)) - fqf.q(x) - fqf.q(y)) == mod2z(2 * fqf.b(x, y)));
        // q(3x) = 9 q(x)
        CHECK(fqf.q(fqf.scale(3, x)) == mod2z(9 * fqf.q(x)));
      }
  }
}

TEST_CASE("fqf isomorphism: U(2)+A1^8 vs <2>+<-2>^9") {
  auto a = discriminant_form(parse_lattice("U(2)+A1^8"));
  auto b = discriminant_form(parse_lattice("<2>+<-2>^9"));
  auto v = fqf_isomorphic(a, b);
  REQUIRE(v.result == Tri::Yes);
  CHECK(v.witness.cols() == 10);
}

TEST_CASE("fqf isomorphism separates <2> from <-2>") {
  auto a = discriminant_form(parse_lattice("<2>"));
  auto b = discriminant_form(parse_lattice("<-2>"));
  auto v = fqf_isomorphic(a, b);
  REQUIRE(v.result == Tri::No);
  CHECK(v.reason.find("value multisets") != std::string::npos);
}

TEST_CASE("trivial forms are isomorphic") {
  auto a = discriminant_form(parse_lattice("E8"));
  auto b = discriminant_form(parse_lattice("U"));
  CHECK(fqf_isomorphic(a, b).result == Tri::Yes);
}

TEST_CASE("genus equality: U+D8+D4+A1 vs U+E8+A1^5") {
  auto v = genus_equal(parse_lattice("U+D8+D4+A1"), parse_lattice("U+E8+A1^5"));
  REQUIRE(v.result == Tri::Yes);
  CHECK(v.isometry_caveat);
}

TEST_CASE("genus inequality: U vs U(2)") {
  auto v = genus_equal(parse_lattice("U"), parse_lattice("U(2)"));
  REQUIRE(v.result == Tri::No);
  CHECK(v.reason.find("group orders differ") != std::string::npos);
}

TEST_CASE("genus_equal is reflexive and symmetric on the corpus") {
  std::vector<std::string> corpus = {"U+E8^2+A1", "U(2)+A1^7", "U+D8+D4", "<2>+<-2d>"};
  corpus.back() = "<2>+<-6>";
  for (const auto& e1 : corpus) {
    Lattice l1 = parse_lattice(e1);
    CHECK(genus_equal(l1, l1).result == Tri::Yes);
    for (const auto& e2 : corpus) {
      Lattice l2 = parse_lattice(e2);
      CHECK(genus_equal(l1, l2).result == genus_equal(l2, l1).result);
    }
  }
}

TEST_CASE("genus transitivity across the rank-15 identifications") {
  // two presentations equal to a third are equal to each other
  Lattice a = parse_lattice("U+D8+D4+A1");
  Lattice b = parse_lattice("U+E8+A1^5");
  Lattice c = parse_lattice("U+A1^5+E8");
  CHECK(genus_equal(a, b).result == Tri::Yes);
  CHECK(genus_equal(b, c).result == Tri::Yes);
  CHECK(genus_equal(a, c).result == Tri::Yes);
}

TEST_CASE("Milgram signature relation holds across the corpus") {
  for (auto expr : {"U", "U(2)", "<4>+<-2>", "A2", "A7", "D4", "D5", "E6", "E7", "E8(2)",
                    "U(2)+A1^8", "<2>+<-2>^9", "U+E8^2+A1^2", "U+D8+D4+A1"}) {
    INFO(expr);
    CHECK(milgram_defect(parse_lattice(expr)) < 1e-9);
  }
}
