#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ccw/formula.hpp"

using namespace ccw;

TEST_CASE("parse builds the expected trees") {
  Formula f = parse_formula("P & (~Q | ~Q)");
  REQUIRE(f.kind() == FKind::And);
  CHECK(f.child(0) == Formula::atom("P"));
  CHECK(f.child(1) == Formula::disj(Formula::neg_atom("Q"), Formula::neg_atom("Q")));

  CHECK(parse_formula("~(P & Q)") == Formula::disj(Formula::neg_atom("P"), Formula::neg_atom("Q")));

  Formula g = parse_formula("?~P | !P");
  CHECK(g == Formula::disj(Formula::corec(Formula::neg_atom("P")), Formula::rec(Formula::atom("P"))));
}

TEST_CASE("general negation normalizes to literal normal form") {
  CHECK(parse_formula("~~P") == Formula::atom("P"));
  CHECK(parse_formula("~(P | Q & R)") ==
        Formula::conj(Formula::neg_atom("P"),
                      Formula::disj(Formula::neg_atom("Q"), Formula::neg_atom("R"))));
  CHECK(parse_formula("~!P") == parse_formula("?~P"));
  CHECK(parse_formula("~?P") == parse_formula("!~P"));
  CHECK(parse_formula("~!(P & ?Q)") == parse_formula("?(~P | !~Q)"));
}

TEST_CASE("unicode aliases accepted") {
  CHECK(parse_formula("¬P ∧ Q") == parse_formula("~P & Q"));
  CHECK(parse_formula("P ∨ Q") == parse_formula("P | Q"));
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("   "), ParseError);
  CHECK_THROWS_AS(parse_formula("P &"), ParseError);
  CHECK_THROWS_AS(parse_formula("(P"), ParseError);
  CHECK_THROWS_AS(parse_formula("p"), ParseError);
  CHECK_THROWS_AS(parse_formula("P Q"), ParseError);
  try {
    parse_formula("P & *");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
  }
}

TEST_CASE("render round-trips and matches expected strings") {
  CHECK(render(parse_formula("P & (~Q | ~Q)")) == "P & (~Q | ~Q)");
  CHECK(render(Formula::atom("P")) == "P");
  CHECK(render(parse_formula("?~P | !P")) == "?~P | !P");
  CHECK(render(parse_formula("!(P & Q)")) == "!(P & Q)");
}

TEST_CASE("subformula_at") {
  Formula f = parse_formula("P & (~Q | ~Q)");
  CHECK(subformula_at(f, {}) == f);
  CHECK(subformula_at(f, Position{{1, 0}}) == Formula::neg_atom("Q"));
  Formula g = parse_formula("?~P | !P");
  CHECK(subformula_at(g, Position{{1, 0}}) == Formula::atom("P"));
  CHECK_THROWS_AS(subformula_at(g, Position{{0, 0, 0}}), std::out_of_range);
}

TEST_CASE("politerals") {
  auto ps = politerals(parse_formula("P & (~Q | ~Q)"));
  REQUIRE(ps.size() == 3);
  CHECK(ps[0] == Position{{0}});
  CHECK(ps[1] == Position{{1, 0}});
  CHECK(ps[2] == Position{{1, 1}});

  CHECK(politerals(Formula::atom("P")) == std::vector<Position>{Position{}});

  auto qs = politerals(parse_formula("?~P | !P"));
  REQUIRE(qs.size() == 2);
  CHECK(qs[0] == Position{{0, 0}});
  CHECK(qs[1] == Position{{1, 0}});
}

TEST_CASE("modal_depth") {
  CHECK(modal_depth(parse_formula("P & (~Q | ~Q)"), Position{{1, 0}}) == 0);
  CHECK(modal_depth(parse_formula("?~P | !P"), Position{{1, 0}}) == 1);
  CHECK(modal_depth(parse_formula("!?P"), Position{{0, 0}}) == 2);
  CHECK(modal_depth(parse_formula("!?P"), Position{}) == 0);
}

namespace {

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  std::uniform_int_distribution<int> atom(0, 2);
  std::string name(1, static_cast<char>('P' + atom(rng)));
  switch (pick(rng)) {
    case 0: return Formula::atom(name);
    case 1: return Formula::neg_atom(name);
    case 2: return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 3: return Formula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4: return Formula::rec(random_formula(rng, depth - 1));
    default: return Formula::corec(random_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("property: parse after render is the identity") {
  std::mt19937 rng(20240817);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 5);
    CHECK(parse_formula(render(f)) == f);
  }
}

TEST_CASE("property: politerals are literals with no negated ancestor") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    Formula f = random_formula(rng, 4);
    for (const Position& p : politerals(f)) {
      Formula sub = subformula_at(f, p);
      CHECK(is_literal(sub.kind()));
    }
  }
}

TEST_CASE("negate is an involution and swaps duals") {
  std::mt19937 rng(99);
  for (int i = 0; i < 200; ++i) {
    Formula f = random_formula(rng, 4);
    CHECK(negate(negate(f)) == f);
  }
  CHECK(negate(parse_formula("!P")) == parse_formula("?~P"));
}
