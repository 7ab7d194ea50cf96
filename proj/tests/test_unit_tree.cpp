#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "ccw/unit_tree.hpp"

using namespace ccw;

namespace {

UnitRef u(const std::string& text) { return UnitRef::parse(text); }

}  // namespace

TEST_CASE("unit syntax round trip") {
  CHECK(u("@").pos.path.empty());
  CHECK(u("@").branches.empty());
  CHECK(u("00@e") == UnitRef{Position{{0, 0}}, {""}});
  CHECK(u("10@0") == UnitRef{Position{{1, 0}}, {"0"}});
  CHECK(u("00@01,1") == UnitRef{Position{{0, 0}}, {"01", "1"}});
  for (const char* s : {"@", "00@e", "10@0", "00@01,1"}) CHECK(UnitRef::parse(s).str() == s);
}

TEST_CASE("build: untrimmed truncation of the golden formula") {
  Formula f = parse_formula("?~P | !P");
  TruncUnitTree t = TruncUnitTree::build(f, 1, {});
  CHECK(t.size() == 7);
  std::set<UnitRef> lits;
  for (int i : t.politeral_units()) lits.insert(t.unit(static_cast<std::size_t>(i)));
  CHECK(lits == std::set<UnitRef>{u("00@0"), u("00@1"), u("10@0"), u("10@1")});
  REQUIRE(t.rec_units().size() == 1);
  CHECK(t.unit(static_cast<std::size_t>(t.rec_units()[0])) == u("1@"));
  CHECK_FALSE(t.resolution_total());
}

TEST_CASE("build: resolving trims the other branches") {
  Formula f = parse_formula("?~P | !P");
  Resolution r{{u("1@"), "0"}};
  TruncUnitTree t = TruncUnitTree::build(f, 1, r);
  CHECK(t.contains(u("10@0")));
  CHECK_FALSE(t.contains(u("10@1")));
  CHECK(t.size() == 6);
  CHECK(t.resolution_total());
  int rec = t.rec_units()[0];
  CHECK(t.unit(static_cast<std::size_t>(t.resolvent(rec))) == u("10@0"));
}

TEST_CASE("build: modal-free formula is its parse tree at any height") {
  for (int h : {0, 1, 3}) {
    TruncUnitTree t = TruncUnitTree::build(parse_formula("P & Q"), h, {});
    CHECK(t.size() == 3);
  }
}

TEST_CASE("build: node count is 2^(h*d) per position") {
  // !?P at h=1: 1 root + 2 children of ! + 4 grandchildren.
  TruncUnitTree t = TruncUnitTree::build(parse_formula("!?P"), 1, {});
  CHECK(t.size() == 7);
  TruncUnitTree t2 = TruncUnitTree::build(parse_formula("!?P"), 2, {});
  CHECK(t2.size() == 21);
}

TEST_CASE("build: budget exceeded fails loudly") {
  CHECK_THROWS_AS(TruncUnitTree::build(parse_formula("!?!?P"), 2, {}, 100), BudgetError);
}

TEST_CASE("smallest common superunit") {
  Formula f = parse_formula("?~P | !P");
  TruncUnitTree t = TruncUnitTree::build(f, 1, {});
  auto scs_of = [&](const UnitRef& a, const UnitRef& b) {
    return t.unit(static_cast<std::size_t>(t.scs(t.index_of(a), t.index_of(b))));
  };
  CHECK(scs_of(u("00@0"), u("10@0")) == u("@"));
  CHECK(scs_of(u("00@0"), u("0@")) == u("0@"));
  CHECK(scs_of(u("00@0"), u("00@0")) == u("00@0"));
  CHECK(scs_of(u("00@0"), u("00@1")) == u("0@"));
}

TEST_CASE("subunit relation on refs") {
  CHECK(is_subunit_ref(u("10@0"), u("1@")));
  CHECK(is_subunit_ref(u("10@0"), u("@")));
  CHECK_FALSE(is_subunit_ref(u("1@"), u("10@0")));
  CHECK_FALSE(is_subunit_ref(u("10@0"), u("10@1")));
  CHECK(incomparable(u("10@0"), u("10@1")));
  CHECK_FALSE(incomparable(u("10@0"), u("1@")));
}

TEST_CASE("resolution extension") {
  Resolution r1{{u("1@"), "0"}};
  Resolution r2{{u("1@"), "0"}, {u("0@"), "1"}};
  CHECK(resolution_extends(r2, r1));
  CHECK_FALSE(resolution_extends(r1, r2));
  CHECK(resolution_extends(r1, Resolution{}));
}

TEST_CASE("restrict_at and dm-incomparability track the run height") {
  Formula f = parse_formula("?~P | !P");
  SilentAdversary adv;
  Run run = run_counterstrategy(f, adv, 2).run;

  // After pass one (cycles 1-2) the active height is 0.
  CHECK(restrict_at(f, u("10@0"), run, 2) == Funit{Position{{1, 0}}, {""}});
  // After pass two it is 1.
  CHECK(restrict_at(f, u("10@0"), run, 6) == Funit{Position{{1, 0}}, {"0"}});
  // Depth-0 units restrict to themselves.
  CHECK(restrict_at(parse_formula("P"), u("@"), {}, kNoCycleBound) == Funit{Position{}, {}});

  CHECK_FALSE(dm_incomparable(f, u("00@0"), u("00@1"), run, 2));
  CHECK(dm_incomparable(f, u("00@0"), u("00@1"), run, 6));
}

TEST_CASE("resolution keys are validated") {
  Formula f = parse_formula("?~P | !P");
  CHECK_THROWS(TruncUnitTree::build(f, 1, Resolution{{u("0@"), "0"}}));
  CHECK_THROWS(TruncUnitTree::build(f, 1, Resolution{{u("1@"), "00"}}));
}
