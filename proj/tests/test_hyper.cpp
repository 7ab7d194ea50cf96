#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ccw/hyper.hpp"
#include "ccw/relations.hpp"

using namespace ccw;

namespace {

UnitRef u(const std::string& text) { return UnitRef::parse(text); }

struct Golden {
  Formula f = parse_formula("?~P | !P");
  Run run;
  Hyperatom alpha0{"P", {0, 2}, {1, 4}};
  Hyperatom alpha1{"P", {0, 3}, {1, 5}};

  Golden() {
    CopycatAdversary adv(f);
    run = run_counterstrategy(f, adv, 2).run;
  }
};

// Independent truth-table oracle: enumerates models as explicit Hypermodel
// values and reuses only `evaluate`, not the mask-based implementation.
bool oracle_tautology(const Hyperformula& hf) {
  std::vector<Hyperatom> atoms = distinct_hyperatoms(hf);
  REQUIRE(atoms.size() <= 20);
  uint64_t total = uint64_t{1} << atoms.size();
  for (uint64_t mask = 0; mask < total; ++mask) {
    Hypermodel model;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      model.assignment.emplace_back(atoms[i], ((mask >> i) & 1u) != 0);
    if (!evaluate(hf, model)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("hyperliteral of a politeral unit") {
  Golden g;
  Hyperformula p0 = hyperliteral_of(g.f, u("10@0"), g.run);
  CHECK(p0.kind() == HKind::PosLit);
  CHECK(p0.atom() == g.alpha0);

  Hyperformula np0 = hyperliteral_of(g.f, u("00@0"), g.run);
  CHECK(np0.kind() == HKind::NegLit);
  CHECK(np0.atom() == g.alpha0);  // origin ~P swaps the two sets

  Hyperformula empty = hyperliteral_of(parse_formula("P"), u("@"), {});
  CHECK(empty.kind() == HKind::PosLit);
  CHECK(empty.atom() == Hyperatom{"P", {}, {}});

  CHECK_THROWS(hyperliteral_of(g.f, u("1@"), g.run));
}

TEST_CASE("opposite politeral units give opposite hyperliterals") {
  Golden g;
  TruncUnitTree t = TruncUnitTree::build(g.f, 1, {});
  for (const auto& [l, m] : opposite_pairs(t, g.run).pairs) {
    Hyperformula hl = hyperliteral_of(g.f, l, g.run);
    Hyperformula hm = hyperliteral_of(g.f, m, g.run);
    CHECK(hl.atom() == hm.atom());
    CHECK(hl.kind() != hm.kind());
  }
}

TEST_CASE("build_hyperformula over untrimmed and trimmed trees") {
  Golden g;
  TruncUnitTree t = TruncUnitTree::build(g.f, 1, {});
  Hyperformula hf = build_hyperformula(t, g.run);
  REQUIRE(hf.kind() == HKind::Or);
  REQUIRE(hf.arity() == 2);
  const Hyperformula& corec = hf.child(0);
  const Hyperformula& rec = hf.child(1);
  REQUIRE(corec.kind() == HKind::Or);
  CHECK(corec.origin_kind() == FKind::CoRec);
  REQUIRE(corec.arity() == 2);
  CHECK(corec.child(0).kind() == HKind::NegLit);
  CHECK(corec.child(0).atom() == g.alpha0);
  CHECK(corec.child(1).atom() == g.alpha1);
  REQUIRE(rec.kind() == HKind::And);
  CHECK(rec.origin_kind() == FKind::Rec);
  REQUIRE(rec.arity() == 2);
  CHECK(rec.child(0).atom() == g.alpha0);
  CHECK(rec.child(1).atom() == g.alpha1);
  CHECK(rec.child(0).kind() == HKind::PosLit);

  TruncUnitTree tr = TruncUnitTree::build(g.f, 1, Resolution{{u("1@"), "0"}});
  Hyperformula hf2 = build_hyperformula(tr, g.run);
  REQUIRE(hf2.child(1).arity() == 1);
  CHECK(hf2.child(1).child(0).atom() == g.alpha0);

  Hyperformula lit = build_hyperformula(TruncUnitTree::build(parse_formula("P"), 0, {}), {});
  CHECK(lit.kind() == HKind::PosLit);
  CHECK(lit.atom() == Hyperatom{"P", {}, {}});
}

TEST_CASE("binarity") {
  Golden g;
  TruncUnitTree t = TruncUnitTree::build(g.f, 1, {});
  CHECK(is_binary(build_hyperformula(t, g.run)));
  Hyperatom a{"P", {1}, {2}};
  CHECK_FALSE(is_binary(Hyperformula::disj({Hyperformula::pos_lit(a), Hyperformula::pos_lit(a)})));
  CHECK(is_binary(Hyperformula::pos_lit(a)));
  // Trimming deletes occurrences, so it preserves binarity.
  TruncUnitTree tr = TruncUnitTree::build(g.f, 1, Resolution{{u("1@"), "0"}});
  CHECK(is_binary(build_hyperformula(tr, g.run)));
}

TEST_CASE("tautology checking") {
  Hyperatom a{"P", {1}, {2}};
  Hyperatom b{"Q", {}, {}};
  Hyperformula taut = Hyperformula::disj({Hyperformula::pos_lit(a), Hyperformula::neg_lit(a)});
  CHECK(is_tautology(taut));
  CHECK_FALSE(is_tautology(Hyperformula::conj({Hyperformula::pos_lit(a)})));

  Golden g;
  TruncUnitTree tr = TruncUnitTree::build(g.f, 1, Resolution{{u("1@"), "0"}});
  Hyperformula hf = build_hyperformula(tr, g.run);
  CHECK(is_tautology(hf));
  // The untrimmed image happens to be tautological for this formula too.
  CHECK(is_tautology(build_hyperformula(TruncUnitTree::build(g.f, 1, {}), g.run)));

  Hyperformula big = Hyperformula::conj({Hyperformula::pos_lit(a), Hyperformula::pos_lit(b)});
  CHECK_THROWS_AS(is_tautology(big, 1), BudgetError);
}

TEST_CASE("serial and parallel tautology paths agree with the oracle") {
  std::mt19937 rng(424242);
  auto random_hf = [&rng](int max_atoms, int depth) {
    std::vector<Hyperatom> pool;
    for (int i = 0; i < max_atoms; ++i)
      pool.push_back(Hyperatom{"A" + std::to_string(i), {static_cast<uint64_t>(i)}, {}});
    auto gen = [&rng, &pool](auto&& self, int d) -> Hyperformula {
      std::uniform_int_distribution<int> pick(0, d <= 0 ? 1 : 3);
      std::uniform_int_distribution<std::size_t> which(0, pool.size() - 1);
      switch (pick(rng)) {
        case 0: return Hyperformula::pos_lit(pool[which(rng)]);
        case 1: return Hyperformula::neg_lit(pool[which(rng)]);
        case 2: {
          std::vector<Hyperformula> kids;
          std::uniform_int_distribution<int> n(1, 3);
          for (int i = n(rng); i > 0; --i) kids.push_back(self(self, d - 1));
          return Hyperformula::conj(std::move(kids));
        }
        default: {
          std::vector<Hyperformula> kids;
          std::uniform_int_distribution<int> n(1, 3);
          for (int i = n(rng); i > 0; --i) kids.push_back(self(self, d - 1));
          return Hyperformula::disj(std::move(kids));
        }
      }
    };
    return gen(gen, depth);
  };

  for (int i = 0; i < 200; ++i) {
    Hyperformula hf = random_hf(4, 3);
    bool serial = is_tautology(hf, 20, EvalMode::Serial);
    bool parallel = is_tautology(hf, 20, EvalMode::Parallel);
    CHECK(serial == parallel);
    CHECK(serial == oracle_tautology(hf));
  }
  for (int i = 0; i < 30; ++i) {
    Hyperformula hf = random_hf(12, 4);
    CHECK(is_tautology(hf, 20, EvalMode::Serial) == is_tautology(hf, 20, EvalMode::Parallel));
  }
}

TEST_CASE("finitize") {
  Golden g;
  TruncUnitTree tr = TruncUnitTree::build(g.f, 1, Resolution{{u("1@"), "0"}});
  Hyperformula hf = build_hyperformula(tr, g.run);
  // The pipeline keeps the full truncated image.
  CHECK(finitize(hf) == hf);

  // Greedy pruning drops redundant ?-origin disjuncts down to one.
  Hyperatom a{"P", {}, {0}}, a1{"P", {}, {1}}, a2{"P", {}, {2}};
  Hyperformula inner = Hyperformula::disj(
      {Hyperformula::neg_lit(a, u("10@0"), FKind::NegAtom),
       Hyperformula::neg_lit(a1, u("10@1"), FKind::NegAtom),
       Hyperformula::neg_lit(a2, u("10@01"), FKind::NegAtom)},
      u("1@"), FKind::CoRec);
  Hyperformula whole = Hyperformula::disj(
      {Hyperformula::pos_lit(a, u("0@"), FKind::Atom), inner}, u("@"), FKind::Or);
  REQUIRE(is_tautology(whole));
  Hyperformula pruned = finitize(whole, true);
  CHECK(is_tautology(pruned));
  REQUIRE(pruned.arity() == 2);  // |-origin node keeps both disjuncts
  CHECK(pruned.child(1).arity() == 1);
  CHECK(pruned.child(1).child(0).atom() == a);

  CHECK_THROWS_AS(finitize(Hyperformula::pos_lit(a)), std::invalid_argument);
}

TEST_CASE("property: finitize outputs stay tautological and keep |-origin pairs") {
  std::mt19937 rng(5150);
  int done = 0;
  while (done < 60) {
    // Random tautologies with origin tags: an opposite pair under a ?-origin
    // disjunction, padded with noise literals.
    std::vector<Hyperformula> kids;
    Hyperatom key{"K", {static_cast<uint64_t>(done)}, {}};
    kids.push_back(Hyperformula::pos_lit(key, u("10@0"), FKind::Atom));
    kids.push_back(Hyperformula::neg_lit(key, u("10@1"), FKind::NegAtom));
    std::uniform_int_distribution<int> extra(0, 3);
    for (int i = extra(rng); i > 0; --i) {
      Hyperatom noise{"N" + std::to_string(i), {}, {static_cast<uint64_t>(i)}};
      kids.push_back(rng() % 2 ? Hyperformula::pos_lit(noise, u("10@01"), FKind::Atom)
                               : Hyperformula::neg_lit(noise, u("10@01"), FKind::NegAtom));
    }
    std::shuffle(kids.begin(), kids.end(), rng);
    Hyperformula hf = Hyperformula::disj(std::move(kids), u("1@"), FKind::CoRec);
    REQUIRE(is_tautology(hf));
    for (bool minimize : {false, true}) {
      Hyperformula out = finitize(hf, minimize);
      CHECK(is_tautology(out));
      CHECK(out.arity() >= 1);
    }
    ++done;
  }
}

TEST_CASE("property: dropping conjuncts of &-nodes preserves tautologicity") {
  Golden g;
  TruncUnitTree t = TruncUnitTree::build(g.f, 1, {});
  Hyperformula hf = build_hyperformula(t, g.run);
  REQUIRE(is_tautology(hf));
  // Drop either conjunct of the &-node; the result must stay tautological.
  for (std::size_t keep = 0; keep < 2; ++keep) {
    Hyperformula trimmed = Hyperformula::disj(
        {hf.child(0), Hyperformula::conj({hf.child(1).child(keep)}, hf.child(1).origin(),
                                         hf.child(1).origin_kind())},
        hf.origin(), hf.origin_kind());
    CHECK(is_tautology(trimmed));
  }
}

TEST_CASE("verdict") {
  Golden g;
  Hypermodel all_false;
  CHECK(verdict(parse_formula("P"), {}, all_false, 0) == Player::Bot);
  CHECK(verdict(g.f, g.run, all_false, 1) == Player::Top);  // ~alpha0 is true

  Hypermodel both_true;
  both_true.assignment.emplace_back(g.alpha0, true);
  both_true.assignment.emplace_back(g.alpha1, true);
  CHECK(verdict(g.f, g.run, both_true, 1) == Player::Top);  // via the &-branch

  Hypermodel only_a0;
  only_a0.assignment.emplace_back(g.alpha0, true);
  CHECK(verdict(g.f, g.run, only_a0, 1) == Player::Top);  // ~alpha1 is true
}

TEST_CASE("debug text form") {
  Hyperatom a{"P", {0, 2}, {1, 4}};
  CHECK(Hyperformula::pos_lit(a, u("10@0"), FKind::Atom).str() == "lit[10@0] P {0,2} {1,4}");
}
