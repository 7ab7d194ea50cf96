#pragma once

// Hyperatoms (P,A,B), finite-arity hyperformulas over them with a unital
// origin map, truth-table tautology checking (serial and OpenMP-parallel
// paths), finitization, and the win-verdict construction.

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ccw/unit_tree.hpp"

namespace ccw {

struct Hyperatom {
  std::string atom;
  std::set<uint64_t> A;  // numerals enumerated by the adversary
  std::set<uint64_t> B;  // numerals enumerated by the counterstrategy

  auto operator<=>(const Hyperatom&) const = default;
  std::string str() const;
};

enum class HKind { PosLit, NegLit, And, Or };

class Hyperformula {
 public:
  Hyperformula() = default;

  static Hyperformula pos_lit(Hyperatom a);
  static Hyperformula neg_lit(Hyperatom a);
  static Hyperformula conj(std::vector<Hyperformula> kids);
  static Hyperformula disj(std::vector<Hyperformula> kids);

  // Origin-tagged variants used when building from a unit tree.
  static Hyperformula pos_lit(Hyperatom a, UnitRef origin, FKind origin_kind);
  static Hyperformula neg_lit(Hyperatom a, UnitRef origin, FKind origin_kind);
  static Hyperformula conj(std::vector<Hyperformula> kids, UnitRef origin, FKind origin_kind);
  static Hyperformula disj(std::vector<Hyperformula> kids, UnitRef origin, FKind origin_kind);

  bool valid() const { return node_ != nullptr; }
  HKind kind() const { return node()->kind; }
  bool is_literal() const { return kind() == HKind::PosLit || kind() == HKind::NegLit; }
  const Hyperatom& atom() const { return node()->atom; }
  const UnitRef& origin() const { return node()->origin; }
  FKind origin_kind() const { return node()->origin_kind; }
  std::size_t arity() const { return node()->kids.size(); }
  const Hyperformula& child(std::size_t i) const { return node()->kids.at(i); }

  bool operator==(const Hyperformula& other) const;
  bool operator!=(const Hyperformula& other) const { return !(*this == other); }

  // Debug text form; not a stability-guaranteed format.
  std::string str() const;

 private:
  struct Node {
    HKind kind;
    Hyperatom atom;
    std::vector<Hyperformula> kids;
    UnitRef origin;
    FKind origin_kind;
  };
  explicit Hyperformula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node* node() const;
  std::shared_ptr<const Node> node_;
};

struct Hypermodel {
  std::vector<std::pair<Hyperatom, bool>> assignment;
  bool default_value = false;

  bool value(const Hyperatom& a) const;
};

// The hyperliteral of a politeral unit: (P, A, B) for a positive origin,
// ~(P, B, A) for a negated one, with A/B read off the projection of the run.
Hyperformula hyperliteral_of(const Formula& f, const UnitRef& politeral_unit, const Run& run);

// Shape-isomorphic image of the tree: &- and !-units become conjunctions,
// |- and ?-units disjunctions, politeral units their hyperliterals.
Hyperformula build_hyperformula(const TruncUnitTree& tree, const Run& run);

// Every hyperatom has at most one positive and at most one negative
// occurrence.
bool is_binary(const Hyperformula& hf);

std::vector<Hyperatom> distinct_hyperatoms(const Hyperformula& hf);

bool evaluate(const Hyperformula& hf, const Hypermodel& model);

enum class EvalMode { Serial, Parallel, Auto };

// Brute force over all assignments of the distinct hyperatoms; throws
// BudgetError above atom_cap.  The parallel path splits the assignment space
// across OpenMP threads and must agree with the serial path exactly.
bool is_tautology(const Hyperformula& hf, int atom_cap = 20, EvalMode mode = EvalMode::Auto);

// The finite analogue of restricting disjunction width: keeps the input's
// shape and origins, optionally greedily dropping disjuncts of ?-origin
// nodes while the formula stays tautological.  Disjunction nodes always keep
// at least one disjunct, and nodes originating from |-units keep both.
// Throws std::invalid_argument when the input is not tautological.
Hyperformula finitize(const Hyperformula& hf, bool minimize = false, int atom_cap = 20);

// Winner of the run under the hypermodel: Top wins iff the hyperformula of
// the untrimmed height-`height` truncation evaluates to true.
Player verdict(const Formula& f, const Run& run, const Hypermodel& model, int height,
               std::size_t node_budget = 100000);

}  // namespace ccw
