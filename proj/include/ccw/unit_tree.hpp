#pragma once

// Height-h truncations of the unit tree: every modal coordinate is a
// length-h bitstring standing for the cylinder of its infinite extensions.
// A resolution picks one child per resolved !-unit; building a tree under a
// resolution trims away every other child of that unit.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccw/formula.hpp"
#include "ccw/game.hpp"

namespace ccw {

struct UnitRef {
  Position pos;
  std::vector<std::string> branches;  // one length-h bitstring per modal ancestor

  auto operator<=>(const UnitRef&) const = default;

  // `<path>@<b,b,...>` with `e` for the empty bitstring; the root is `@`.
  std::string str() const;
  static UnitRef parse(const std::string& text);
};

// True iff a is a subunit of b (a at or below b).
bool is_subunit_ref(const UnitRef& a, const UnitRef& b);

// Resolved !-units only; a unit absent from the map is unresolved.
using Resolution = std::map<UnitRef, std::string>;

// True iff r2 extends r1: same resolvents on all of r1's keys.
bool resolution_extends(const Resolution& r2, const Resolution& r1);

class TruncUnitTree {
 public:
  static TruncUnitTree build(const Formula& f, int height, const Resolution& r,
                             std::size_t node_budget = 100000);

  const Formula& formula() const { return formula_; }
  int height() const { return height_; }
  const Resolution& resolution() const { return resolution_; }

  std::size_t size() const { return units_.size(); }
  const UnitRef& unit(std::size_t idx) const { return units_[idx]; }
  int index_of(const UnitRef& u) const;  // -1 when absent
  bool contains(const UnitRef& u) const { return index_of(u) >= 0; }

  FKind kind_of(std::size_t idx) const { return kinds_[idx]; }
  Formula origin(std::size_t idx) const;  // the unit's F0-origin subformula
  int parent(std::size_t idx) const { return parents_[idx]; }
  const std::vector<int>& children(std::size_t idx) const { return children_[idx]; }

  const std::vector<int>& politeral_units() const { return politerals_; }
  const std::vector<int>& rec_units() const { return rec_units_; }

  bool is_subunit(int a, int b) const;  // a at or below b
  int scs(int a, int b) const;          // smallest common superunit

  // Index of the resolvent child of a resolved !-unit, -1 when unresolved.
  int resolvent(int rec_idx) const;

  // A resolution is total on this tree when every !-unit present is resolved.
  bool resolution_total() const;

 private:
  Formula formula_;
  int height_ = 0;
  Resolution resolution_;
  std::vector<UnitRef> units_;
  std::vector<FKind> kinds_;
  std::vector<int> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<int> politerals_;
  std::vector<int> rec_units_;
  std::map<UnitRef, int> index_;
};

// Regular funital restriction of a unit at the active height of the run
// prefix up to cycle m; a depth-0 unit restricts to itself.
Funit restrict_at(const Formula& f, const UnitRef& unit, const Run& run, uint64_t m_bound);

// Neither a subunit nor a superunit.
bool incomparable(const UnitRef& a, const UnitRef& b);

// Addresses of the m-restrictions are prefix-incomparable.
bool dm_incomparable(const Formula& f, const UnitRef& a, const UnitRef& b, const Run& run,
                     uint64_t m_bound);

}  // namespace ccw
