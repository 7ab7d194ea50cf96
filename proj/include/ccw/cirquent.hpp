#pragma once

// The CL15 cirquent data model, the ten rules as checked transformations
// applied bottom-up (conclusion to premise), and a derivation/proof checker.
//
// A cirquent is a sequence of oformula slots (possibly check-marked), a
// sequence of undergroups and a sequence of overgroups; groups are nonempty
// sets of slot indices and every slot belongs to at least one group on each
// side.  Check marks and overgroup annotations are procedure metadata: rule
// applicability treats a checked ?-oformula as plain, and the checker
// compares cirquents up to marks, annotations and group order.

#include <optional>
#include <string>
#include <vector>

#include "ccw/formula.hpp"
#include "ccw/unit_tree.hpp"

namespace ccw {

struct Annotation {
  enum class Kind { None, Master, Label };
  Kind kind = Kind::None;
  UnitRef label;

  static Annotation none() { return {}; }
  static Annotation master() { return {Kind::Master, {}}; }
  static Annotation labeled(UnitRef u) { return {Kind::Label, std::move(u)}; }

  bool operator==(const Annotation&) const = default;
  std::string str() const;
};

struct Slot {
  Formula formula;
  bool checked = false;

  bool operator==(const Slot&) const = default;
};

struct Overgroup {
  std::vector<int> members;  // sorted slot indices
  Annotation ann;

  bool operator==(const Overgroup&) const = default;
};

struct Cirquent {
  std::vector<Slot> slots;
  std::vector<std::vector<int>> undergroups;  // sorted slot indices
  std::vector<Overgroup> overgroups;

  bool operator==(const Cirquent&) const = default;
};

// Structural invariants; nullopt when satisfied, else a description.
std::optional<std::string> validate(const Cirquent& c);

// Single unchecked slot, one undergroup, the master overgroup.
Cirquent initial_cirquent(const Formula& f);

// Terminal shape of the endgame: every group is a two-member (F, ~F) pair,
// no sharing between groups on either side, and each slot's undergroup
// equals its overgroup.
bool is_axiom(const Cirquent& c);

// Slot order is strict; group order, check marks and annotations are not.
bool equivalent(const Cirquent& a, const Cirquent& b);

enum class RuleName {
  Exchange,
  Weakening,
  Contraction,
  UndergroupDuplication,
  OvergroupDuplication,
  Merging,
  ConjunctionIntroduction,
  DisjunctionIntroduction,
  RecurrenceIntroduction,
  CorecurrenceIntroduction,
};

enum class ExchangeKind { Slots, Undergroups, Overgroups };

struct RuleInstance {
  RuleName name;
  ExchangeKind exchange_kind = ExchangeKind::Slots;  // Exchange
  int index = 0;       // slot or group index in the conclusion
  int undergroup = 0;  // Weakening
  std::vector<int> subset;  // Merging: first part; CorecurrenceIntroduction: extra overgroups
  Annotation label;    // RecurrenceIntroduction

  std::string str() const;
  static RuleInstance parse(const std::string& text);
};

struct RuleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The premise obtained by applying the rule bottom-up to the conclusion.
// Throws RuleError when the instance is inapplicable.
Cirquent apply_rule(const Cirquent& conclusion, const RuleInstance& r);

struct CheckResult {
  bool ok = true;
  std::string message;
};

CheckResult check_step(const Cirquent& premise, const Cirquent& conclusion,
                       const RuleInstance& r);

// Premise end first: apply_rule(cirquents[i+1], rules[i]) ~ cirquents[i].
struct Derivation {
  std::vector<Cirquent> cirquents;
  std::vector<RuleInstance> rules;
};

CheckResult check_derivation(const Derivation& d, const Cirquent& from, const Cirquent& to);

// A proof of f: a derivation of initial_cirquent(f) from an axiom.
CheckResult check_proof(const Derivation& d, const Formula& f);

// Line-oriented derivation file: one cirquent per line in the form
// `slots ; undergroups ; overgroups`, rule lines `RULE <name> <params>`.
std::string cirquent_to_line(const Cirquent& c);
Cirquent cirquent_from_line(const std::string& line);
std::string derivation_to_text(const Derivation& d);
Derivation derivation_from_text(const std::string& text);

}  // namespace ccw
