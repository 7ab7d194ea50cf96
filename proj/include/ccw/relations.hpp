#pragma once

// Structural relations on truncated unit trees: driving, strict driving,
// opposition computed from a run, visibility, domination with witness
// chains, the audit of a total resolution, and the finite search replacing
// the transfinite construction of a total resolution.

#include <array>
#include <optional>

#include "ccw/hyper.hpp"
#include "ccw/unit_tree.hpp"

namespace ccw {

struct OppositionPairing {
  std::vector<std::pair<UnitRef, UnitRef>> pairs;
  bool computed_from_run = false;

  std::optional<UnitRef> mate(const UnitRef& u) const;
  OppositionPairing restricted_to(const TruncUnitTree& t) const;
};

// Shape validation for supplied pairings: politeral units, negated origins,
// involutive and at most single-valued.
void validate_pairing(const Formula& f, const OppositionPairing& p);

// The H through which e drives g, when it does.
std::optional<UnitRef> drives(const TruncUnitTree& t, const UnitRef& e, const UnitRef& g);

bool strictly_drives(const TruncUnitTree& t, const Resolution& r, const UnitRef& e,
                     const UnitRef& g);

// All pairs of politeral units satisfying the opposition definition over the
// run's content, requiring at least one Bot numeral on each side.
std::vector<std::pair<UnitRef, UnitRef>> opposite_candidates(const TruncUnitTree& t,
                                                             const Run& run);

// Greedy matching over the candidates (the candidates already form a
// matching for runs that separate funit heights).
OppositionPairing opposite_pairs(const TruncUnitTree& t, const Run& run);

bool visible(const TruncUnitTree& t, const Resolution& r, const OppositionPairing& pairing,
             const UnitRef& e, const UnitRef& g);

struct DominationWitness {
  bool proper_subunit = false;
  std::vector<std::array<UnitRef, 3>> chain;  // (L_i, M_i, X_i) triples
};

// Witness that the !-unit dominates g in t, or nullopt.
std::optional<DominationWitness> dominates(const TruncUnitTree& t,
                                           const OppositionPairing& pairing,
                                           const UnitRef& rec_unit, const UnitRef& g,
                                           std::size_t search_budget = 1000000);

// Full relation over (!-unit, unit) pairs; rows may be computed in parallel.
std::vector<std::vector<char>> domination_matrix(const TruncUnitTree& t,
                                                 const OppositionPairing& pairing,
                                                 bool parallel = true,
                                                 std::size_t search_budget = 1000000);

struct AuditReport {
  bool root_undominated = false;
  bool asymmetric = false;
  bool transitive = false;
  std::string detail;

  bool all() const { return root_undominated && asymmetric && transitive; }
};

AuditReport audit_resolution(const TruncUnitTree& t, const OppositionPairing& pairing,
                             bool parallel = true, std::size_t search_budget = 1000000);

struct FindResult {
  enum class Status { Found, NoneTautological, AuditFailed };
  Status status = Status::NoneTautological;
  Resolution resolution;
  OppositionPairing pairing;
  Hyperformula hyperformula;  // trimmed, tautological; valid only when Found
};

// Exhaustive search over total resolutions in lexicographic order of
// (unit address, bitstring); a candidate passes when the trimmed
// hyperformula is tautological and the domination audit holds.  With no
// !-units the trivial resolution is returned regardless of tautologicity.
FindResult find_total_resolution(const Formula& f, int height, const Run& run,
                                 std::size_t node_budget = 100000, int atom_cap = 20,
                                 std::size_t search_budget = 1000000);

// Maturity of a domination chain at cycle bound m.
bool mature(const Formula& f, const std::vector<std::array<UnitRef, 3>>& chain, const Run& run,
            uint64_t m_bound);

// `RESOLVE <unit> <bits>` and `PAIR <unitL> <unitM>` lines.
std::string resolution_to_text(const Resolution& r);
std::string pairing_to_text(const OppositionPairing& p);
void analysis_from_text(const std::string& text, Resolution& r, OppositionPairing& p);

}  // namespace ccw
