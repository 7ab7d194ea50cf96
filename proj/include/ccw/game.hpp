#pragma once

// Addressed moves, runs and the environment counterstrategy over enumeration
// games.  A move is a funit address (bitstring blocks, each terminated by a
// period) followed by a decimal numeral; the counterstrategy plays fresh
// numerals into the prompt funits of the current position and grants the
// adversary permission once per pass.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ccw/formula.hpp"

namespace ccw {

enum class Player : uint8_t { Top, Bot };  // Top: adversary of E; Bot: E itself

inline Player opponent(Player p) { return p == Player::Top ? Player::Bot : Player::Top; }

struct Move {
  std::vector<std::string> blocks;  // funit address, one block per tree step
  uint64_t numeral = 0;

  std::string str() const;
  static Move parse(const std::string& text);
  bool operator==(const Move&) const = default;
};

struct Labmove {
  Player player;
  Move move;
  uint64_t cycle = 0;  // strictly increasing along a run

  bool operator==(const Labmove&) const = default;
};

using Run = std::vector<Labmove>;

// A funit: an osubformula position plus one finite bitstring per modal
// ancestor.  Height is the longest bitstring; regular means equal lengths.
struct Funit {
  Position pos;
  std::vector<std::string> bits;

  auto operator<=>(const Funit&) const = default;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr uint64_t kNoCycleBound = std::numeric_limits<uint64_t>::max();

// Address blocks of u within f; a &/| step contributes "0"/"1", a !/? step
// contributes the funit's bitstring for that ancestor.
std::vector<std::string> funit_address(const Formula& f, const Funit& u);

std::string address_str(const std::vector<std::string>& blocks);

int funit_height(const Funit& u);
bool funit_regular(const Funit& u);

// The politeral funit a legal move lands in, or nullopt if the blocks do not
// resolve to a politeral of f.
std::optional<Funit> decompose_move(const Formula& f, const Move& m);

bool legal_move(const Formula& f, const Move& m);

// All funits whose address is a blockwise prefix of some move of the run.
std::vector<Funit> active_funits(const Formula& f, const Run& run);

// Prompt list for the current position, lexicographic by serialized address
// (byte order '.' < '0' < '1').
std::vector<Funit> prompts(const Formula& f, const Run& run, std::size_t funit_budget = 100000);

// Projection of a run on a unit given by a position plus one branch bitstring
// per modal ancestor: binary steps keep the matching bit block, modal steps
// keep blocks that are prefixes of the branch string.  Labels and cycle tags
// are preserved; consumed blocks are stripped.
Run project(const Run& run, const Formula& f, const Position& pos,
            const std::vector<std::string>& branches);

inline Run project(const Run& run, const Formula& f, const Funit& u) {
  return project(run, f, u.pos, u.bits);
}

// True iff some labmove of the run with cycle <= m_bound and the given label
// numerically makes `numeral` inside u.
bool made_in(const Run& run, const Formula& f, Player player, uint64_t numeral, const Funit& u,
             uint64_t m_bound = kNoCycleBound);

// Adversary callback model: stepped once per permission grant, may answer
// with any finite number of legal moves.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::vector<Move> on_permission(const Run& run_so_far) = 0;
};

class SilentAdversary : public Adversary {
 public:
  std::vector<Move> on_permission(const Run&) override { return {}; }
};

// Replays stored move batches, one batch per grant.
class ScriptedAdversary : public Adversary {
 public:
  explicit ScriptedAdversary(std::vector<std::vector<Move>> batches)
      : batches_(std::move(batches)) {}

  // Batches recovered from a stored run: maximal blocks of consecutive
  // Top-labeled moves, in order.
  static ScriptedAdversary from_run(const Run& run);

  std::vector<Move> on_permission(const Run&) override;

 private:
  std::vector<std::vector<Move>> batches_;
  std::size_t next_ = 0;
};

// Mirrors every E move across an involutive pairing of politeral positions,
// keeping branch bitstrings and numerals.  The default pairing matches each
// politeral with the next unpaired politeral of equal modal depth whose
// origin is its negation; moves in unpaired politerals are not echoed.
class CopycatAdversary : public Adversary {
 public:
  explicit CopycatAdversary(Formula f);
  CopycatAdversary(Formula f, std::vector<std::pair<Position, Position>> pairing);

  std::vector<Move> on_permission(const Run& run_so_far) override;

  const std::vector<std::pair<Position, Position>>& pairing() const { return pairing_; }

  static std::vector<std::pair<Position, Position>> default_pairing(const Formula& f);

 private:
  std::optional<Position> mate(const Position& p) const;

  Formula formula_;
  std::vector<std::pair<Position, Position>> pairing_;
  std::size_t seen_ = 0;  // run prefix already mirrored
};

// Wraps a plain function; used by the CLI REPL.
class FunctionAdversary : public Adversary {
 public:
  using Fn = std::function<std::vector<Move>(const Run&)>;
  explicit FunctionAdversary(Fn fn) : fn_(std::move(fn)) {}
  std::vector<Move> on_permission(const Run& run) override { return fn_(run); }

 private:
  Fn fn_;
};

struct PlayResult {
  Run run;                  // E's view: E is Bot, the adversary Top
  std::size_t grants = 0;   // permission grants issued
  bool halted = false;      // adversary produced an illegal move
  std::string halt_reason;
};

// Runs `iterations` full ROUTINE passes of the counterstrategy against the
// adversary.  Per pass: list the prompts of the then-current position once,
// play the smallest never-used numeral into each in lexicographic address
// order, then grant permission.  Play halts early on an illegal adversary
// move, with the offending move reported.
PlayResult run_counterstrategy(const Formula& f, Adversary& adversary, std::size_t iterations,
                               std::size_t move_budget = 100000);

struct MatchResult {
  Run env_view;  // as seen by the counterstrategy (its moves labeled Bot)
  Run adv_view;  // label inverse of env_view
  std::size_t grants = 0;
  bool halted = false;
  std::string halt_reason;
};

MatchResult play_match(const Formula& f, Adversary& adversary, std::size_t iterations,
                       std::size_t move_budget = 100000);

Run flip_labels(const Run& run);

// Transcript file format: one labmove per line, `T <move>` or `B <move>`,
// optionally followed by ` @<cycle>`.
std::string transcript_to_text(const Run& run, bool with_cycles = true);
Run transcript_from_text(const std::string& text);

}  // namespace ccw
