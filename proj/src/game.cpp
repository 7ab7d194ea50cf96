#include "ccw/game.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace ccw {

namespace {

bool is_bitstring(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

bool bit_prefix(const std::string& w, const std::string& y) {
  return w.size() <= y.size() && y.compare(0, w.size(), w) == 0;
}

}  // namespace

std::string Move::str() const {
  std::string out = address_str(blocks);
  out += std::to_string(numeral);
  return out;
}

Move Move::parse(const std::string& text) {
  Move m;
  std::size_t last_dot = text.rfind('.');
  std::string numeral_part;
  if (last_dot == std::string::npos) {
    numeral_part = text;
  } else {
    numeral_part = text.substr(last_dot + 1);
    std::string cur;
    for (std::size_t i = 0; i <= last_dot; ++i) {
      char c = text[i];
      if (c == '.') {
        if (!is_bitstring(cur)) throw std::invalid_argument("bad move block: " + text);
        m.blocks.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
  }
  if (numeral_part.empty() ||
      !std::all_of(numeral_part.begin(), numeral_part.end(),
                   [](char c) { return c >= '0' && c <= '9'; }) ||
      (numeral_part.size() > 1 && numeral_part[0] == '0'))
    throw std::invalid_argument("bad move numeral: " + text);
  m.numeral = std::stoull(numeral_part);
  return m;
}

std::string address_str(const std::vector<std::string>& blocks) {
  std::string out;
  for (const auto& b : blocks) {
    out += b;
    out += '.';
  }
  return out;
}

std::vector<std::string> funit_address(const Formula& f, const Funit& u) {
  std::vector<std::string> blocks;
  Formula cur = f;
  std::size_t bit_index = 0;
  for (int step : u.pos.path) {
    if (is_binary(cur.kind())) {
      blocks.push_back(step ? "1" : "0");
    } else if (is_modal(cur.kind())) {
      if (bit_index >= u.bits.size())
        throw std::invalid_argument("funit bitstring count below modal depth");
      blocks.push_back(u.bits[bit_index++]);
    } else {
      throw std::invalid_argument("funit path falls off the formula");
    }
    cur = cur.child(static_cast<std::size_t>(step));
  }
  if (bit_index != u.bits.size())
    throw std::invalid_argument("funit bitstring count exceeds modal depth");
  return blocks;
}

int funit_height(const Funit& u) {
  std::size_t h = 0;
  for (const auto& b : u.bits) h = std::max(h, b.size());
  return static_cast<int>(h);
}

bool funit_regular(const Funit& u) {
  for (const auto& b : u.bits)
    if (b.size() != u.bits.front().size()) return false;
  return true;
}

std::optional<Funit> decompose_move(const Formula& f, const Move& m) {
  Funit u;
  Formula cur = f;
  for (const auto& block : m.blocks) {
    if (is_binary(cur.kind())) {
      if (block != "0" && block != "1") return std::nullopt;
      int i = block == "1" ? 1 : 0;
      u.pos.path.push_back(i);
      cur = cur.child(static_cast<std::size_t>(i));
    } else if (is_modal(cur.kind())) {
      if (!is_bitstring(block)) return std::nullopt;
      u.bits.push_back(block);
      u.pos.path.push_back(0);
      cur = cur.child(0);
    } else {
      return std::nullopt;  // walked past a literal
    }
  }
  if (!is_literal(cur.kind())) return std::nullopt;
  return u;
}

bool legal_move(const Formula& f, const Move& m) { return decompose_move(f, m).has_value(); }

namespace {

// Funits along the walk of one move: every blockwise prefix names an
// ancestor funit.
void collect_prefix_funits(const Formula& f, const Move& m, std::set<Funit>& out) {
  Funit u;
  Formula cur = f;
  out.insert(u);
  for (const auto& block : m.blocks) {
    if (is_binary(cur.kind())) {
      int i = block == "1" ? 1 : 0;
      u.pos.path.push_back(i);
      cur = cur.child(static_cast<std::size_t>(i));
    } else {
      u.bits.push_back(block);
      u.pos.path.push_back(0);
      cur = cur.child(0);
    }
    out.insert(u);
  }
}

}  // namespace

std::vector<Funit> active_funits(const Formula& f, const Run& run) {
  std::set<Funit> acc;
  for (const Labmove& lm : run) {
    if (!legal_move(f, lm.move))
      throw std::invalid_argument("illegal move in run: " + lm.move.str());
    collect_prefix_funits(f, lm.move, acc);
  }
  return {acc.begin(), acc.end()};
}

namespace {

void enumerate_tuples(int depth, int h, std::vector<std::string>& cur,
                      const std::function<void(const std::vector<std::string>&)>& emit) {
  if (depth == 0) {
    emit(cur);
    return;
  }
  // All length-h bitstrings in lexicographic order.
  std::string s(static_cast<std::size_t>(h), '0');
  while (true) {
    cur.push_back(s);
    enumerate_tuples(depth - 1, h, cur, emit);
    cur.pop_back();
    int i = static_cast<int>(s.size()) - 1;
    while (i >= 0 && s[static_cast<std::size_t>(i)] == '1') {
      s[static_cast<std::size_t>(i)] = '0';
      --i;
    }
    if (i < 0) break;
    s[static_cast<std::size_t>(i)] = '1';
  }
}

}  // namespace

std::vector<Funit> prompts(const Formula& f, const Run& run, std::size_t funit_budget) {
  int h = 0;
  for (const Funit& u : active_funits(f, run)) h = std::max(h, funit_height(u) + 1);

  std::vector<std::pair<std::string, Funit>> keyed;
  for (const Position& p : politerals(f)) {
    int d = modal_depth(f, p);
    if (d == 0) {
      Funit u{p, {}};
      keyed.emplace_back(address_str(funit_address(f, u)), u);
      continue;
    }
    if (h == 0) {
      Funit u{p, std::vector<std::string>(static_cast<std::size_t>(d), "")};
      keyed.emplace_back(address_str(funit_address(f, u)), u);
      continue;
    }
    std::vector<std::string> tuple;
    enumerate_tuples(d, h, tuple, [&](const std::vector<std::string>& bits) {
      if (keyed.size() >= funit_budget) throw BudgetError("prompt budget exceeded");
      Funit u{p, bits};
      keyed.emplace_back(address_str(funit_address(f, u)), u);
    });
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<Funit> out;
  out.reserve(keyed.size());
  for (auto& [addr, u] : keyed) out.push_back(std::move(u));
  return out;
}

Run project(const Run& run, const Formula& f, const Position& pos,
            const std::vector<std::string>& branches) {
  // Validate the target against the formula.
  if (static_cast<std::size_t>(modal_depth(f, pos)) != branches.size())
    throw std::invalid_argument("branch count does not match modal depth");
  subformula_at(f, pos);

  Run out;
  for (const Labmove& lm : run) {
    Formula cur = f;
    std::size_t idx = 0;   // index into the move's blocks
    std::size_t bidx = 0;  // index into branches
    bool keep = true;
    for (int step : pos.path) {
      if (idx >= lm.move.blocks.size()) {
        keep = false;
        break;
      }
      const std::string& block = lm.move.blocks[idx];
      if (is_binary(cur.kind())) {
        if (block != (step ? "1" : "0")) {
          keep = false;
          break;
        }
      } else {
        if (!bit_prefix(block, branches[bidx])) {
          keep = false;
          break;
        }
        ++bidx;
      }
      ++idx;
      cur = cur.child(static_cast<std::size_t>(step));
    }
    if (!keep) continue;
    Labmove kept = lm;
    kept.move.blocks.assign(lm.move.blocks.begin() + static_cast<std::ptrdiff_t>(idx),
                            lm.move.blocks.end());
    out.push_back(std::move(kept));
  }
  return out;
}

bool made_in(const Run& run, const Formula& f, Player player, uint64_t numeral, const Funit& u,
             uint64_t m_bound) {
  std::vector<std::string> addr = funit_address(f, u);
  for (const Labmove& lm : run) {
    if (lm.cycle > m_bound || lm.player != player || lm.move.numeral != numeral) continue;
    if (lm.move.blocks.size() < addr.size()) continue;
    bool prefix = std::equal(addr.begin(), addr.end(), lm.move.blocks.begin());
    if (prefix && legal_move(f, lm.move)) return true;
  }
  return false;
}

ScriptedAdversary ScriptedAdversary::from_run(const Run& run) {
  std::vector<std::vector<Move>> batches;
  std::vector<Move> cur;
  bool in_top = false;
  for (const Labmove& lm : run) {
    if (lm.player == Player::Top) {
      cur.push_back(lm.move);
      in_top = true;
    } else if (in_top) {
      batches.push_back(std::move(cur));
      cur.clear();
      in_top = false;
    }
  }
  if (in_top) batches.push_back(std::move(cur));
  return ScriptedAdversary(std::move(batches));
}

std::vector<Move> ScriptedAdversary::on_permission(const Run&) {
  if (next_ >= batches_.size()) return {};
  return batches_[next_++];
}

std::vector<std::pair<Position, Position>> CopycatAdversary::default_pairing(const Formula& f) {
  std::vector<Position> lits = politerals(f);
  std::vector<bool> taken(lits.size(), false);
  std::vector<std::pair<Position, Position>> pairing;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (taken[i]) continue;
    Formula li = subformula_at(f, lits[i]);
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      if (taken[j]) continue;
      if (modal_depth(f, lits[i]) != modal_depth(f, lits[j])) continue;
      if (subformula_at(f, lits[j]) == negate(li)) {
        pairing.emplace_back(lits[i], lits[j]);
        taken[i] = taken[j] = true;
        break;
      }
    }
  }
  return pairing;
}

CopycatAdversary::CopycatAdversary(Formula f)
    : formula_(f), pairing_(default_pairing(f)) {}

CopycatAdversary::CopycatAdversary(Formula f, std::vector<std::pair<Position, Position>> pairing)
    : formula_(std::move(f)), pairing_(std::move(pairing)) {}

std::optional<Position> CopycatAdversary::mate(const Position& p) const {
  for (const auto& [a, b] : pairing_) {
    if (a == p) return b;
    if (b == p) return a;
  }
  return std::nullopt;
}

std::vector<Move> CopycatAdversary::on_permission(const Run& run_so_far) {
  std::vector<Move> out;
  for (; seen_ < run_so_far.size(); ++seen_) {
    const Labmove& lm = run_so_far[seen_];
    if (lm.player != Player::Bot) continue;
    std::optional<Funit> u = decompose_move(formula_, lm.move);
    if (!u) continue;
    std::optional<Position> q = mate(u->pos);
    if (!q) continue;
    Funit mirrored{*q, u->bits};
    out.push_back(Move{funit_address(formula_, mirrored), lm.move.numeral});
  }
  return out;
}

PlayResult run_counterstrategy(const Formula& f, Adversary& adversary, std::size_t iterations,
                               std::size_t move_budget) {
  PlayResult res;
  std::set<uint64_t> used;
  uint64_t next_cycle = 1;

  auto mex = [&used]() {
    uint64_t a = 0;
    for (uint64_t v : used) {
      if (v == a)
        ++a;
      else if (v > a)
        break;
    }
    return a;
  };

  for (std::size_t pass = 0; pass < iterations; ++pass) {
    std::vector<Funit> list = prompts(f, res.run, move_budget);
    for (const Funit& u : list) {
      if (res.run.size() >= move_budget) throw BudgetError("move budget exceeded");
      uint64_t a = mex();
      res.run.push_back(Labmove{Player::Bot, Move{funit_address(f, u), a}, next_cycle++});
      used.insert(a);
    }
    ++res.grants;
    std::vector<Move> replies = adversary.on_permission(res.run);
    for (const Move& m : replies) {
      if (!legal_move(f, m)) {
        res.halted = true;
        res.halt_reason = "illegal adversary move: " + m.str();
        return res;
      }
      if (res.run.size() >= move_budget) throw BudgetError("move budget exceeded");
      res.run.push_back(Labmove{Player::Top, m, next_cycle++});
      used.insert(m.numeral);
    }
  }
  return res;
}

Run flip_labels(const Run& run) {
  Run out = run;
  for (Labmove& lm : out) lm.player = opponent(lm.player);
  return out;
}

MatchResult play_match(const Formula& f, Adversary& adversary, std::size_t iterations,
                       std::size_t move_budget) {
  PlayResult play = run_counterstrategy(f, adversary, iterations, move_budget);
  MatchResult res;
  res.env_view = play.run;
  res.adv_view = flip_labels(play.run);
  res.grants = play.grants;
  res.halted = play.halted;
  res.halt_reason = play.halt_reason;
  return res;
}

std::string transcript_to_text(const Run& run, bool with_cycles) {
  std::string out;
  for (const Labmove& lm : run) {
    out += lm.player == Player::Top ? 'T' : 'B';
    out += ' ';
    out += lm.move.str();
    if (with_cycles) {
      out += " @";
      out += std::to_string(lm.cycle);
    }
    out += '\n';
  }
  return out;
}

Run transcript_from_text(const std::string& text) {
  Run run;
  std::istringstream in(text);
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string label, move_text, cycle_text;
    ls >> label >> move_text;
    if (label != "T" && label != "B")
      throw std::invalid_argument("bad transcript label on line " + std::to_string(line_no));
    Labmove lm;
    lm.player = label == "T" ? Player::Top : Player::Bot;
    lm.move = Move::parse(move_text);
    if (ls >> cycle_text) {
      if (cycle_text.size() < 2 || cycle_text[0] != '@')
        throw std::invalid_argument("bad cycle tag on line " + std::to_string(line_no));
      lm.cycle = std::stoull(cycle_text.substr(1));
    } else {
      lm.cycle = line_no;
    }
    run.push_back(std::move(lm));
  }
  return run;
}

}  // namespace ccw
