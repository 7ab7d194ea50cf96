#include "ccw/relations.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ccw {

std::optional<UnitRef> OppositionPairing::mate(const UnitRef& u) const {
  for (const auto& [a, b] : pairs) {
    if (a == u) return b;
    if (b == u) return a;
  }
  return std::nullopt;
}

OppositionPairing OppositionPairing::restricted_to(const TruncUnitTree& t) const {
  OppositionPairing out;
  out.computed_from_run = computed_from_run;
  for (const auto& [a, b] : pairs)
    if (t.contains(a) && t.contains(b)) out.pairs.emplace_back(a, b);
  return out;
}

void validate_pairing(const Formula& f, const OppositionPairing& p) {
  std::set<UnitRef> seen;
  for (const auto& [a, b] : p.pairs) {
    Formula fa = subformula_at(f, a.pos);
    Formula fb = subformula_at(f, b.pos);
    if (!is_literal(fa.kind()) || !is_literal(fb.kind()))
      throw std::invalid_argument("pairing endpoint is not a politeral unit");
    if (fa != negate(fb)) throw std::invalid_argument("paired units do not have negated origins");
    if (!seen.insert(a).second || !seen.insert(b).second)
      throw std::invalid_argument("unit appears in two pairs");
  }
}

namespace {

int require_index(const TruncUnitTree& t, const UnitRef& u, const char* what) {
  int idx = t.index_of(u);
  if (idx < 0) throw std::invalid_argument(std::string(what) + " not in tree: " + u.str());
  return idx;
}

std::optional<int> drives_idx(const TruncUnitTree& t, int e, int g) {
  // The walk covers exactly the proper superunits of e that are subunits of
  // h; when h == e there are none.
  int h = t.scs(e, g);
  if (h != e) {
    for (int x = t.parent(static_cast<std::size_t>(e));;
         x = t.parent(static_cast<std::size_t>(x))) {
      if (t.kind_of(static_cast<std::size_t>(x)) == FKind::CoRec) return std::nullopt;
      if (x == h) break;
    }
  }
  return h;
}

bool strictly_drives_idx(const TruncUnitTree& t, const Resolution& r, int e, int g) {
  std::optional<int> h = drives_idx(t, e, g);
  if (!h) return false;
  if (*h == e) return true;
  int prev = e;
  for (int x = t.parent(static_cast<std::size_t>(e));;
       x = t.parent(static_cast<std::size_t>(x))) {
    if (t.kind_of(static_cast<std::size_t>(x)) == FKind::Rec) {
      const UnitRef& rec = t.unit(static_cast<std::size_t>(x));
      auto it = r.find(rec);
      if (it == r.end()) return false;
      const UnitRef& child = t.unit(static_cast<std::size_t>(prev));
      if (child.branches[rec.branches.size()] != it->second) return false;
    }
    if (x == *h) break;
    prev = x;
  }
  return true;
}

std::string unit_address_key(const TruncUnitTree& t, int idx) {
  const UnitRef& u = t.unit(static_cast<std::size_t>(idx));
  Funit fu{u.pos, u.branches};
  return address_str(funit_address(t.formula(), fu));
}

}  // namespace

std::optional<UnitRef> drives(const TruncUnitTree& t, const UnitRef& e, const UnitRef& g) {
  int ei = require_index(t, e, "unit");
  int gi = require_index(t, g, "unit");
  std::optional<int> h = drives_idx(t, ei, gi);
  if (!h) return std::nullopt;
  return t.unit(static_cast<std::size_t>(*h));
}

bool strictly_drives(const TruncUnitTree& t, const Resolution& r, const UnitRef& e,
                     const UnitRef& g) {
  int ei = require_index(t, e, "unit");
  int gi = require_index(t, g, "unit");
  return strictly_drives_idx(t, r, ei, gi);
}

std::vector<std::pair<UnitRef, UnitRef>> opposite_candidates(const TruncUnitTree& t,
                                                             const Run& run) {
  const Formula& f = t.formula();
  const std::vector<int>& lits = t.politeral_units();
  std::vector<std::set<uint64_t>> top_set(lits.size()), bot_set(lits.size());
  std::vector<Formula> origin(lits.size());
  for (std::size_t i = 0; i < lits.size(); ++i) {
    const UnitRef& u = t.unit(static_cast<std::size_t>(lits[i]));
    origin[i] = subformula_at(f, u.pos);
    for (const Labmove& lm : project(run, f, u.pos, u.branches))
      (lm.player == Player::Top ? top_set[i] : bot_set[i]).insert(lm.move.numeral);
  }
  std::vector<std::pair<UnitRef, UnitRef>> out;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      if (origin[i] != negate(origin[j])) continue;
      if (bot_set[i].empty() || bot_set[j].empty()) continue;
      if (top_set[i] == bot_set[j] && bot_set[i] == top_set[j])
        out.emplace_back(t.unit(static_cast<std::size_t>(lits[i])),
                         t.unit(static_cast<std::size_t>(lits[j])));
    }
  }
  return out;
}

OppositionPairing opposite_pairs(const TruncUnitTree& t, const Run& run) {
  OppositionPairing p;
  p.computed_from_run = true;
  std::set<UnitRef> used;
  for (const auto& [a, b] : opposite_candidates(t, run)) {
    if (used.count(a) || used.count(b)) continue;
    used.insert(a);
    used.insert(b);
    p.pairs.emplace_back(a, b);
  }
  return p;
}

bool visible(const TruncUnitTree& t, const Resolution& r, const OppositionPairing& pairing,
             const UnitRef& e, const UnitRef& g) {
  int ei = require_index(t, e, "unit");
  int gi = require_index(t, g, "unit");

  std::vector<char> reach(t.size(), 0);
  std::vector<int> frontier;  // strict-drive sources still to expand
  frontier.push_back(ei);
  std::vector<char> expanded(t.size(), 0);

  while (!frontier.empty()) {
    int src = frontier.back();
    frontier.pop_back();
    if (expanded[static_cast<std::size_t>(src)]) continue;
    expanded[static_cast<std::size_t>(src)] = 1;
    for (std::size_t u = 0; u < t.size(); ++u) {
      if (reach[u]) continue;
      if (strictly_drives_idx(t, r, src, static_cast<int>(u))) {
        reach[u] = 1;
        // A newly reached politeral with a mate extends the chain.
        if (is_literal(t.kind_of(u))) {
          std::optional<UnitRef> m = pairing.mate(t.unit(u));
          if (m) {
            int mi = t.index_of(*m);
            if (mi >= 0 && !expanded[static_cast<std::size_t>(mi)]) frontier.push_back(mi);
          }
        }
      }
    }
  }
  return reach[static_cast<std::size_t>(gi)] != 0;
}

namespace {

struct ChainSearch {
  const TruncUnitTree& t;
  const OppositionPairing& pairing;
  int rec_idx;
  std::size_t budget;
  std::vector<std::pair<int, int>> matched;  // (L index, M index) both directions

  // targets holds [L_{i+1}, ..., L_{n+1}]; segments collects (L_i, M_i)
  // back to front.
  std::optional<std::vector<std::pair<int, int>>> search(std::vector<int>& targets,
                                                         std::set<int>& used_ms) {
    for (const auto& [li, mi] : matched) {
      if (budget == 0) throw BudgetError("domination chain search budget exceeded");
      --budget;
      if (used_ms.count(mi)) continue;
      if (t.is_subunit(mi, rec_idx)) continue;  // condition 4
      if (!drives_idx(t, mi, targets.back())) continue;  // condition 2 on L_{i+1}
      bool clean = true;  // condition 3: drives no later target
      for (std::size_t j = 0; j + 1 < targets.size(); ++j) {
        if (drives_idx(t, mi, targets[j])) {
          clean = false;
          break;
        }
      }
      if (!clean) continue;
      // Complete if L_i lands inside the dominating !-unit (condition 5).
      if (t.is_subunit(li, rec_idx)) return std::vector<std::pair<int, int>>{{li, mi}};
      targets.push_back(li);
      used_ms.insert(mi);
      auto deeper = search(targets, used_ms);
      targets.pop_back();
      used_ms.erase(mi);
      if (deeper) {
        deeper->emplace_back(li, mi);
        return deeper;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<DominationWitness> dominates(const TruncUnitTree& t,
                                           const OppositionPairing& pairing,
                                           const UnitRef& rec_unit, const UnitRef& g,
                                           std::size_t search_budget) {
  int ei = require_index(t, rec_unit, "!-unit");
  if (t.kind_of(static_cast<std::size_t>(ei)) != FKind::Rec)
    throw std::invalid_argument("dominates: left argument is not a !-unit");
  int gi = require_index(t, g, "unit");

  if (gi != ei && t.is_subunit(gi, ei)) {
    DominationWitness w;
    w.proper_subunit = true;
    return w;
  }

  ChainSearch cs{t, pairing, ei, search_budget, {}, };
  for (const auto& [a, b] : pairing.pairs) {
    int ai = t.index_of(a);
    int bi = t.index_of(b);
    if (ai < 0 || bi < 0) continue;
    cs.matched.emplace_back(ai, bi);
    cs.matched.emplace_back(bi, ai);
  }
  std::sort(cs.matched.begin(), cs.matched.end());

  std::vector<int> targets{gi};
  std::set<int> used;
  auto found = cs.search(targets, used);
  if (!found) return std::nullopt;

  DominationWitness w;
  // Segments were collected tail-first; restore forward order and attach
  // the drive witnesses X_i = scs(M_i, L_{i+1}).
  std::reverse(found->begin(), found->end());
  for (std::size_t i = 0; i < found->size(); ++i) {
    int li = (*found)[i].first;
    int mi = (*found)[i].second;
    int next_l = i + 1 < found->size() ? (*found)[i + 1].first : gi;
    int xi = t.scs(mi, next_l);
    w.chain.push_back({t.unit(static_cast<std::size_t>(li)), t.unit(static_cast<std::size_t>(mi)),
                       t.unit(static_cast<std::size_t>(xi))});
  }
  return w;
}

std::vector<std::vector<char>> domination_matrix(const TruncUnitTree& t,
                                                 const OppositionPairing& pairing, bool parallel,
                                                 std::size_t search_budget) {
  const std::vector<int>& recs = t.rec_units();
  std::vector<std::vector<char>> matrix(recs.size(), std::vector<char>(t.size(), 0));
  std::exception_ptr error;

#if defined(CCW_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (std::size_t r = 0; r < recs.size(); ++r) {
    try {
      const UnitRef& rec = t.unit(static_cast<std::size_t>(recs[r]));
      for (std::size_t u = 0; u < t.size(); ++u)
        matrix[r][u] = dominates(t, pairing, rec, t.unit(u), search_budget).has_value() ? 1 : 0;
    } catch (...) {
#if defined(CCW_HAVE_OPENMP)
#pragma omp critical
#endif
      error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return matrix;
}

AuditReport audit_resolution(const TruncUnitTree& t, const OppositionPairing& pairing,
                             bool parallel, std::size_t search_budget) {
  AuditReport rep;
  const std::vector<int>& recs = t.rec_units();
  std::vector<std::vector<char>> dom = domination_matrix(t, pairing, parallel, search_budget);

  rep.root_undominated = true;
  for (std::size_t r = 0; r < recs.size(); ++r) {
    if (dom[r][0]) {
      rep.root_undominated = false;
      rep.detail += "root dominated by " + t.unit(static_cast<std::size_t>(recs[r])).str() + "; ";
    }
  }

  rep.asymmetric = true;
  for (std::size_t a = 0; a < recs.size() && rep.asymmetric; ++a) {
    for (std::size_t b = 0; b < recs.size(); ++b) {
      if (dom[a][static_cast<std::size_t>(recs[b])] && dom[b][static_cast<std::size_t>(recs[a])]) {
        rep.asymmetric = false;
        rep.detail += "mutual domination between " +
                      t.unit(static_cast<std::size_t>(recs[a])).str() + " and " +
                      t.unit(static_cast<std::size_t>(recs[b])).str() + "; ";
        break;
      }
    }
  }

  rep.transitive = true;
  for (std::size_t a = 0; a < recs.size() && rep.transitive; ++a) {
    for (std::size_t b = 0; b < recs.size() && rep.transitive; ++b) {
      if (!dom[a][static_cast<std::size_t>(recs[b])]) continue;
      for (std::size_t u = 0; u < t.size(); ++u) {
        if (dom[b][u] && !dom[a][u]) {
          rep.transitive = false;
          rep.detail += "transitivity fails at (" + t.unit(static_cast<std::size_t>(recs[a])).str() +
                        ", " + t.unit(static_cast<std::size_t>(recs[b])).str() + ", " +
                        t.unit(u).str() + "); ";
          break;
        }
      }
    }
  }
  return rep;
}

namespace {

// Depth-first enumeration over branch assignments, first-by-address
// unresolved unit first, bitstrings in lexicographic order.
struct ResolutionSearch {
  const Formula& f;
  int height;
  const Run& run;
  const OppositionPairing& pairing;
  std::size_t node_budget;
  int atom_cap;
  std::size_t search_budget;
  std::size_t candidates = 0;
  bool any_taut = false;
  std::optional<std::pair<Resolution, Hyperformula>> found;

  std::vector<std::string> all_branches() const {
    std::vector<std::string> out;
    std::string s(static_cast<std::size_t>(height), '0');
    while (true) {
      out.push_back(s);
      int i = static_cast<int>(s.size()) - 1;
      while (i >= 0 && s[static_cast<std::size_t>(i)] == '1') s[static_cast<std::size_t>(i--)] = '0';
      if (i < 0) break;
      s[static_cast<std::size_t>(i)] = '1';
    }
    return out;
  }

  bool run_search(Resolution& cur) {
    TruncUnitTree t = TruncUnitTree::build(f, height, cur, node_budget);
    std::optional<std::pair<std::string, UnitRef>> next;
    for (int rec : t.rec_units()) {
      const UnitRef& u = t.unit(static_cast<std::size_t>(rec));
      if (cur.count(u)) continue;
      std::string key = unit_address_key(t, rec);
      if (!next || key < next->first) next = {key, u};
    }
    if (!next) {
      if (++candidates > search_budget) throw BudgetError("resolution search budget exceeded");
      Hyperformula hf = build_hyperformula(t, run);
      if (!is_tautology(hf, atom_cap)) return false;
      any_taut = true;
      AuditReport audit = audit_resolution(t, pairing.restricted_to(t), true, search_budget);
      if (!audit.all()) return false;
      found = {cur, hf};
      return true;
    }
    for (const std::string& bits : all_branches()) {
      cur[next->second] = bits;
      if (run_search(cur)) return true;
      cur.erase(next->second);
    }
    return false;
  }
};

}  // namespace

FindResult find_total_resolution(const Formula& f, int height, const Run& run,
                                 std::size_t node_budget, int atom_cap,
                                 std::size_t search_budget) {
  TruncUnitTree t0 = TruncUnitTree::build(f, height, {}, node_budget);
  FindResult res;
  res.pairing = opposite_pairs(t0, run);

  if (t0.rec_units().empty()) {
    res.status = FindResult::Status::Found;
    res.resolution = {};
    res.hyperformula = build_hyperformula(t0, run);
    return res;
  }

  ResolutionSearch rs{f, height, run, res.pairing, node_budget, atom_cap, search_budget};
  Resolution cur;
  rs.run_search(cur);
  if (rs.found) {
    res.status = FindResult::Status::Found;
    res.resolution = rs.found->first;
    res.hyperformula = rs.found->second;
  } else {
    res.status = rs.any_taut ? FindResult::Status::AuditFailed
                             : FindResult::Status::NoneTautological;
  }
  return res;
}

bool mature(const Formula& f, const std::vector<std::array<UnitRef, 3>>& chain, const Run& run,
            uint64_t m_bound) {
  // Superunits of a unit are exactly the prefixes of its (position, branch)
  // walk; rebuild them with the formula to know where modal steps occur.
  auto prefixes = [&f](const UnitRef& u) {
    std::vector<UnitRef> out;
    UnitRef cur;
    Formula sub = f;
    std::size_t bidx = 0;
    out.push_back(cur);
    for (int step : u.pos.path) {
      if (is_modal(sub.kind())) cur.branches.push_back(u.branches[bidx++]);
      cur.pos.path.push_back(step);
      sub = sub.child(static_cast<std::size_t>(step));
      out.push_back(cur);
    }
    return out;
  };

  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = 0; j < chain.size(); ++j) {
      if (i == j) continue;
      for (const UnitRef& hi : prefixes(chain[i][1])) {
        for (const UnitRef& hj : prefixes(chain[j][1])) {
          if (incomparable(hi, hj) && !dm_incomparable(f, hi, hj, run, m_bound)) return false;
        }
      }
    }
  }
  return true;
}

std::string resolution_to_text(const Resolution& r) {
  std::string out;
  for (const auto& [unit, bits] : r) {
    out += "RESOLVE " + unit.str() + " " + (bits.empty() ? "e" : bits) + "\n";
  }
  return out;
}

std::string pairing_to_text(const OppositionPairing& p) {
  std::string out;
  for (const auto& [a, b] : p.pairs) out += "PAIR " + a.str() + " " + b.str() + "\n";
  return out;
}

void analysis_from_text(const std::string& text, Resolution& r, OppositionPairing& p) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "RESOLVE") {
      std::string unit, bits;
      if (!(ls >> unit >> bits)) throw std::invalid_argument("bad RESOLVE line: " + line);
      r[UnitRef::parse(unit)] = bits == "e" ? "" : bits;
    } else if (kw == "PAIR") {
      std::string a, b;
      if (!(ls >> a >> b)) throw std::invalid_argument("bad PAIR line: " + line);
      p.pairs.emplace_back(UnitRef::parse(a), UnitRef::parse(b));
    } else {
      throw std::invalid_argument("unknown analysis line: " + line);
    }
  }
}

}  // namespace ccw
