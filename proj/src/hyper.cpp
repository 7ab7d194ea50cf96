#include "ccw/hyper.hpp"

#include <algorithm>
#include <map>

namespace ccw {

namespace {

std::string set_str(const std::set<uint64_t>& s) {
  std::string out = "{";
  bool first = true;
  for (uint64_t v : s) {
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  }
  out += '}';
  return out;
}

}  // namespace

std::string Hyperatom::str() const {
  return "(" + atom + "," + set_str(A) + "," + set_str(B) + ")";
}

const Hyperformula::Node* Hyperformula::node() const {
  if (!node_) throw std::logic_error("empty hyperformula");
  return node_.get();
}

Hyperformula Hyperformula::pos_lit(Hyperatom a) {
  return pos_lit(std::move(a), UnitRef{}, FKind::Atom);
}
Hyperformula Hyperformula::neg_lit(Hyperatom a) {
  return neg_lit(std::move(a), UnitRef{}, FKind::NegAtom);
}
Hyperformula Hyperformula::conj(std::vector<Hyperformula> kids) {
  return conj(std::move(kids), UnitRef{}, FKind::And);
}
Hyperformula Hyperformula::disj(std::vector<Hyperformula> kids) {
  return disj(std::move(kids), UnitRef{}, FKind::Or);
}

Hyperformula Hyperformula::pos_lit(Hyperatom a, UnitRef origin, FKind origin_kind) {
  return Hyperformula(std::make_shared<const Node>(
      Node{HKind::PosLit, std::move(a), {}, std::move(origin), origin_kind}));
}
Hyperformula Hyperformula::neg_lit(Hyperatom a, UnitRef origin, FKind origin_kind) {
  return Hyperformula(std::make_shared<const Node>(
      Node{HKind::NegLit, std::move(a), {}, std::move(origin), origin_kind}));
}
Hyperformula Hyperformula::conj(std::vector<Hyperformula> kids, UnitRef origin, FKind origin_kind) {
  if (kids.empty()) throw std::invalid_argument("conjunction needs at least one child");
  return Hyperformula(std::make_shared<const Node>(
      Node{HKind::And, {}, std::move(kids), std::move(origin), origin_kind}));
}
Hyperformula Hyperformula::disj(std::vector<Hyperformula> kids, UnitRef origin, FKind origin_kind) {
  if (kids.empty()) throw std::invalid_argument("disjunction needs at least one child");
  return Hyperformula(std::make_shared<const Node>(
      Node{HKind::Or, {}, std::move(kids), std::move(origin), origin_kind}));
}

bool Hyperformula::operator==(const Hyperformula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind || a.atom != b.atom || a.origin != b.origin ||
      a.origin_kind != b.origin_kind || a.kids.size() != b.kids.size())
    return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!(a.kids[i] == b.kids[i])) return false;
  return true;
}

std::string Hyperformula::str() const {
  switch (kind()) {
    case HKind::PosLit:
      return "lit[" + origin().str() + "] " + atom().atom + " " + set_str(atom().A) + " " +
             set_str(atom().B);
    case HKind::NegLit:
      return "~lit[" + origin().str() + "] " + atom().atom + " " + set_str(atom().A) + " " +
             set_str(atom().B);
    case HKind::And:
    case HKind::Or: {
      std::string out = kind() == HKind::And ? "and[" : "or[";
      out += origin().str();
      out += "](";
      for (std::size_t i = 0; i < arity(); ++i) {
        if (i) out += ", ";
        out += child(i).str();
      }
      out += ')';
      return out;
    }
  }
  return {};
}

bool Hypermodel::value(const Hyperatom& a) const {
  for (const auto& [atom, v] : assignment)
    if (atom == a) return v;
  return default_value;
}

Hyperformula hyperliteral_of(const Formula& f, const UnitRef& politeral_unit, const Run& run) {
  Formula sub = subformula_at(f, politeral_unit.pos);
  if (!is_literal(sub.kind()))
    throw std::invalid_argument("not a politeral unit: " + politeral_unit.str());
  Run proj = project(run, f, politeral_unit.pos, politeral_unit.branches);
  std::set<uint64_t> top, bot;
  for (const Labmove& lm : proj)
    (lm.player == Player::Top ? top : bot).insert(lm.move.numeral);
  if (sub.kind() == FKind::Atom)
    return Hyperformula::pos_lit(Hyperatom{sub.atom_name(), top, bot}, politeral_unit,
                                 FKind::Atom);
  return Hyperformula::neg_lit(Hyperatom{sub.atom_name(), bot, top}, politeral_unit,
                               FKind::NegAtom);
}

namespace {

Hyperformula build_node(const TruncUnitTree& t, const Run& run, std::size_t idx) {
  FKind k = t.kind_of(idx);
  if (is_literal(k)) return hyperliteral_of(t.formula(), t.unit(idx), run);
  std::vector<Hyperformula> kids;
  kids.reserve(t.children(idx).size());
  for (int c : t.children(idx)) kids.push_back(build_node(t, run, static_cast<std::size_t>(c)));
  if (k == FKind::And || k == FKind::Rec)
    return Hyperformula::conj(std::move(kids), t.unit(idx), k);
  return Hyperformula::disj(std::move(kids), t.unit(idx), k);
}

void count_occurrences(const Hyperformula& hf, std::map<Hyperatom, std::pair<int, int>>& acc) {
  if (hf.kind() == HKind::PosLit) {
    acc[hf.atom()].first++;
    return;
  }
  if (hf.kind() == HKind::NegLit) {
    acc[hf.atom()].second++;
    return;
  }
  for (std::size_t i = 0; i < hf.arity(); ++i) count_occurrences(hf.child(i), acc);
}

// Evaluation against a bitmask over the index of distinct hyperatoms.
struct MaskEval {
  std::vector<Hyperatom> atoms;

  int index_of(const Hyperatom& a) const {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), a);
    return static_cast<int>(it - atoms.begin());
  }

  bool eval(const Hyperformula& hf, uint64_t mask) const {
    switch (hf.kind()) {
      case HKind::PosLit:
        return (mask >> index_of(hf.atom())) & 1u;
      case HKind::NegLit:
        return !((mask >> index_of(hf.atom())) & 1u);
      case HKind::And:
        for (std::size_t i = 0; i < hf.arity(); ++i)
          if (!eval(hf.child(i), mask)) return false;
        return true;
      case HKind::Or:
        for (std::size_t i = 0; i < hf.arity(); ++i)
          if (eval(hf.child(i), mask)) return true;
        return false;
    }
    return false;
  }
};

bool tautology_serial(const MaskEval& ev, const Hyperformula& hf) {
  uint64_t total = uint64_t{1} << ev.atoms.size();
  for (uint64_t mask = 0; mask < total; ++mask)
    if (!ev.eval(hf, mask)) return false;
  return true;
}

bool tautology_parallel(const MaskEval& ev, const Hyperformula& hf) {
#if defined(CCW_HAVE_OPENMP)
  int64_t total = int64_t{1} << ev.atoms.size();
  bool taut = true;
#pragma omp parallel for schedule(static) reduction(&& : taut)
  for (int64_t mask = 0; mask < total; ++mask) {
    taut = taut && ev.eval(hf, static_cast<uint64_t>(mask));
  }
  return taut;
#else
  return tautology_serial(ev, hf);
#endif
}

}  // namespace

Hyperformula build_hyperformula(const TruncUnitTree& tree, const Run& run) {
  return build_node(tree, run, 0);
}

bool is_binary(const Hyperformula& hf) {
  std::map<Hyperatom, std::pair<int, int>> acc;
  count_occurrences(hf, acc);
  for (const auto& [atom, counts] : acc)
    if (counts.first > 1 || counts.second > 1) return false;
  return true;
}

std::vector<Hyperatom> distinct_hyperatoms(const Hyperformula& hf) {
  std::map<Hyperatom, std::pair<int, int>> acc;
  count_occurrences(hf, acc);
  std::vector<Hyperatom> out;
  out.reserve(acc.size());
  for (const auto& [atom, counts] : acc) out.push_back(atom);
  return out;
}

bool evaluate(const Hyperformula& hf, const Hypermodel& model) {
  switch (hf.kind()) {
    case HKind::PosLit:
      return model.value(hf.atom());
    case HKind::NegLit:
      return !model.value(hf.atom());
    case HKind::And:
      for (std::size_t i = 0; i < hf.arity(); ++i)
        if (!evaluate(hf.child(i), model)) return false;
      return true;
    case HKind::Or:
      for (std::size_t i = 0; i < hf.arity(); ++i)
        if (evaluate(hf.child(i), model)) return true;
      return false;
  }
  return false;
}

bool is_tautology(const Hyperformula& hf, int atom_cap, EvalMode mode) {
  MaskEval ev{distinct_hyperatoms(hf)};
  if (static_cast<int>(ev.atoms.size()) > atom_cap)
    throw BudgetError("hyperatom cap exceeded: " + std::to_string(ev.atoms.size()) + " > " +
                      std::to_string(atom_cap));
  if (mode == EvalMode::Serial) return tautology_serial(ev, hf);
  if (mode == EvalMode::Parallel) return tautology_parallel(ev, hf);
  return ev.atoms.size() >= 12 ? tautology_parallel(ev, hf) : tautology_serial(ev, hf);
}

namespace {

struct MutableHyper {
  HKind kind;
  Hyperatom atom;
  std::vector<MutableHyper> kids;
  UnitRef origin;
  FKind origin_kind;
  bool alive = true;
};

MutableHyper thaw(const Hyperformula& hf) {
  MutableHyper m{hf.kind(), {}, {}, hf.origin(), hf.origin_kind()};
  if (hf.is_literal())
    m.atom = hf.atom();
  else
    for (std::size_t i = 0; i < hf.arity(); ++i) m.kids.push_back(thaw(hf.child(i)));
  return m;
}

Hyperformula freeze(const MutableHyper& m) {
  switch (m.kind) {
    case HKind::PosLit:
      return Hyperformula::pos_lit(m.atom, m.origin, m.origin_kind);
    case HKind::NegLit:
      return Hyperformula::neg_lit(m.atom, m.origin, m.origin_kind);
    case HKind::And:
    case HKind::Or: {
      std::vector<Hyperformula> kids;
      for (const MutableHyper& k : m.kids)
        if (k.alive) kids.push_back(freeze(k));
      if (m.kind == HKind::And) return Hyperformula::conj(std::move(kids), m.origin, m.origin_kind);
      return Hyperformula::disj(std::move(kids), m.origin, m.origin_kind);
    }
  }
  throw std::logic_error("bad hyperformula kind");
}

void collect_prunable(MutableHyper& m, std::vector<MutableHyper*>& nodes) {
  if (m.kind == HKind::Or && m.origin_kind == FKind::CoRec) nodes.push_back(&m);
  for (MutableHyper& k : m.kids) collect_prunable(k, nodes);
}

}  // namespace

Hyperformula finitize(const Hyperformula& hf, bool minimize, int atom_cap) {
  if (!is_tautology(hf, atom_cap)) throw std::invalid_argument("finitize: input not tautological");
  if (!minimize) return hf;

  MutableHyper root = thaw(hf);
  std::vector<MutableHyper*> nodes;
  collect_prunable(root, nodes);
  for (MutableHyper* node : nodes) {
    for (MutableHyper& kid : node->kids) {
      std::size_t alive = 0;
      for (const MutableHyper& k : node->kids) alive += k.alive ? 1 : 0;
      if (alive <= 1) break;
      kid.alive = false;
      if (!is_tautology(freeze(root), atom_cap)) kid.alive = true;
    }
  }
  return freeze(root);
}

Player verdict(const Formula& f, const Run& run, const Hypermodel& model, int height,
               std::size_t node_budget) {
  TruncUnitTree tree = TruncUnitTree::build(f, height, {}, node_budget);
  Hyperformula hf = build_hyperformula(tree, run);
  return evaluate(hf, model) ? Player::Top : Player::Bot;
}

}  // namespace ccw
