#include "ccw/cirquent.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ccw {

namespace {

bool contains(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void erase_value(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

// Applies an index map to every group of the cirquent; entries mapped to -1
// are dropped.
void remap_groups(Cirquent& c, const std::vector<int>& map) {
  auto remap = [&map](std::vector<int>& members) {
    std::vector<int> out;
    for (int m : members) {
      int to = map[static_cast<std::size_t>(m)];
      if (to >= 0) insert_sorted(out, to);
    }
    members = std::move(out);
  };
  for (auto& u : c.undergroups) remap(u);
  for (auto& o : c.overgroups) remap(o.members);
}

std::vector<int> identity_map(std::size_t n) {
  std::vector<int> map(n);
  for (std::size_t i = 0; i < n; ++i) map[i] = static_cast<int>(i);
  return map;
}

bool top_is(const Slot& s, FKind k) { return s.formula.kind() == k; }

}  // namespace

std::string Annotation::str() const {
  switch (kind) {
    case Kind::None: return "";
    case Kind::Master: return "@M";
    case Kind::Label: return "@L:" + label.str();
  }
  return "";
}

std::optional<std::string> validate(const Cirquent& c) {
  int n = static_cast<int>(c.slots.size());
  std::vector<char> in_under(c.slots.size(), 0), in_over(c.slots.size(), 0);
  auto check_group = [&](const std::vector<int>& members, const char* side,
                         std::vector<char>& seen) -> std::optional<std::string> {
    if (members.empty()) return std::string(side) + "group is empty";
    if (!std::is_sorted(members.begin(), members.end()) ||
        std::adjacent_find(members.begin(), members.end()) != members.end())
      return std::string(side) + "group members not a sorted set";
    for (int m : members) {
      if (m < 0 || m >= n) return std::string(side) + "group index out of range";
      seen[static_cast<std::size_t>(m)] = 1;
    }
    return std::nullopt;
  };
  for (const auto& u : c.undergroups)
    if (auto err = check_group(u, "under", in_under)) return err;
  for (const auto& o : c.overgroups)
    if (auto err = check_group(o.members, "over", in_over)) return err;
  for (std::size_t i = 0; i < c.slots.size(); ++i) {
    if (!in_under[i]) return "oformula outside every undergroup";
    if (!in_over[i]) return "oformula outside every overgroup";
    if (c.slots[i].checked && c.slots[i].formula.kind() != FKind::CoRec)
      return "check mark on a non-? oformula";
  }
  return std::nullopt;
}

Cirquent initial_cirquent(const Formula& f) {
  Cirquent c;
  c.slots.push_back(Slot{f, false});
  c.undergroups.push_back({0});
  c.overgroups.push_back(Overgroup{{0}, Annotation::master()});
  return c;
}

bool is_axiom(const Cirquent& c) {
  if (validate(c)) return false;
  auto is_pair = [&c](const std::vector<int>& g) {
    return g.size() == 2 &&
           c.slots[static_cast<std::size_t>(g[1])].formula ==
               negate(c.slots[static_cast<std::size_t>(g[0])].formula);
  };
  std::set<int> under_seen, over_seen;
  for (const auto& u : c.undergroups) {
    if (!is_pair(u)) return false;
    for (int m : u)
      if (!under_seen.insert(m).second) return false;
  }
  for (const auto& o : c.overgroups) {
    if (!is_pair(o.members)) return false;
    for (int m : o.members)
      if (!over_seen.insert(m).second) return false;
  }
  // Every slot is in exactly one group per side (no sharing + full cover),
  // and the two groups coincide as sets.
  for (std::size_t s = 0; s < c.slots.size(); ++s) {
    const std::vector<int>* under = nullptr;
    const std::vector<int>* over = nullptr;
    for (const auto& u : c.undergroups)
      if (contains(u, static_cast<int>(s))) under = &u;
    for (const auto& o : c.overgroups)
      if (contains(o.members, static_cast<int>(s))) over = &o.members;
    if (!under || !over || *under != *over) return false;
  }
  return true;
}

bool equivalent(const Cirquent& a, const Cirquent& b) {
  if (a.slots.size() != b.slots.size()) return false;
  for (std::size_t i = 0; i < a.slots.size(); ++i)
    if (a.slots[i].formula != b.slots[i].formula) return false;
  auto under_key = [](const Cirquent& c) {
    std::vector<std::vector<int>> k = c.undergroups;
    std::sort(k.begin(), k.end());
    return k;
  };
  auto over_key = [](const Cirquent& c) {
    std::vector<std::vector<int>> k;
    for (const auto& o : c.overgroups) k.push_back(o.members);
    std::sort(k.begin(), k.end());
    return k;
  };
  return under_key(a) == under_key(b) && over_key(a) == over_key(b);
}

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw RuleError(msg);
}

Cirquent apply_exchange(const Cirquent& c, const RuleInstance& r) {
  Cirquent out = c;
  int i = r.index;
  switch (r.exchange_kind) {
    case ExchangeKind::Slots: {
      require(i >= 0 && i + 1 < static_cast<int>(c.slots.size()), "exchange slot out of range");
      std::swap(out.slots[static_cast<std::size_t>(i)], out.slots[static_cast<std::size_t>(i + 1)]);
      std::vector<int> map = identity_map(c.slots.size());
      map[static_cast<std::size_t>(i)] = i + 1;
      map[static_cast<std::size_t>(i + 1)] = i;
      remap_groups(out, map);
      break;
    }
    case ExchangeKind::Undergroups:
      require(i >= 0 && i + 1 < static_cast<int>(c.undergroups.size()),
              "exchange undergroup out of range");
      std::swap(out.undergroups[static_cast<std::size_t>(i)],
                out.undergroups[static_cast<std::size_t>(i + 1)]);
      break;
    case ExchangeKind::Overgroups:
      require(i >= 0 && i + 1 < static_cast<int>(c.overgroups.size()),
              "exchange overgroup out of range");
      std::swap(out.overgroups[static_cast<std::size_t>(i)],
                out.overgroups[static_cast<std::size_t>(i + 1)]);
      break;
  }
  return out;
}

Cirquent apply_weakening(const Cirquent& c, const RuleInstance& r) {
  require(r.undergroup >= 0 && r.undergroup < static_cast<int>(c.undergroups.size()),
          "weakening undergroup out of range");
  require(r.index >= 0 && r.index < static_cast<int>(c.slots.size()),
          "weakening slot out of range");
  Cirquent out = c;
  std::vector<int>& u = out.undergroups[static_cast<std::size_t>(r.undergroup)];
  require(contains(u, r.index), "weakening: slot not in the undergroup");
  erase_value(u, r.index);
  require(!u.empty(), "weakening would empty an undergroup");

  bool orphaned = true;
  for (const auto& g : out.undergroups)
    if (contains(g, r.index)) orphaned = false;
  if (orphaned) {
    out.slots.erase(out.slots.begin() + r.index);
    std::vector<int> map = identity_map(c.slots.size());
    map[static_cast<std::size_t>(r.index)] = -1;
    for (std::size_t i = static_cast<std::size_t>(r.index) + 1; i < c.slots.size(); ++i)
      map[i] = static_cast<int>(i) - 1;
    remap_groups(out, map);
    for (const auto& o : out.overgroups)
      require(!o.members.empty(), "weakening would empty an overgroup");
  }
  return out;
}

Cirquent apply_contraction(const Cirquent& c, const RuleInstance& r) {
  require(r.index >= 0 && r.index < static_cast<int>(c.slots.size()),
          "contraction slot out of range");
  const Slot& s = c.slots[static_cast<std::size_t>(r.index)];
  require(top_is(s, FKind::CoRec), "contraction needs a ?-oformula");
  Cirquent out = c;
  out.slots.insert(out.slots.begin() + r.index + 1, s);
  std::vector<int> map = identity_map(c.slots.size());
  for (std::size_t i = static_cast<std::size_t>(r.index) + 1; i < c.slots.size(); ++i)
    map[i] = static_cast<int>(i) + 1;
  remap_groups(out, map);
  // The copy joins every group the original is in.
  for (auto& u : out.undergroups)
    if (contains(u, r.index)) insert_sorted(u, r.index + 1);
  for (auto& o : out.overgroups)
    if (contains(o.members, r.index)) insert_sorted(o.members, r.index + 1);
  return out;
}

Cirquent apply_under_dup(const Cirquent& c, const RuleInstance& r) {
  int i = r.index;
  require(i >= 0 && i + 1 < static_cast<int>(c.undergroups.size()),
          "undergroup duplication out of range");
  require(c.undergroups[static_cast<std::size_t>(i)] ==
              c.undergroups[static_cast<std::size_t>(i + 1)],
          "undergroup duplication needs adjacent identical undergroups");
  Cirquent out = c;
  out.undergroups.erase(out.undergroups.begin() + i + 1);
  return out;
}

Cirquent apply_over_dup(const Cirquent& c, const RuleInstance& r) {
  int i = r.index;
  require(i >= 0 && i + 1 < static_cast<int>(c.overgroups.size()),
          "overgroup duplication out of range");
  const Overgroup& a = c.overgroups[static_cast<std::size_t>(i)];
  const Overgroup& b = c.overgroups[static_cast<std::size_t>(i + 1)];
  require(a.members == b.members, "overgroup duplication needs adjacent identical overgroups");
  Cirquent out = c;
  // The master status survives a merge with a labeled or plain duplicate.
  if (b.ann.kind == Annotation::Kind::Master)
    out.overgroups[static_cast<std::size_t>(i)].ann = b.ann;
  out.overgroups.erase(out.overgroups.begin() + i + 1);
  return out;
}

Cirquent apply_merging(const Cirquent& c, const RuleInstance& r) {
  int i = r.index;
  require(i >= 0 && i < static_cast<int>(c.overgroups.size()), "merging overgroup out of range");
  const Overgroup& o = c.overgroups[static_cast<std::size_t>(i)];
  std::vector<int> first = r.subset;
  std::sort(first.begin(), first.end());
  require(!first.empty(), "merging: first part empty");
  std::vector<int> second;
  for (int m : o.members)
    if (!contains(first, m)) second.push_back(m);
  for (int m : first) require(contains(o.members, m), "merging: subset not within the overgroup");
  require(!second.empty(), "merging: second part empty");
  Cirquent out = c;
  out.overgroups[static_cast<std::size_t>(i)].members = first;
  out.overgroups.insert(out.overgroups.begin() + i + 1, Overgroup{second, o.ann});
  return out;
}

// Shared by conjunction and disjunction introduction: splits slot s = E*G
// into adjacent E, G and returns the index map for the other slots.
Cirquent split_slot(const Cirquent& c, int s, std::vector<int>& map) {
  const Slot& slot = c.slots[static_cast<std::size_t>(s)];
  Cirquent out = c;
  out.slots[static_cast<std::size_t>(s)] = Slot{slot.formula.child(0), false};
  out.slots.insert(out.slots.begin() + s + 1, Slot{slot.formula.child(1), false});
  map = identity_map(c.slots.size());
  for (std::size_t i = static_cast<std::size_t>(s) + 1; i < c.slots.size(); ++i)
    map[i] = static_cast<int>(i) + 1;
  return out;
}

Cirquent apply_conj_intro(const Cirquent& c, const RuleInstance& r) {
  int s = r.index;
  require(s >= 0 && s < static_cast<int>(c.slots.size()), "slot out of range");
  require(top_is(c.slots[static_cast<std::size_t>(s)], FKind::And),
          "conjunction introduction needs an &-oformula");
  std::vector<int> map;
  Cirquent out = split_slot(c, s, map);
  // Every undergroup containing the slot splits into an E-group and a
  // G-group, identical otherwise; overgroups containing it take both.
  std::vector<std::vector<int>> unders;
  for (const auto& u0 : c.undergroups) {
    std::vector<int> u;
    for (int m : u0) {
      int to = map[static_cast<std::size_t>(m)];
      if (m != s) insert_sorted(u, to);
    }
    if (contains(u0, s)) {
      std::vector<int> ue = u, ug = u;
      insert_sorted(ue, s);
      insert_sorted(ug, s + 1);
      unders.push_back(std::move(ue));
      unders.push_back(std::move(ug));
    } else {
      unders.push_back(std::move(u));
    }
  }
  out.undergroups = std::move(unders);
  std::vector<Overgroup> overs;
  for (const auto& o0 : c.overgroups) {
    Overgroup o{{}, o0.ann};
    for (int m : o0.members) {
      int to = map[static_cast<std::size_t>(m)];
      if (m != s) insert_sorted(o.members, to);
    }
    if (contains(o0.members, s)) {
      insert_sorted(o.members, s);
      insert_sorted(o.members, s + 1);
    }
    overs.push_back(std::move(o));
  }
  out.overgroups = std::move(overs);
  return out;
}

Cirquent apply_disj_intro(const Cirquent& c, const RuleInstance& r) {
  int s = r.index;
  require(s >= 0 && s < static_cast<int>(c.slots.size()), "slot out of range");
  require(top_is(c.slots[static_cast<std::size_t>(s)], FKind::Or),
          "disjunction introduction needs a |-oformula");
  std::vector<int> map;
  Cirquent out = split_slot(c, s, map);
  auto widen = [&](std::vector<int>& members, const std::vector<int>& original) {
    std::vector<int> next;
    for (int m : original)
      if (m != s) insert_sorted(next, map[static_cast<std::size_t>(m)]);
    if (contains(original, s)) {
      insert_sorted(next, s);
      insert_sorted(next, s + 1);
    }
    members = std::move(next);
  };
  for (std::size_t i = 0; i < out.undergroups.size(); ++i)
    widen(out.undergroups[i], c.undergroups[i]);
  for (std::size_t i = 0; i < out.overgroups.size(); ++i)
    widen(out.overgroups[i].members, c.overgroups[i].members);
  return out;
}

Cirquent apply_rec_intro(const Cirquent& c, const RuleInstance& r) {
  int s = r.index;
  require(s >= 0 && s < static_cast<int>(c.slots.size()), "slot out of range");
  require(top_is(c.slots[static_cast<std::size_t>(s)], FKind::Rec),
          "recurrence introduction needs a !-oformula");
  Cirquent out = c;
  out.slots[static_cast<std::size_t>(s)] =
      Slot{c.slots[static_cast<std::size_t>(s)].formula.child(0), false};
  out.overgroups.push_back(Overgroup{{s}, r.label});
  return out;
}

Cirquent apply_corec_intro(const Cirquent& c, const RuleInstance& r) {
  int s = r.index;
  require(s >= 0 && s < static_cast<int>(c.slots.size()), "slot out of range");
  require(top_is(c.slots[static_cast<std::size_t>(s)], FKind::CoRec),
          "corecurrence introduction needs a ?-oformula");
  Cirquent out = c;
  out.slots[static_cast<std::size_t>(s)] =
      Slot{c.slots[static_cast<std::size_t>(s)].formula.child(0), false};
  for (int og : r.subset) {
    require(og >= 0 && og < static_cast<int>(c.overgroups.size()),
            "corecurrence target overgroup out of range");
    std::vector<int>& members = out.overgroups[static_cast<std::size_t>(og)].members;
    require(!contains(members, s), "corecurrence target overgroup already holds the oformula");
    insert_sorted(members, s);
  }
  return out;
}

}  // namespace

Cirquent apply_rule(const Cirquent& conclusion, const RuleInstance& r) {
  if (auto err = validate(conclusion)) throw RuleError("conclusion invalid: " + *err);
  Cirquent premise;
  switch (r.name) {
    case RuleName::Exchange: premise = apply_exchange(conclusion, r); break;
    case RuleName::Weakening: premise = apply_weakening(conclusion, r); break;
    case RuleName::Contraction: premise = apply_contraction(conclusion, r); break;
    case RuleName::UndergroupDuplication: premise = apply_under_dup(conclusion, r); break;
    case RuleName::OvergroupDuplication: premise = apply_over_dup(conclusion, r); break;
    case RuleName::Merging: premise = apply_merging(conclusion, r); break;
    case RuleName::ConjunctionIntroduction: premise = apply_conj_intro(conclusion, r); break;
    case RuleName::DisjunctionIntroduction: premise = apply_disj_intro(conclusion, r); break;
    case RuleName::RecurrenceIntroduction: premise = apply_rec_intro(conclusion, r); break;
    case RuleName::CorecurrenceIntroduction: premise = apply_corec_intro(conclusion, r); break;
  }
  if (auto err = validate(premise)) throw RuleError("premise invalid: " + *err);
  return premise;
}

CheckResult check_step(const Cirquent& premise, const Cirquent& conclusion,
                       const RuleInstance& r) {
  if (auto err = validate(premise)) return {false, "premise: " + *err};
  if (auto err = validate(conclusion)) return {false, "conclusion: " + *err};
  try {
    Cirquent derived = apply_rule(conclusion, r);
    if (!equivalent(derived, premise))
      return {false, "premise does not match the rule application (" + r.str() + ")"};
  } catch (const RuleError& e) {
    return {false, e.what()};
  }
  return {};
}

CheckResult check_derivation(const Derivation& d, const Cirquent& from, const Cirquent& to) {
  if (d.cirquents.empty()) return {false, "derivation has no cirquents"};
  if (d.rules.size() + 1 != d.cirquents.size())
    return {false, "derivation must have one rule per adjacent cirquent pair"};
  if (!equivalent(d.cirquents.front(), from)) return {false, "premise end does not match"};
  if (!equivalent(d.cirquents.back(), to)) return {false, "conclusion end does not match"};
  for (std::size_t i = 0; i < d.rules.size(); ++i) {
    CheckResult step = check_step(d.cirquents[i], d.cirquents[i + 1], d.rules[i]);
    if (!step.ok) return {false, "step " + std::to_string(i) + ": " + step.message};
  }
  return {};
}

CheckResult check_proof(const Derivation& d, const Formula& f) {
  if (d.cirquents.empty()) return {false, "proof has no cirquents"};
  if (!is_axiom(d.cirquents.front())) return {false, "premise end is not an axiom"};
  return check_derivation(d, d.cirquents.front(), initial_cirquent(f));
}

// --- text format ---------------------------------------------------------

namespace {

const char* rule_token(RuleName n) {
  switch (n) {
    case RuleName::Exchange: return "exchange";
    case RuleName::Weakening: return "weakening";
    case RuleName::Contraction: return "contraction";
    case RuleName::UndergroupDuplication: return "under_dup";
    case RuleName::OvergroupDuplication: return "over_dup";
    case RuleName::Merging: return "merging";
    case RuleName::ConjunctionIntroduction: return "conj_intro";
    case RuleName::DisjunctionIntroduction: return "disj_intro";
    case RuleName::RecurrenceIntroduction: return "rec_intro";
    case RuleName::CorecurrenceIntroduction: return "corec_intro";
  }
  return "?";
}

RuleName rule_from_token(const std::string& t) {
  if (t == "exchange") return RuleName::Exchange;
  if (t == "weakening") return RuleName::Weakening;
  if (t == "contraction") return RuleName::Contraction;
  if (t == "under_dup") return RuleName::UndergroupDuplication;
  if (t == "over_dup") return RuleName::OvergroupDuplication;
  if (t == "merging") return RuleName::Merging;
  if (t == "conj_intro") return RuleName::ConjunctionIntroduction;
  if (t == "disj_intro") return RuleName::DisjunctionIntroduction;
  if (t == "rec_intro") return RuleName::RecurrenceIntroduction;
  if (t == "corec_intro") return RuleName::CorecurrenceIntroduction;
  throw std::invalid_argument("unknown rule: " + t);
}

std::string set_token(const std::vector<int>& members) {
  std::string out = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(members[i]);
  }
  out += '}';
  return out;
}

std::vector<int> parse_set_token(const std::string& t) {
  if (t.size() < 2 || t.front() != '{' || t.back() != '}')
    throw std::invalid_argument("bad group token: " + t);
  std::vector<int> out;
  std::string body = t.substr(1, t.size() - 2);
  if (body.empty()) return out;
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<std::string> split_top(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

Annotation parse_annotation(const std::string& t) {
  if (t.empty()) return Annotation::none();
  if (t == "@M") return Annotation::master();
  if (t.rfind("@L:", 0) == 0) return Annotation::labeled(UnitRef::parse(t.substr(3)));
  throw std::invalid_argument("bad annotation: " + t);
}

}  // namespace

std::string RuleInstance::str() const {
  std::string out = "RULE ";
  out += rule_token(name);
  switch (name) {
    case RuleName::Exchange:
      out += exchange_kind == ExchangeKind::Slots
                 ? " slots "
                 : (exchange_kind == ExchangeKind::Undergroups ? " unders " : " overs ");
      out += std::to_string(index);
      break;
    case RuleName::Weakening:
      out += ' ' + std::to_string(undergroup) + ' ' + std::to_string(index);
      break;
    case RuleName::Merging:
    case RuleName::CorecurrenceIntroduction:
      out += ' ' + std::to_string(index) + ' ' + set_token(subset);
      break;
    case RuleName::RecurrenceIntroduction:
      out += ' ' + std::to_string(index);
      if (label.kind != Annotation::Kind::None) out += ' ' + label.str();
      break;
    default:
      out += ' ' + std::to_string(index);
      break;
  }
  return out;
}

RuleInstance RuleInstance::parse(const std::string& text) {
  std::istringstream in(text);
  std::string kw, name_tok;
  in >> kw >> name_tok;
  if (kw != "RULE") throw std::invalid_argument("rule line must start with RULE");
  RuleInstance r;
  r.name = rule_from_token(name_tok);
  switch (r.name) {
    case RuleName::Exchange: {
      std::string kind;
      in >> kind >> r.index;
      if (kind == "slots")
        r.exchange_kind = ExchangeKind::Slots;
      else if (kind == "unders")
        r.exchange_kind = ExchangeKind::Undergroups;
      else if (kind == "overs")
        r.exchange_kind = ExchangeKind::Overgroups;
      else
        throw std::invalid_argument("bad exchange kind: " + kind);
      break;
    }
    case RuleName::Weakening:
      in >> r.undergroup >> r.index;
      break;
    case RuleName::Merging:
    case RuleName::CorecurrenceIntroduction: {
      std::string set_tok;
      in >> r.index >> set_tok;
      r.subset = parse_set_token(set_tok);
      break;
    }
    case RuleName::RecurrenceIntroduction: {
      in >> r.index;
      std::string ann;
      if (in >> ann) r.label = parse_annotation(ann);
      break;
    }
    default:
      in >> r.index;
      break;
  }
  if (in.fail()) throw std::invalid_argument("bad rule line: " + text);
  return r;
}

std::string cirquent_to_line(const Cirquent& c) {
  std::string out;
  for (std::size_t i = 0; i < c.slots.size(); ++i) {
    if (i) out += ", ";
    if (c.slots[i].checked) out += '*';
    out += render(c.slots[i].formula);
  }
  out += " ; ";
  for (std::size_t i = 0; i < c.undergroups.size(); ++i) {
    if (i) out += ", ";
    out += set_token(c.undergroups[i]);
  }
  out += " ; ";
  for (std::size_t i = 0; i < c.overgroups.size(); ++i) {
    if (i) out += ", ";
    out += set_token(c.overgroups[i].members);
    out += c.overgroups[i].ann.str();
  }
  return out;
}

Cirquent cirquent_from_line(const std::string& line) {
  std::vector<std::string> fields = split_top(line, ';');
  if (fields.size() != 3)
    throw std::invalid_argument("cirquent line needs 'slots ; undergroups ; overgroups'");
  Cirquent c;
  for (const std::string& raw : split_top(fields[0], ',')) {
    std::string tok = trim(raw);
    if (tok.empty()) throw std::invalid_argument("empty slot token");
    Slot s;
    if (tok.front() == '*') {
      s.checked = true;
      tok = trim(tok.substr(1));
    }
    s.formula = parse_formula(tok);
    c.slots.push_back(std::move(s));
  }
  // Groups are brace-delimited; scan for '{...}' tokens with their
  // annotation suffixes.
  auto parse_groups = [](const std::string& text) {
    std::vector<std::pair<std::vector<int>, std::string>> out;
    std::size_t i = 0;
    while (i < text.size()) {
      std::size_t open = text.find('{', i);
      if (open == std::string::npos) break;
      std::size_t close = text.find('}', open);
      if (close == std::string::npos) throw std::invalid_argument("unbalanced group braces");
      std::vector<int> members = parse_set_token(text.substr(open, close - open + 1));
      std::sort(members.begin(), members.end());
      // Annotation runs to the next comma or end.
      std::size_t end = text.find(',', close);
      if (end == std::string::npos) end = text.size();
      std::string ann = trim(text.substr(close + 1, end - close - 1));
      out.emplace_back(std::move(members), std::move(ann));
      i = end + 1;
    }
    return out;
  };
  for (auto& [members, ann] : parse_groups(fields[1])) {
    if (!ann.empty()) throw std::invalid_argument("undergroups carry no annotations");
    c.undergroups.push_back(std::move(members));
  }
  for (auto& [members, ann] : parse_groups(fields[2]))
    c.overgroups.push_back(Overgroup{std::move(members), parse_annotation(ann)});
  return c;
}

std::string derivation_to_text(const Derivation& d) {
  std::string out;
  for (std::size_t i = 0; i < d.cirquents.size(); ++i) {
    out += cirquent_to_line(d.cirquents[i]);
    out += '\n';
    if (i < d.rules.size()) {
      out += d.rules[i].str();
      out += '\n';
    }
  }
  return out;
}

Derivation derivation_from_text(const std::string& text) {
  // Strict alternation: cirquent (RULE cirquent)*.
  Derivation d;
  std::istringstream in(text);
  std::string line;
  bool expect_cirquent = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (line.rfind("RULE ", 0) == 0) {
      if (expect_cirquent) throw std::invalid_argument("rule line where a cirquent was expected");
      d.rules.push_back(RuleInstance::parse(line));
      expect_cirquent = true;
    } else {
      if (!expect_cirquent) throw std::invalid_argument("two consecutive cirquent lines");
      d.cirquents.push_back(cirquent_from_line(line));
      expect_cirquent = false;
    }
  }
  if (expect_cirquent && !d.cirquents.empty())
    throw std::invalid_argument("derivation ends with a dangling rule line");
  return d;
}

}  // namespace ccw
