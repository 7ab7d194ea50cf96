#include "ccw/unit_tree.hpp"

#include <algorithm>

namespace ccw {

std::string UnitRef::str() const {
  std::string out = pos.str();
  out += '@';
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (i) out += ',';
    out += branches[i].empty() ? "e" : branches[i];
  }
  return out;
}

UnitRef UnitRef::parse(const std::string& text) {
  std::size_t at = text.find('@');
  if (at == std::string::npos) throw std::invalid_argument("unit syntax needs '@': " + text);
  UnitRef u;
  u.pos = Position::parse(text.substr(0, at));
  std::string rest = text.substr(at + 1);
  if (rest.empty()) return u;
  std::string cur;
  auto push = [&u](const std::string& tok) {
    if (tok == "e") {
      u.branches.emplace_back();
      return;
    }
    for (char c : tok)
      if (c != '0' && c != '1') throw std::invalid_argument("bad branch bitstring: " + tok);
    u.branches.push_back(tok);
  };
  for (char c : rest) {
    if (c == ',') {
      push(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  push(cur);
  return u;
}

bool is_subunit_ref(const UnitRef& a, const UnitRef& b) {
  if (!b.pos.is_prefix_of(a.pos)) return false;
  if (b.branches.size() > a.branches.size()) return false;
  return std::equal(b.branches.begin(), b.branches.end(), a.branches.begin());
}

bool resolution_extends(const Resolution& r2, const Resolution& r1) {
  for (const auto& [unit, bits] : r1) {
    auto it = r2.find(unit);
    if (it == r2.end() || it->second != bits) return false;
  }
  return true;
}

TruncUnitTree TruncUnitTree::build(const Formula& f, int height, const Resolution& r,
                                   std::size_t node_budget) {
  for (const auto& [unit, bits] : r) {
    if (static_cast<int>(bits.size()) != height)
      throw std::invalid_argument("resolvent bitstring length differs from tree height");
    if (subformula_at(f, unit.pos).kind() != FKind::Rec)
      throw std::invalid_argument("resolution key is not a !-unit: " + unit.str());
  }

  TruncUnitTree t;
  t.formula_ = f;
  t.height_ = height;
  t.resolution_ = r;

  std::vector<std::string> all_branches;
  {
    std::string s(static_cast<std::size_t>(height), '0');
    while (true) {
      all_branches.push_back(s);
      int i = static_cast<int>(s.size()) - 1;
      while (i >= 0 && s[static_cast<std::size_t>(i)] == '1') s[static_cast<std::size_t>(i--)] = '0';
      if (i < 0) break;
      s[static_cast<std::size_t>(i)] = '1';
    }
  }

  // Depth-first from the root so that children get contiguous index runs.
  struct Item {
    UnitRef unit;
    Formula sub;
    int parent;
  };
  std::vector<Item> stack{{UnitRef{}, f, -1}};
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    if (t.units_.size() >= node_budget) throw BudgetError("unit tree node budget exceeded");
    int idx = static_cast<int>(t.units_.size());
    t.units_.push_back(item.unit);
    t.kinds_.push_back(item.sub.kind());
    t.parents_.push_back(item.parent);
    t.children_.emplace_back();
    t.index_[item.unit] = idx;
    if (item.parent >= 0) t.children_[static_cast<std::size_t>(item.parent)].push_back(idx);
    if (is_literal(item.sub.kind())) {
      t.politerals_.push_back(idx);
      continue;
    }
    if (item.sub.kind() == FKind::Rec) t.rec_units_.push_back(idx);

    if (is_binary(item.sub.kind())) {
      for (int i = 1; i >= 0; --i) {
        UnitRef child = item.unit;
        child.pos.path.push_back(i);
        stack.push_back({std::move(child), item.sub.child(static_cast<std::size_t>(i)), idx});
      }
    } else {
      auto resolved = item.sub.kind() == FKind::Rec ? r.find(item.unit) : r.end();
      if (resolved != r.end()) {
        UnitRef child = item.unit;
        child.pos.path.push_back(0);
        child.branches.push_back(resolved->second);
        stack.push_back({std::move(child), item.sub.child(0), idx});
      } else {
        for (auto it = all_branches.rbegin(); it != all_branches.rend(); ++it) {
          UnitRef child = item.unit;
          child.pos.path.push_back(0);
          child.branches.push_back(*it);
          stack.push_back({std::move(child), item.sub.child(0), idx});
        }
      }
    }
  }

  // Children were pushed in reverse; restore left-to-right order.
  for (auto& kids : t.children_) std::sort(kids.begin(), kids.end());
  std::sort(t.politerals_.begin(), t.politerals_.end());
  std::sort(t.rec_units_.begin(), t.rec_units_.end());
  return t;
}

int TruncUnitTree::index_of(const UnitRef& u) const {
  auto it = index_.find(u);
  return it == index_.end() ? -1 : it->second;
}

Formula TruncUnitTree::origin(std::size_t idx) const {
  return subformula_at(formula_, units_[idx].pos);
}

bool TruncUnitTree::is_subunit(int a, int b) const {
  while (a >= 0) {
    if (a == b) return true;
    a = parents_[static_cast<std::size_t>(a)];
  }
  return false;
}

int TruncUnitTree::scs(int a, int b) const {
  auto depth = [this](int x) {
    int d = 0;
    while ((x = parents_[static_cast<std::size_t>(x)]) >= 0) ++d;
    return d;
  };
  int da = depth(a), db = depth(b);
  while (da > db) {
    a = parents_[static_cast<std::size_t>(a)];
    --da;
  }
  while (db > da) {
    b = parents_[static_cast<std::size_t>(b)];
    --db;
  }
  while (a != b) {
    a = parents_[static_cast<std::size_t>(a)];
    b = parents_[static_cast<std::size_t>(b)];
  }
  return a;
}

int TruncUnitTree::resolvent(int rec_idx) const {
  auto it = resolution_.find(units_[static_cast<std::size_t>(rec_idx)]);
  if (it == resolution_.end()) return -1;
  const auto& kids = children_[static_cast<std::size_t>(rec_idx)];
  return kids.size() == 1 ? kids.front() : -1;
}

bool TruncUnitTree::resolution_total() const {
  for (int rec : rec_units_)
    if (resolution_.find(units_[static_cast<std::size_t>(rec)]) == resolution_.end()) return false;
  return true;
}

Funit restrict_at(const Formula& f, const UnitRef& unit, const Run& run, uint64_t m_bound) {
  Run prefix;
  for (const Labmove& lm : run)
    if (lm.cycle <= m_bound) prefix.push_back(lm);
  int h = 0;
  for (const Funit& u : active_funits(f, prefix)) h = std::max(h, funit_height(u));

  Funit out{unit.pos, {}};
  if (unit.branches.empty()) return out;
  for (const std::string& b : unit.branches) {
    if (static_cast<int>(b.size()) < h)
      throw std::invalid_argument("restriction height exceeds unit branch length");
    out.bits.push_back(b.substr(0, static_cast<std::size_t>(h)));
  }
  return out;
}

bool incomparable(const UnitRef& a, const UnitRef& b) {
  return !is_subunit_ref(a, b) && !is_subunit_ref(b, a);
}

bool dm_incomparable(const Formula& f, const UnitRef& a, const UnitRef& b, const Run& run,
                     uint64_t m_bound) {
  std::string addr_a = address_str(funit_address(f, restrict_at(f, a, run, m_bound)));
  std::string addr_b = address_str(funit_address(f, restrict_at(f, b, run, m_bound)));
  auto prefix = [](const std::string& x, const std::string& y) {
    return x.size() <= y.size() && y.compare(0, x.size(), x) == 0;
  };
  return !prefix(addr_a, addr_b) && !prefix(addr_b, addr_a);
}

}  // namespace ccw
