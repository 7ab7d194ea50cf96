#include "ccw/formula.hpp"

#include <cctype>

namespace ccw {

bool Position::is_prefix_of(const Position& other) const {
  if (path.size() > other.path.size()) return false;
  for (std::size_t i = 0; i < path.size(); ++i)
    if (path[i] != other.path[i]) return false;
  return true;
}

std::string Position::str() const {
  std::string s;
  for (int i : path) s += static_cast<char>('0' + i);
  return s;
}

Position Position::parse(const std::string& text) {
  Position p;
  for (char c : text) {
    if (c != '0' && c != '1') throw ParseError("bad position digit", 0);
    p.path.push_back(c - '0');
  }
  return p;
}

const Formula::Node* Formula::node() const {
  if (!node_) throw std::logic_error("empty formula");
  return node_.get();
}

Formula Formula::atom(std::string name) {
  return Formula(std::make_shared<const Node>(Node{FKind::Atom, std::move(name), {}}));
}
Formula Formula::neg_atom(std::string name) {
  return Formula(std::make_shared<const Node>(Node{FKind::NegAtom, std::move(name), {}}));
}
Formula Formula::conj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{FKind::And, {}, {std::move(lhs), std::move(rhs)}}));
}
Formula Formula::disj(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{FKind::Or, {}, {std::move(lhs), std::move(rhs)}}));
}
Formula Formula::rec(Formula inner) {
  return Formula(std::make_shared<const Node>(Node{FKind::Rec, {}, {std::move(inner)}}));
}
Formula Formula::corec(Formula inner) {
  return Formula(std::make_shared<const Node>(Node{FKind::CoRec, {}, {std::move(inner)}}));
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind || a.atom != b.atom || a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!(a.kids[i] == b.kids[i])) return false;
  return true;
}

namespace {

// Recursive-descent parser; precedence low to high: |, &, prefix ~ ! ?.
class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Formula run() {
    skip_ws();
    if (eof()) throw ParseError("empty input", 0);
    Formula f = parse_or(false);
    skip_ws();
    if (!eof()) throw ParseError("trailing input", pos_);
    return f;
  }

 private:
  Formula parse_or(bool neg) {
    // Under negation, | parses as the dual of &.
    Formula lhs = parse_and(neg);
    while (true) {
      skip_ws();
      if (!accept_or()) return lhs;
      Formula rhs = parse_and(neg);
      lhs = neg ? Formula::conj(lhs, rhs) : Formula::disj(lhs, rhs);
    }
  }

  Formula parse_and(bool neg) {
    Formula lhs = parse_unary(neg);
    while (true) {
      skip_ws();
      if (!accept_and()) return lhs;
      Formula rhs = parse_unary(neg);
      lhs = neg ? Formula::disj(lhs, rhs) : Formula::conj(lhs, rhs);
    }
  }

  Formula parse_unary(bool neg) {
    skip_ws();
    if (eof()) throw ParseError("unexpected end of input", pos_);
    if (accept_not()) return parse_unary(!neg);
    if (accept('!')) {
      Formula inner = parse_unary(neg);
      return neg ? Formula::corec(inner) : Formula::rec(inner);
    }
    if (accept('?')) {
      Formula inner = parse_unary(neg);
      return neg ? Formula::rec(inner) : Formula::corec(inner);
    }
    if (accept('(')) {
      Formula inner = parse_or(neg);
      skip_ws();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    return parse_atom(neg);
  }

  Formula parse_atom(bool neg) {
    if (eof() || !std::isupper(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("expected an atom", pos_);
    std::size_t start = pos_;
    ++pos_;
    while (!eof()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
        ++pos_;
      else
        break;
    }
    std::string name = text_.substr(start, pos_ - start);
    return neg ? Formula::neg_atom(name) : Formula::atom(name);
  }

  bool eof() const { return pos_ >= text_.size(); }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    if (!eof() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_utf8(const char* seq) {
    std::size_t n = std::char_traits<char>::length(seq);
    if (text_.compare(pos_, n, seq) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }
  bool accept_not() { return accept('~') || accept_utf8("¬"); }
  bool accept_and() { return accept('&') || accept_utf8("∧"); }
  bool accept_or() { return accept('|') || accept_utf8("∨"); }

  const std::string& text_;
  std::size_t pos_ = 0;
};

int precedence(FKind k) {
  switch (k) {
    case FKind::Or: return 0;
    case FKind::And: return 1;
    case FKind::Rec:
    case FKind::CoRec: return 2;
    default: return 3;
  }
}

void render_to(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FKind::Atom:
      out += f.atom_name();
      return;
    case FKind::NegAtom:
      out += '~';
      out += f.atom_name();
      return;
    case FKind::And:
    case FKind::Or: {
      const char* op = f.kind() == FKind::And ? " & " : " | ";
      int prec = precedence(f.kind());
      const Formula& lhs = f.child(0);
      const Formula& rhs = f.child(1);
      // Left-nested same-precedence chains print without parentheses;
      // the right operand is parenthesized at equal precedence so that
      // parse(render(f)) reproduces the exact tree.
      bool lp = precedence(lhs.kind()) < prec;
      bool rp = precedence(rhs.kind()) <= prec;
      if (lp) out += '(';
      render_to(lhs, out);
      if (lp) out += ')';
      out += op;
      if (rp) out += '(';
      render_to(rhs, out);
      if (rp) out += ')';
      return;
    }
    case FKind::Rec:
    case FKind::CoRec: {
      out += f.kind() == FKind::Rec ? '!' : '?';
      const Formula& inner = f.child(0);
      bool p = precedence(inner.kind()) < precedence(f.kind());
      if (p) out += '(';
      render_to(inner, out);
      if (p) out += ')';
      return;
    }
  }
}

void collect_politerals(const Formula& f, Position& cur, std::vector<Position>& out) {
  if (is_literal(f.kind())) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) {
    cur.path.push_back(static_cast<int>(i));
    collect_politerals(f.child(i), cur, out);
    cur.path.pop_back();
  }
}

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).run(); }

std::string render(const Formula& f) {
  std::string out;
  render_to(f, out);
  return out;
}

Formula subformula_at(const Formula& f, const Position& p) {
  Formula cur = f;
  for (int i : p.path) {
    if (i < 0 || static_cast<std::size_t>(i) >= cur.arity())
      throw std::out_of_range("invalid path into formula");
    cur = cur.child(static_cast<std::size_t>(i));
  }
  return cur;
}

std::vector<Position> politerals(const Formula& f) {
  std::vector<Position> out;
  Position cur;
  collect_politerals(f, cur, out);
  return out;
}

int modal_depth(const Formula& f, const Position& p) {
  Formula cur = f;
  int depth = 0;
  for (int i : p.path) {
    if (is_modal(cur.kind())) ++depth;
    if (i < 0 || static_cast<std::size_t>(i) >= cur.arity())
      throw std::out_of_range("invalid path into formula");
    cur = cur.child(static_cast<std::size_t>(i));
  }
  return depth;
}

Formula negate(const Formula& f) {
  switch (f.kind()) {
    case FKind::Atom: return Formula::neg_atom(f.atom_name());
    case FKind::NegAtom: return Formula::atom(f.atom_name());
    case FKind::And: return Formula::disj(negate(f.child(0)), negate(f.child(1)));
    case FKind::Or: return Formula::conj(negate(f.child(0)), negate(f.child(1)));
    case FKind::Rec: return Formula::corec(negate(f.child(0)));
    case FKind::CoRec: return Formula::rec(negate(f.child(0)));
  }
  throw std::logic_error("bad formula kind");
}

}  // namespace ccw
