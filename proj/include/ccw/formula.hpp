#pragma once

// Formulas of the {~, &, |, !, ?} fragment: literals, parallel conjunction
// and disjunction, branching recurrence (!) and corecurrence (?).  Trees are
// immutable and kept in literal normal form: negation occurs only on atoms.

#include <compare>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccw {

enum class FKind {
  Atom,     // P
  NegAtom,  // ~P
  And,      // E & G
  Or,       // E | G
  Rec,      // !E   (branching recurrence)
  CoRec,    // ?E   (branching corecurrence)
};

inline bool is_literal(FKind k) { return k == FKind::Atom || k == FKind::NegAtom; }
inline bool is_binary(FKind k) { return k == FKind::And || k == FKind::Or; }
inline bool is_modal(FKind k) { return k == FKind::Rec || k == FKind::CoRec; }

// Path of child indices from the root: 0/1 under &,|; 0 under !,?.
struct Position {
  std::vector<int> path;

  auto operator<=>(const Position&) const = default;

  bool is_prefix_of(const Position& other) const;
  std::size_t size() const { return path.size(); }

  // Digits concatenated, empty string for the root ("10" = right then left).
  std::string str() const;
  static Position parse(const std::string& text);
};

class Formula {
 public:
  Formula() = default;

  static Formula atom(std::string name);
  static Formula neg_atom(std::string name);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula rec(Formula inner);
  static Formula corec(Formula inner);

  bool valid() const { return node_ != nullptr; }
  FKind kind() const { return node()->kind; }
  const std::string& atom_name() const { return node()->atom; }
  std::size_t arity() const { return node()->kids.size(); }
  const Formula& child(std::size_t i) const { return node()->kids.at(i); }

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node {
    FKind kind;
    std::string atom;
    std::vector<Formula> kids;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node* node() const;

  std::shared_ptr<const Node> node_;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), offset(pos) {}
  std::size_t offset;
};

// Parses the ASCII/Unicode surface syntax and normalizes general negation to
// literal normal form (DeMorgan plus ~!E -> ?~E, ~?E -> !~E).
Formula parse_formula(const std::string& text);

// Inverse of parse_formula up to structural equality.
std::string render(const Formula& f);

// The occurrence at p; throws std::out_of_range on an invalid path.
Formula subformula_at(const Formula& f, const Position& p);

// Positions of all literal occurrences, in left-to-right order.
std::vector<Position> politerals(const Formula& f);

// Number of !/? nodes strictly above p.
int modal_depth(const Formula& f, const Position& p);

// Literal-normal-form negation of f.
Formula negate(const Formula& f);

}  // namespace ccw
