#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace specbench {

/// Atomic proposition name, `[a-z][a-z0-9_]*`.
class Proposition {
 public:
  explicit Proposition(std::string name);

  const std::string& name() const noexcept { return name_; }

  auto operator<=>(const Proposition&) const = default;

 private:
  std::string name_;
};

bool is_valid_proposition_name(std::string_view name) noexcept;

/// The propositions true at one time step.
using LabelSet = std::set<Proposition>;

LabelSet make_labels(std::initializer_list<std::string_view> names);
std::string to_string(const LabelSet& labels);

/// Ultimately periodic word prefix · loop^ω.
struct LassoTrace {
  std::vector<LabelSet> prefix;
  std::vector<LabelSet> loop;

  std::size_t positions() const noexcept { return prefix.size() + loop.size(); }
  std::size_t successor(std::size_t pos) const noexcept {
    return pos + 1 < positions() ? pos + 1 : prefix.size();
  }
  const LabelSet& at(std::size_t pos) const {
    return pos < prefix.size() ? prefix[pos] : loop[pos - prefix.size()];
  }
};

enum class Op : std::uint8_t {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Next,
  Until,
  Eventually,
  Always,
  Implies,
};

namespace detail {
struct Node;
}

/// Immutable, hash-consed LTL formula. Two formulas are structurally equal
/// iff they share the same node, so `==` is a pointer comparison.
class Formula {
 public:
  Formula();  // true

  static Formula tt();
  static Formula ff();
  static Formula atom(std::string_view name);
  static Formula atom(const Proposition& p) { return atom(p.name()); }

  Op op() const noexcept;
  /// Atom name; empty for other nodes.
  const std::string& name() const noexcept;
  /// Operand of unary nodes, left operand of binary nodes.
  Formula lhs() const;
  Formula rhs() const;

  bool is_true() const noexcept { return op() == Op::True; }
  bool is_false() const noexcept { return op() == Op::False; }
  bool is_atom() const noexcept { return op() == Op::Atom; }
  bool is_unary() const noexcept;
  bool is_binary() const noexcept;
  /// No temporal operator below this node.
  bool is_propositional() const noexcept;

  /// Node count.
  std::size_t size() const noexcept;
  /// Structural hash, stable across runs and machines.
  std::uint64_t hash() const noexcept;

  const void* identity() const noexcept { return node_; }

  friend bool operator==(Formula a, Formula b) noexcept { return a.node_ == b.node_; }

 private:
  explicit Formula(const detail::Node* node) : node_(node) {}
  friend Formula make_node(Op, std::string_view, Formula, Formula);

  const detail::Node* node_;
};

Formula make_not(Formula f);
Formula make_and(Formula a, Formula b);
Formula make_or(Formula a, Formula b);
Formula make_next(Formula f);
Formula make_until(Formula a, Formula b);
Formula make_eventually(Formula f);
Formula make_always(Formula f);
Formula make_implies(Formula a, Formula b);

/// Right-nested conjunction / disjunction; empty list gives the unit.
Formula make_and(const std::vector<Formula>& operands);
Formula make_or(const std::vector<Formula>& operands);

/// Total order used wherever operands or formula sets are sorted: by
/// structural hash, ties broken structurally. Independent of allocation.
int compare(Formula a, Formula b);

struct FormulaLess {
  bool operator()(Formula a, Formula b) const { return compare(a, b) < 0; }
};

std::set<Proposition> alphabet(Formula f);

/// Rebuilds `f` with every atom renamed through `rename`.
Formula rename_atoms(Formula f, const std::function<std::string(const std::string&)>& rename);

}  // namespace specbench

template <>
struct std::hash<specbench::Formula> {
  std::size_t operator()(specbench::Formula f) const noexcept {
    return static_cast<std::size_t>(f.hash());
  }
};
