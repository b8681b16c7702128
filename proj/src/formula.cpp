#include "specbench/formula.hpp"

#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace specbench {

namespace detail {

struct Node {
  Op op;
  std::string name;
  const Node* lhs;
  const Node* rhs;
  std::uint64_t hash;
  std::size_t size;
  bool propositional;
};

}  // namespace detail

namespace {

using detail::Node;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= h >> 31;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 29;
  return h;
}

struct Key {
  Op op;
  std::string name;
  const Node* lhs;
  const Node* rhs;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    auto h = mix(static_cast<std::uint64_t>(k.op), fnv1a(k.name));
    h = mix(h, reinterpret_cast<std::uintptr_t>(k.lhs));
    h = mix(h, reinterpret_cast<std::uintptr_t>(k.rhs));
    return static_cast<std::size_t>(h);
  }
};

// Nodes live for the lifetime of the process; formulas are small and heavily
// shared, so the table only grows.
class NodeTable {
 public:
  const Node* intern(Op op, std::string_view name, const Node* lhs, const Node* rhs) {
    Key key{op, std::string(name), lhs, rhs};
    std::lock_guard lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) return it->second;

    std::uint64_t h = mix(static_cast<std::uint64_t>(op) + 1, fnv1a(name));
    std::size_t size = 1;
    bool propositional = op != Op::Next && op != Op::Until && op != Op::Eventually &&
                         op != Op::Always;
    if (lhs) {
      h = mix(h, lhs->hash);
      size += lhs->size;
      propositional = propositional && lhs->propositional;
    }
    if (rhs) {
      h = mix(h, rhs->hash);
      size += rhs->size;
      propositional = propositional && rhs->propositional;
    }
    const Node* node = &nodes_.emplace_back(
        Node{op, std::string(name), lhs, rhs, h, size, propositional});
    table_.emplace(std::move(key), node);
    return node;
  }

  static NodeTable& instance() {
    static NodeTable table;
    return table;
  }

 private:
  std::mutex mutex_;
  std::deque<Node> nodes_;
  std::unordered_map<Key, const Node*, KeyHash> table_;
};

const Node* node_of(Formula f) { return static_cast<const Node*>(f.identity()); }

int structural_compare(const Node* a, const Node* b) {
  if (a == b) return 0;
  if (a->hash != b->hash) return a->hash < b->hash ? -1 : 1;
  if (a->op != b->op) return a->op < b->op ? -1 : 1;
  if (int c = a->name.compare(b->name); c != 0) return c < 0 ? -1 : 1;
  if (a->lhs != b->lhs) {
    if (!a->lhs || !b->lhs) return a->lhs ? 1 : -1;
    if (int c = structural_compare(a->lhs, b->lhs); c != 0) return c;
  }
  if (a->rhs != b->rhs) {
    if (!a->rhs || !b->rhs) return a->rhs ? 1 : -1;
    if (int c = structural_compare(a->rhs, b->rhs); c != 0) return c;
  }
  return 0;
}

}  // namespace

Proposition::Proposition(std::string name) : name_(std::move(name)) {
  if (!is_valid_proposition_name(name_)) {
    throw std::invalid_argument("invalid proposition name '" + name_ + "'");
  }
}

bool is_valid_proposition_name(std::string_view name) noexcept {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

LabelSet make_labels(std::initializer_list<std::string_view> names) {
  LabelSet out;
  for (auto n : names) out.emplace(std::string(n));
  return out;
}

std::string to_string(const LabelSet& labels) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : labels) {
    if (!first) out += ',';
    out += p.name();
    first = false;
  }
  return out + "}";
}

Formula make_node(Op op, std::string_view name, Formula lhs, Formula rhs) {
  const Node* l = nullptr;
  const Node* r = nullptr;
  switch (op) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      break;
    case Op::Not:
    case Op::Next:
    case Op::Eventually:
    case Op::Always:
      l = node_of(lhs);
      break;
    default:
      l = node_of(lhs);
      r = node_of(rhs);
  }
  return Formula(NodeTable::instance().intern(op, name, l, r));
}

Formula::Formula() : node_(node_of(tt())) {}

Formula Formula::tt() {
  static const Node* node = NodeTable::instance().intern(Op::True, "", nullptr, nullptr);
  return Formula(node);
}

Formula Formula::ff() {
  static const Node* node = NodeTable::instance().intern(Op::False, "", nullptr, nullptr);
  return Formula(node);
}

Formula Formula::atom(std::string_view name) {
  if (!is_valid_proposition_name(name)) {
    throw std::invalid_argument("invalid proposition name '" + std::string(name) + "'");
  }
  return Formula(NodeTable::instance().intern(Op::Atom, name, nullptr, nullptr));
}

Op Formula::op() const noexcept { return node_->op; }
const std::string& Formula::name() const noexcept { return node_->name; }

Formula Formula::lhs() const {
  if (!node_->lhs) throw std::logic_error("formula has no operand");
  return Formula(node_->lhs);
}

Formula Formula::rhs() const {
  if (!node_->rhs) throw std::logic_error("formula has no right operand");
  return Formula(node_->rhs);
}

bool Formula::is_unary() const noexcept {
  auto o = op();
  return o == Op::Not || o == Op::Next || o == Op::Eventually || o == Op::Always;
}

bool Formula::is_binary() const noexcept {
  auto o = op();
  return o == Op::And || o == Op::Or || o == Op::Until || o == Op::Implies;
}

bool Formula::is_propositional() const noexcept { return node_->propositional; }
std::size_t Formula::size() const noexcept { return node_->size; }
std::uint64_t Formula::hash() const noexcept { return node_->hash; }

Formula make_not(Formula f) { return make_node(Op::Not, "", f, {}); }
Formula make_and(Formula a, Formula b) { return make_node(Op::And, "", a, b); }
Formula make_or(Formula a, Formula b) { return make_node(Op::Or, "", a, b); }
Formula make_next(Formula f) { return make_node(Op::Next, "", f, {}); }
Formula make_until(Formula a, Formula b) { return make_node(Op::Until, "", a, b); }
Formula make_eventually(Formula f) { return make_node(Op::Eventually, "", f, {}); }
Formula make_always(Formula f) { return make_node(Op::Always, "", f, {}); }
Formula make_implies(Formula a, Formula b) { return make_node(Op::Implies, "", a, b); }

Formula make_and(const std::vector<Formula>& operands) {
  if (operands.empty()) return Formula::tt();
  Formula out = operands.back();
  for (auto it = operands.rbegin() + 1; it != operands.rend(); ++it) out = make_and(*it, out);
  return out;
}

Formula make_or(const std::vector<Formula>& operands) {
  if (operands.empty()) return Formula::ff();
  Formula out = operands.back();
  for (auto it = operands.rbegin() + 1; it != operands.rend(); ++it) out = make_or(*it, out);
  return out;
}

int compare(Formula a, Formula b) { return structural_compare(node_of(a), node_of(b)); }

std::set<Proposition> alphabet(Formula f) {
  std::set<Proposition> out;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (g.is_atom()) {
      out.emplace(g.name());
    } else if (g.is_unary()) {
      stack.push_back(g.lhs());
    } else if (g.is_binary()) {
      stack.push_back(g.lhs());
      stack.push_back(g.rhs());
    }
  }
  return out;
}

Formula rename_atoms(Formula f, const std::function<std::string(const std::string&)>& rename) {
  if (f.is_atom()) return Formula::atom(rename(f.name()));
  if (f.is_unary()) return make_node(f.op(), "", rename_atoms(f.lhs(), rename), {});
  if (f.is_binary()) {
    return make_node(f.op(), "", rename_atoms(f.lhs(), rename), rename_atoms(f.rhs(), rename));
  }
  return f;
}

}  // namespace specbench
