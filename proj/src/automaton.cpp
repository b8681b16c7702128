#include "specbench/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <unordered_map>

#include "scc.hpp"
#include "specbench/semantics.hpp"

namespace specbench {

namespace {

bool obligations_less(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), FormulaLess{});
}

struct StateKey {
  std::vector<Formula> obligations;
  std::uint32_t level;
};

struct StateKeyLess {
  bool operator()(const StateKey& a, const StateKey& b) const {
    if (a.level != b.level) return a.level < b.level;
    return obligations_less(a.obligations, b.obligations);
  }
};

struct ObligationsLess {
  bool operator()(const std::vector<Formula>& a, const std::vector<Formula>& b) const {
    return obligations_less(a, b);
  }
};

void add_conjuncts(Formula f, std::vector<Formula>& out) {
  if (f.op() == Op::And) {
    add_conjuncts(f.lhs(), out);
    add_conjuncts(f.rhs(), out);
  } else if (!f.is_true()) {
    out.push_back(f);
  }
}

std::vector<Formula> canonical_set(std::vector<Formula> v) {
  std::sort(v.begin(), v.end(), FormulaLess{});
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool subset_sorted(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end(), FormulaLess{});
}

/// One way of discharging a state's obligations for the current step.
struct Cover {
  Guard guard;
  std::vector<Formula> next;  // canonical set
  std::uint64_t pending = 0;  // until indices postponed on this step
};

class Expander {
 public:
  Expander(const std::vector<Proposition>& alphabet, const std::vector<Formula>& untils)
      : alphabet_(alphabet), untils_(untils) {}

  std::vector<Cover> expand(const std::vector<Formula>& obligations) {
    std::vector<Cover> raw;
    Partial p;
    p.todo = obligations;
    run(std::move(p), raw);
    for (auto& c : raw) c.next = canonical_set(std::move(c.next));
    return prune(std::move(raw));
  }

 private:
  struct Partial {
    std::vector<Formula> todo;
    std::vector<Formula> done;
    Guard guard;
    std::vector<Formula> next;
    std::uint64_t pending = 0;
  };

  std::uint64_t bit_of(const std::string& name) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), Proposition(name));
    return std::uint64_t{1} << static_cast<unsigned>(it - alphabet_.begin());
  }

  std::uint64_t until_bit(Formula f) const {
    auto it = std::find(untils_.begin(), untils_.end(), f);
    return std::uint64_t{1} << static_cast<unsigned>(it - untils_.begin());
  }

  void run(Partial p, std::vector<Cover>& out) {
    while (!p.todo.empty()) {
      Formula f = p.todo.back();
      p.todo.pop_back();
      if (std::find(p.done.begin(), p.done.end(), f) != p.done.end()) continue;
      p.done.push_back(f);
      switch (f.op()) {
        case Op::True:
          break;
        case Op::False:
          return;
        case Op::Atom: {
          auto b = bit_of(f.name());
          if (p.guard.neg & b) return;
          p.guard.pos |= b;
          break;
        }
        case Op::Not: {
          auto b = bit_of(f.lhs().name());
          if (p.guard.pos & b) return;
          p.guard.neg |= b;
          break;
        }
        case Op::And:
          p.todo.push_back(f.rhs());
          p.todo.push_back(f.lhs());
          break;
        case Op::Or: {
          Partial alt = p;
          alt.todo.push_back(f.rhs());
          p.todo.push_back(f.lhs());
          run(std::move(p), out);
          p = std::move(alt);
          break;
        }
        case Op::Next:
          add_conjuncts(f.lhs(), p.next);
          break;
        case Op::Until:
        case Op::Eventually: {
          Formula goal = f.op() == Op::Until ? f.rhs() : f.lhs();
          Partial fulfil = p;
          fulfil.todo.push_back(goal);
          run(std::move(fulfil), out);
          if (f.op() == Op::Until) p.todo.push_back(f.lhs());
          // Postponing is only allowed when the goal does not hold now; for a
          // propositional goal this is a plain guard constraint.
          if (goal.is_propositional()) p.todo.push_back(nnf(make_not(goal)));
          p.next.push_back(f);
          p.pending |= until_bit(f);
          break;
        }
        case Op::Always:
          p.todo.push_back(f.lhs());
          p.next.push_back(f);
          break;
        case Op::Implies:
          throw std::logic_error("expander requires NNF input");
      }
    }
    out.push_back(Cover{p.guard, std::move(p.next), p.pending});
  }

  // Drops covers that another cover dominates: weaker guard, fewer
  // obligations, fewer postponed untils.
  static std::vector<Cover> prune(std::vector<Cover> covers) {
    auto dominates = [](const Cover& a, const Cover& b) {
      return (a.guard.pos & ~b.guard.pos) == 0 && (a.guard.neg & ~b.guard.neg) == 0 &&
             (a.pending & ~b.pending) == 0 && subset_sorted(a.next, b.next);
    };
    std::vector<Cover> kept;
    for (std::size_t i = 0; i < covers.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < covers.size() && !dominated; ++j) {
        if (i == j || !dominates(covers[j], covers[i])) continue;
        // Identical covers: keep the first occurrence only.
        bool equal = dominates(covers[i], covers[j]);
        dominated = !equal || j < i;
      }
      if (!dominated) kept.push_back(covers[i]);
    }
    return kept;
  }

  const std::vector<Proposition>& alphabet_;
  const std::vector<Formula>& untils_;
};

void collect_untils(Formula f, std::vector<Formula>& out) {
  if (f.op() == Op::Until || f.op() == Op::Eventually) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  if (f.is_unary()) {
    collect_untils(f.lhs(), out);
  } else if (f.is_binary()) {
    collect_untils(f.lhs(), out);
    collect_untils(f.rhs(), out);
  }
}

detail::Adjacency adjacency_of(const BuchiAutomaton& a) {
  detail::Adjacency succ(a.num_states());
  for (const auto& e : a.edges()) {
    auto& out = succ[e.source];
    if (out.empty() || out.back() != e.target) out.push_back(e.target);
  }
  return succ;
}

// States on a cycle through an accepting state (accepting states in a
// non-trivial SCC).
std::vector<char> accepting_cycle_states(const BuchiAutomaton& a, const detail::Adjacency& succ) {
  auto scc = detail::tarjan(succ);
  auto cyclic = detail::nontrivial_components(succ, scc);
  std::vector<char> out(a.num_states(), 0);
  for (StateId s = 0; s < a.num_states(); ++s) {
    out[s] = a.is_accepting(s) && cyclic[scc.component[s]];
  }
  return out;
}

std::vector<char> live_mask(const BuchiAutomaton& a) {
  auto succ = adjacency_of(a);
  auto scc = detail::tarjan(succ);
  auto cyclic = detail::nontrivial_components(succ, scc);
  std::vector<char> good_component(scc.count, 0);
  for (StateId s = 0; s < a.num_states(); ++s) {
    if (a.is_accepting(s) && cyclic[scc.component[s]]) good_component[scc.component[s]] = 1;
  }
  // Components come out in reverse topological order: successors first.
  std::vector<std::vector<StateId>> members(scc.count);
  for (StateId s = 0; s < a.num_states(); ++s) members[scc.component[s]].push_back(s);
  std::vector<char> live_component(scc.count, 0);
  for (std::uint32_t c = 0; c < scc.count; ++c) {
    bool live = good_component[c];
    for (StateId s : members[c]) {
      for (auto t : succ[s]) live = live || live_component[scc.component[t]];
    }
    live_component[c] = live;
  }
  std::vector<char> out(a.num_states(), 0);
  for (StateId s = 0; s < a.num_states(); ++s) out[s] = live_component[scc.component[s]];
  return out;
}

}  // namespace

Formula AutomatonState::residual() const { return make_and(obligations); }

std::span<const GuardedEdge> BuchiAutomaton::out_edges(StateId s) const {
  return std::span<const GuardedEdge>(edges_).subspan(edge_begin_.at(s),
                                                       edge_begin_.at(s + 1) - edge_begin_.at(s));
}

std::vector<StateId> BuchiAutomaton::accepting_states() const {
  std::vector<StateId> out;
  for (StateId s = 0; s < states_.size(); ++s) {
    if (states_[s].accepting) out.push_back(s);
  }
  return out;
}

std::vector<StateId> BuchiAutomaton::dead_states() const {
  std::vector<StateId> out;
  for (StateId s = 0; s < states_.size(); ++s) {
    if (states_[s].dead) out.push_back(s);
  }
  return out;
}

std::vector<StateId> BuchiAutomaton::sat_sink_states() const {
  std::vector<StateId> out;
  for (StateId s = 0; s < states_.size(); ++s) {
    if (states_[s].sat_sink) out.push_back(s);
  }
  return out;
}

bool BuchiAutomaton::language_empty() const {
  return std::all_of(initial_.begin(), initial_.end(), [&](StateId s) { return states_[s].dead; });
}

std::uint64_t BuchiAutomaton::mask_of(const LabelSet& labels) const {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (labels.contains(alphabet_[i])) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

LabelSet BuchiAutomaton::labels_of(std::uint64_t mask) const {
  LabelSet out;
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    if (mask & (std::uint64_t{1} << i)) out.insert(alphabet_[i]);
  }
  return out;
}

std::string BuchiAutomaton::guard_text(const Guard& g) const {
  std::string out;
  for (std::size_t i = 0; i < alphabet_.size(); ++i) {
    auto bit = std::uint64_t{1} << i;
    if (!(g.pos & bit) && !(g.neg & bit)) continue;
    if (!out.empty()) out += ' ';
    if (g.neg & bit) out += '!';
    out += alphabet_[i].name();
  }
  return out.empty() ? "true" : out;
}

CompileBudgetExceeded::CompileBudgetExceeded(std::size_t cap, const std::string& what)
    : std::runtime_error(what), cap_(cap) {}

BuchiAutomaton compile_nnf(Formula f, std::size_t state_cap) {
  BuchiAutomaton a;
  a.formula_ = f;
  auto props = alphabet(f);
  a.alphabet_.assign(props.begin(), props.end());
  if (a.alphabet_.size() > 64) {
    throw CompileBudgetExceeded(state_cap, "alphabet larger than 64 propositions");
  }

  std::vector<Formula> untils;
  collect_untils(f, untils);
  if (untils.size() > 64) {
    throw CompileBudgetExceeded(state_cap, "more than 64 until/eventually subformulas");
  }
  const auto k = static_cast<std::uint32_t>(untils.size());
  a.acceptance_sets_ = k;

  Expander expander(a.alphabet_, untils);
  std::map<std::vector<Formula>, std::vector<Cover>, ObligationsLess> cover_cache;
  std::map<StateKey, StateId, StateKeyLess> index;
  std::deque<StateId> queue;

  auto intern = [&](std::vector<Formula> obligations, std::uint32_t level) {
    StateKey key{std::move(obligations), level};
    if (auto it = index.find(key); it != index.end()) return it->second;
    if (a.states_.size() >= state_cap) {
      throw CompileBudgetExceeded(state_cap, "automaton exceeds the state cap of " +
                                                 std::to_string(state_cap) + " states");
    }
    auto id = static_cast<StateId>(a.states_.size());
    AutomatonState st;
    st.obligations = key.obligations;
    st.level = level;
    st.accepting = k == 0 || level == k;
    st.sat_sink = st.obligations.empty();
    a.states_.push_back(std::move(st));
    index.emplace(std::move(key), id);
    queue.push_back(id);
    return id;
  };

  std::vector<Formula> init;
  add_conjuncts(f, init);
  a.initial_.push_back(intern(canonical_set(std::move(init)), 0));

  std::vector<GuardedEdge> edges;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    std::vector<Formula> obligations = a.states_[s].obligations;
    const std::uint32_t level = a.states_[s].level;
    auto it = cover_cache.find(obligations);
    if (it == cover_cache.end()) {
      it = cover_cache.emplace(obligations, expander.expand(obligations)).first;
    }
    const std::vector<Cover> covers = it->second;
    for (const auto& c : covers) {
      // Advance through every acceptance set this step satisfies, starting
      // over after a completed round.
      std::uint32_t j = level == k ? 0 : level;
      while (j < k && !(c.pending & (std::uint64_t{1} << j))) ++j;
      StateId t = intern(c.next, j);
      edges.push_back({s, t, c.guard});
    }
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  a.edges_ = std::move(edges);
  a.edge_begin_.assign(a.states_.size() + 1, 0);
  for (const auto& e : a.edges_) ++a.edge_begin_[e.source + 1];
  for (std::size_t i = 1; i < a.edge_begin_.size(); ++i) a.edge_begin_[i] += a.edge_begin_[i - 1];

  auto live = live_mask(a);
  for (StateId s = 0; s < a.states_.size(); ++s) a.states_[s].dead = !live[s];
  return a;
}

BuchiAutomaton compile(Formula f, const CompileOptions& options) {
  return compile_nnf(nnf(f), options.state_cap);
}

bool accepts(const BuchiAutomaton& a, const LassoTrace& w) {
  if (w.loop.empty()) throw std::invalid_argument("lasso loop must be non-empty");
  const std::size_t positions = w.positions();
  const std::size_t n = a.num_states();
  std::vector<std::uint64_t> masks(positions);
  for (std::size_t p = 0; p < positions; ++p) masks[p] = a.mask_of(w.at(p));

  // Product node id = position * n + state.
  detail::Adjacency succ(positions * n);
  for (std::size_t p = 0; p < positions; ++p) {
    const auto q = w.successor(p);
    for (StateId s = 0; s < n; ++s) {
      auto& out = succ[p * n + s];
      for (const auto& e : a.out_edges(s)) {
        if (e.guard.satisfied_by(masks[p])) {
          auto node = static_cast<std::uint32_t>(q * n + e.target);
          if (out.empty() || out.back() != node) out.push_back(node);
        }
      }
    }
  }
  std::vector<std::uint32_t> roots(a.initial().begin(), a.initial().end());
  auto scc = detail::tarjan(succ, roots);
  auto cyclic = detail::nontrivial_components(succ, scc);
  for (std::size_t v = 0; v < succ.size(); ++v) {
    auto c = scc.component[v];
    if (c == UINT32_MAX || !cyclic[c]) continue;
    if (a.is_accepting(static_cast<StateId>(v % n))) return true;
  }
  return false;
}

std::vector<StateId> nonempty_states(const BuchiAutomaton& a) {
  auto live = live_mask(a);
  std::vector<StateId> out;
  for (StateId s = 0; s < a.num_states(); ++s) {
    if (live[s]) out.push_back(s);
  }
  return out;
}

std::string_view to_string(MonitorStatus s) noexcept {
  switch (s) {
    case MonitorStatus::Open: return "open";
    case MonitorStatus::Violated: return "violated";
    case MonitorStatus::SatisfiedSink: return "satisfied";
  }
  return "open";
}

Frontier initial_frontier(const BuchiAutomaton& a) {
  Frontier out;
  for (StateId s : a.initial()) {
    if (!a.is_dead(s)) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

MonitorStep step_monitor(const BuchiAutomaton& a, const Frontier& frontier, const LabelSet& sigma) {
  MonitorStep step;
  const auto mask = a.mask_of(sigma);
  for (StateId s : frontier) {
    for (const auto& e : a.out_edges(s)) {
      if (e.guard.satisfied_by(mask) && !a.is_dead(e.target)) step.frontier.push_back(e.target);
    }
  }
  std::sort(step.frontier.begin(), step.frontier.end());
  step.frontier.erase(std::unique(step.frontier.begin(), step.frontier.end()), step.frontier.end());
  if (step.frontier.empty()) {
    step.status = MonitorStatus::Violated;
    return step;
  }
  for (StateId s : step.frontier) {
    step.accepting_hit = step.accepting_hit || a.is_accepting(s);
    if (a.is_sat_sink(s)) step.status = MonitorStatus::SatisfiedSink;
  }
  return step;
}

// ---------------------------------------------------------------- subgoals

AssignmentDomain AssignmentDomain::all() { return {}; }

AssignmentDomain AssignmentDomain::exclusive() {
  AssignmentDomain d;
  d.kind_ = Kind::Exclusive;
  return d;
}

AssignmentDomain AssignmentDomain::explicit_sets(std::vector<LabelSet> assignments) {
  AssignmentDomain d;
  d.kind_ = Kind::Explicit;
  d.sets_ = std::move(assignments);
  return d;
}

std::vector<std::uint64_t> AssignmentDomain::masks(const BuchiAutomaton& a) const {
  const std::size_t n = a.alphabet().size();
  std::vector<std::uint64_t> out;
  switch (kind_) {
    case Kind::All:
      if (n > 20) throw std::invalid_argument("full assignment domain over more than 20 atoms");
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) out.push_back(m);
      return out;
    case Kind::Exclusive:
      out.push_back(0);
      for (std::size_t i = 0; i < n; ++i) out.push_back(std::uint64_t{1} << i);
      return out;
    case Kind::Explicit:
      for (const auto& s : sets_) out.push_back(a.mask_of(s));
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
  }
  return out;
}

namespace {

LabelSet project(const LabelSet& labels, const std::set<Proposition>& alphabet) {
  LabelSet out;
  for (const auto& p : labels) {
    if (alphabet.contains(p)) out.insert(p);
  }
  return out;
}

bool contains_set(const std::vector<LabelSet>& sets, const LabelSet& s) {
  return std::find(sets.begin(), sets.end(), s) != sets.end();
}

class SubgoalBuilder {
 public:
  SubgoalBuilder(const BuchiAutomaton& a, const AssignmentDomain& domain)
      : a_(a),
        masks_(domain.masks(a)),
        alphabet_(std::make_shared<const std::set<Proposition>>(a.alphabet().begin(),
                                                                a.alphabet().end())) {
    auto succ = adjacency_of(a);
    target_ = accepting_cycle_states(a, succ);
    for (StateId s = 0; s < a.num_states(); ++s) target_[s] = target_[s] && !a.is_dead(s);
  }

  bool is_target(StateId s) const { return target_[s] != 0; }

  /// Live successors other than `s` reachable under some domain assignment.
  std::vector<StateId> hops(StateId s) const {
    std::vector<StateId> out;
    for (const auto& e : a_.out_edges(s)) {
      if (e.target == s || a_.is_dead(e.target)) continue;
      if (!out.empty() && out.back() == e.target) continue;
      bool usable = std::any_of(masks_.begin(), masks_.end(),
                                [&](std::uint64_t m) { return e.guard.satisfied_by(m); });
      if (usable) out.push_back(e.target);
    }
    return out;
  }

  std::vector<LabelSet> avoid_at(StateId s) const {
    std::vector<LabelSet> out;
    for (auto m : masks_) {
      bool survives = false;
      for (const auto& e : a_.out_edges(s)) {
        if (!a_.is_dead(e.target) && e.guard.satisfied_by(m)) {
          survives = true;
          break;
        }
      }
      if (!survives) out.push_back(a_.labels_of(m));
    }
    return out;
  }

  SubgoalStep step(StateId from, StateId to) const {
    SubgoalStep st;
    st.from = from;
    st.to = to;
    st.alphabet = alphabet_;
    for (auto m : masks_) {
      for (const auto& e : a_.out_edges(from)) {
        if (e.target == to && e.guard.satisfied_by(m)) {
          st.reach.push_back(a_.labels_of(m));
          break;
        }
      }
    }
    st.avoid = avoid_at(from);
    return st;
  }

  SubgoalStep hold(StateId at) const {
    SubgoalStep st;
    st.from = st.to = at;
    st.alphabet = alphabet_;
    st.avoid = avoid_at(at);
    return st;
  }

 private:
  const BuchiAutomaton& a_;
  std::vector<std::uint64_t> masks_;
  std::shared_ptr<const std::set<Proposition>> alphabet_;
  std::vector<char> target_;
};

}  // namespace

bool SubgoalStep::reach_matches(const LabelSet& labels) const {
  return alphabet && contains_set(reach, project(labels, *alphabet));
}

bool SubgoalStep::avoid_matches(const LabelSet& labels) const {
  return alphabet && contains_set(avoid, project(labels, *alphabet));
}

NoAcceptingPath::NoAcceptingPath() : std::runtime_error("automaton has no accepting path") {}

std::vector<SubgoalPath> extract_subgoal_sequences(const BuchiAutomaton& a, std::size_t max_paths,
                                                   const AssignmentDomain& domain) {
  SubgoalBuilder builder(a, domain);
  constexpr std::size_t kExpansionLimit = 200000;
  std::vector<std::vector<StateId>> found;
  std::deque<std::vector<StateId>> queue;
  for (StateId s : initial_frontier(a)) {
    if (builder.is_target(s)) {
      found.push_back({s});
    } else {
      queue.push_back({s});
    }
  }
  std::size_t expansions = 0;
  while (!queue.empty() && found.size() < max_paths && expansions < kExpansionLimit) {
    auto path = std::move(queue.front());
    queue.pop_front();
    ++expansions;
    for (StateId t : builder.hops(path.back())) {
      if (std::find(path.begin(), path.end(), t) != path.end()) continue;
      auto longer = path;
      longer.push_back(t);
      if (builder.is_target(t)) {
        found.push_back(std::move(longer));
        if (found.size() >= max_paths) break;
      } else {
        queue.push_back(std::move(longer));
      }
    }
  }
  if (found.empty()) throw NoAcceptingPath();
  if (found.size() > max_paths) found.resize(max_paths);

  std::vector<SubgoalPath> out;
  for (auto& states : found) {
    SubgoalPath p;
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
      p.steps.push_back(builder.step(states[i], states[i + 1]));
    }
    p.final_avoid = builder.avoid_at(states.back());
    p.states = std::move(states);
    out.push_back(std::move(p));
  }
  return out;
}

std::optional<SubgoalStep> next_subgoal(const BuchiAutomaton& a, const Frontier& frontier,
                                        const AssignmentDomain& domain) {
  SubgoalBuilder builder(a, domain);
  // Multi-source BFS; a target counts once reached through at least one hop.
  std::unordered_map<StateId, StateId> parent;
  std::deque<StateId> queue;
  for (StateId s : frontier) {
    if (a.is_dead(s) || parent.contains(s)) continue;
    parent.emplace(s, s);
    queue.push_back(s);
  }
  while (!queue.empty()) {
    StateId u = queue.front();
    queue.pop_front();
    for (StateId v : builder.hops(u)) {
      if (builder.is_target(v)) {
        // Walk back to the first hop.
        StateId child = v;
        StateId cur = u;
        while (parent.at(cur) != cur) {
          child = cur;
          cur = parent.at(cur);
        }
        return builder.step(cur, child);
      }
      if (parent.contains(v)) continue;
      parent.emplace(v, u);
      queue.push_back(v);
    }
  }
  for (StateId s : frontier) {
    if (!a.is_dead(s) && builder.is_target(s)) return builder.hold(s);
  }
  return std::nullopt;
}

void write_dump(std::ostream& out, const BuchiAutomaton& a) {
  for (StateId s = 0; s < a.num_states(); ++s) {
    const auto& st = a.state(s);
    out << "state " << s;
    if (st.accepting) out << " accepting";
    if (st.dead) out << " dead";
    if (st.sat_sink) out << " sink";
    out << '\n';
  }
  for (const auto& e : a.edges()) {
    out << "edge " << e.source << ' ' << e.target << ' ' << a.guard_text(e.guard) << '\n';
  }
}

}  // namespace specbench
