#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specbench/formula.hpp"

namespace specbench {

using StateId = std::uint32_t;

/// Conjunction of literals over the automaton alphabet, as bit masks.
/// Atoms in neither mask are unconstrained.
struct Guard {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  bool satisfied_by(std::uint64_t assignment) const noexcept {
    return (assignment & pos) == pos && (assignment & neg) == 0;
  }
  auto operator<=>(const Guard&) const = default;
};

struct GuardedEdge {
  StateId source = 0;
  StateId target = 0;
  Guard guard;
  auto operator<=>(const GuardedEdge&) const = default;
};

/// A tableau state: the obligations that must hold from here on, plus the
/// degeneralization level.
struct AutomatonState {
  std::vector<Formula> obligations;
  std::uint32_t level = 0;
  bool accepting = false;
  bool dead = false;
  bool sat_sink = false;

  /// Conjunction of the obligations (`true` when there are none).
  Formula residual() const;
};

class BuchiAutomaton {
 public:
  const std::vector<Proposition>& alphabet() const noexcept { return alphabet_; }
  Formula formula() const noexcept { return formula_; }

  std::size_t num_states() const noexcept { return states_.size(); }
  const AutomatonState& state(StateId s) const { return states_.at(s); }
  const std::vector<StateId>& initial() const noexcept { return initial_; }
  const std::vector<GuardedEdge>& edges() const noexcept { return edges_; }
  std::span<const GuardedEdge> out_edges(StateId s) const;
  /// Number of generalized acceptance sets before degeneralization.
  std::size_t acceptance_sets() const noexcept { return acceptance_sets_; }

  bool is_accepting(StateId s) const { return states_.at(s).accepting; }
  bool is_dead(StateId s) const { return states_.at(s).dead; }
  bool is_sat_sink(StateId s) const { return states_.at(s).sat_sink; }

  std::vector<StateId> accepting_states() const;
  std::vector<StateId> dead_states() const;
  std::vector<StateId> sat_sink_states() const;
  bool language_empty() const;

  /// Projects a label set onto the alphabet; other propositions are ignored.
  std::uint64_t mask_of(const LabelSet& labels) const;
  LabelSet labels_of(std::uint64_t mask) const;
  /// Space-separated literals (`a !b`), or `true`.
  std::string guard_text(const Guard& g) const;

 private:
  friend BuchiAutomaton compile_nnf(Formula f, std::size_t state_cap);

  Formula formula_;
  std::vector<Proposition> alphabet_;
  std::vector<AutomatonState> states_;
  std::vector<StateId> initial_;
  std::vector<GuardedEdge> edges_;
  std::vector<std::size_t> edge_begin_;
  std::size_t acceptance_sets_ = 0;
};

class CompileBudgetExceeded : public std::runtime_error {
 public:
  CompileBudgetExceeded(std::size_t cap, const std::string& what);
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

struct CompileOptions {
  std::size_t state_cap = 20000;
};

/// Tableau construction to a generalized Büchi automaton (one acceptance
/// set per U/F subformula), degeneralized by a level counter. The input is
/// converted to NNF first.
BuchiAutomaton compile(Formula f, const CompileOptions& options = {});

/// Whether some run on `w` visits an accepting state infinitely often.
bool accepts(const BuchiAutomaton& a, const LassoTrace& w);

/// SCC analysis: states that reach a cycle through an accepting state.
std::vector<StateId> nonempty_states(const BuchiAutomaton& a);

// ---------------------------------------------------------------- monitor

enum class MonitorStatus { Open, Violated, SatisfiedSink };

std::string_view to_string(MonitorStatus s) noexcept;

/// Sorted set of live states tracked during monitoring.
using Frontier = std::vector<StateId>;

struct MonitorStep {
  Frontier frontier;
  bool accepting_hit = false;
  MonitorStatus status = MonitorStatus::Open;
};

Frontier initial_frontier(const BuchiAutomaton& a);
MonitorStep step_monitor(const BuchiAutomaton& a, const Frontier& frontier, const LabelSet& sigma);

// ---------------------------------------------------------------- subgoals

/// The assignments (label sets) an environment can actually produce. Used
/// to turn symbolic guards into concrete reach/avoid sets.
class AssignmentDomain {
 public:
  /// Every subset of the automaton alphabet.
  static AssignmentDomain all();
  /// At most one proposition true at a time (LetterWorld, separated zones).
  static AssignmentDomain exclusive();
  static AssignmentDomain explicit_sets(std::vector<LabelSet> assignments);

  /// Distinct assignment masks over the automaton alphabet.
  std::vector<std::uint64_t> masks(const BuchiAutomaton& a) const;

 private:
  enum class Kind { All, Exclusive, Explicit };
  Kind kind_ = Kind::All;
  std::vector<LabelSet> sets_;
};

/// One reach-avoid stage. `reach` and `avoid` are assignments over the
/// automaton alphabet; environment labels are projected before matching.
struct SubgoalStep {
  StateId from = 0;
  StateId to = 0;
  std::vector<LabelSet> reach;
  std::vector<LabelSet> avoid;
  std::shared_ptr<const std::set<Proposition>> alphabet;

  bool reach_matches(const LabelSet& labels) const;
  bool avoid_matches(const LabelSet& labels) const;
};

struct SubgoalPath {
  std::vector<StateId> states;
  std::vector<SubgoalStep> steps;
  /// Assignments that leave the accepting target for a dead state.
  std::vector<LabelSet> final_avoid;

  std::size_t length() const noexcept { return steps.size(); }
};

class NoAcceptingPath : public std::runtime_error {
 public:
  NoAcceptingPath();
};

/// Targets: live accepting states lying on a cycle (for co-safe formulas this
/// is the satisfied sink). Returns up to `max_paths` loop-free paths from the
/// initial state, shortest first.
std::vector<SubgoalPath> extract_subgoal_sequences(const BuchiAutomaton& a, std::size_t max_paths,
                                                   const AssignmentDomain& domain =
                                                       AssignmentDomain::all());

/// First stage of a shortest path from any frontier state to a target that
/// takes at least one hop. When the frontier already sits on a target with no
/// outgoing progress (e.g. `G a`) a hold step is returned: empty reach and the
/// violating assignments as avoid. Empty optional if no target is reachable.
std::optional<SubgoalStep> next_subgoal(const BuchiAutomaton& a, const Frontier& frontier,
                                        const AssignmentDomain& domain);

/// Text dump: `state <id> [accepting] [dead] [sink]` lines followed by
/// `edge <src> <dst> <literals>` lines, ordered by id.
void write_dump(std::ostream& out, const BuchiAutomaton& a);

}  // namespace specbench
