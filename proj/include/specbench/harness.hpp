#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specbench/automaton.hpp"
#include "specbench/env.hpp"
#include "specbench/letter_world.hpp"
#include "specbench/progression.hpp"
#include "specbench/specgen.hpp"

namespace specbench {

class AlphabetMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Unreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Assignments the environment can label, projected onto the automaton
/// alphabet: per exclusive group at most one proposition, other atoms free.
AssignmentDomain domain_for(const Env& env, const BuchiAutomaton& a);

/// A spec compiled once and shared by every episode that runs it.
struct PreparedSpec {
  SpecRecord record;
  std::shared_ptr<const BuchiAutomaton> automaton;
  AssignmentDomain domain;
};

/// Throws AlphabetMismatch when the formula uses atoms the env never labels.
PreparedSpec prepare(const SpecRecord& spec, const Env& env);

struct SpecContext {
  const PreparedSpec* spec = nullptr;
  Formula progressed;
  Frontier frontier;
  std::optional<SubgoalStep> subgoal;
  LabelSet labels;
  std::size_t step = 0;
};

struct EpisodeInfo {
  std::uint64_t seed = 0;
  std::size_t seed_index = 0;
  std::size_t episode_index = 0;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual void reset(const Env& env, const EpisodeInfo& info) = 0;
  /// One action per agent of the environment.
  virtual std::vector<Action> act(const Env& env, const std::vector<Observation>& obs,
                                  const SpecContext& ctx) = 0;
};

/// Uniform actions from a stream seeded by the episode seed.
class RandomAgent : public Agent {
 public:
  std::string name() const override { return "random"; }
  void reset(const Env& env, const EpisodeInfo& info) override;
  std::vector<Action> act(const Env& env, const std::vector<Observation>& obs,
                          const SpecContext& ctx) override;

 private:
  Rng rng_;
};

/// LetterWorld planner: breadth-first search over (cell, monitor frontier)
/// on the grid decoded from the full observation, replanned every step.
/// Goal: the satisfied sink for finite specs, the next accepting visit
/// otherwise.
class BfsPlanner : public Agent {
 public:
  std::string name() const override { return "bfs"; }
  void reset(const Env& env, const EpisodeInfo& info) override;
  std::vector<Action> act(const Env& env, const std::vector<Observation>& obs,
                          const SpecContext& ctx) override;
};

/// Zone and Arm heuristic: heads for the nearest entity satisfying the
/// current reach set and is pushed away from avoided entities inside a
/// clearance of `clearance` radii. Reads positions from the simulator.
class GreedyField : public Agent {
 public:
  explicit GreedyField(double clearance = 1.5) : clearance_(clearance) {}
  std::string name() const override { return "greedy"; }
  void reset(const Env& env, const EpisodeInfo& info) override;
  std::vector<Action> act(const Env& env, const std::vector<Observation>& obs,
                          const SpecContext& ctx) override;

 private:
  double clearance_;
};

/// Actions from a function of (step, episode).
class ScriptedAgent : public Agent {
 public:
  using Script = std::function<std::vector<Action>(std::size_t step, const EpisodeInfo& info)>;
  explicit ScriptedAgent(Script script, std::string name = "scripted")
      : script_(std::move(script)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  void reset(const Env&, const EpisodeInfo& info) override { info_ = info; }
  std::vector<Action> act(const Env&, const std::vector<Observation>&, const SpecContext& ctx) override {
    return script_(ctx.step, info_);
  }

 private:
  Script script_;
  std::string name_;
  EpisodeInfo info_;
};

/// random, bfs (alias bfs_planner), greedy (alias greedy_field).
std::unique_ptr<Agent> make_agent(const std::string& name);
std::vector<std::string> agent_names();

struct EpisodeOutcome {
  Verdict verdict = Verdict::Open;
  std::optional<std::size_t> steps_to_decision;
  std::size_t accepting_visits = 0;
  std::size_t length = 0;
  /// Monitor status after the last step.
  MonitorStatus monitor = MonitorStatus::Open;
};

struct EpisodeOptions {
  /// Step budget for infinite-horizon specs; 0 means 10x the env horizon.
  std::size_t eval_horizon = 0;
  /// When set, filled with one JSON object describing the episode.
  nlohmann::json* trajectory = nullptr;
};

/// Resets with `info.seed` and runs until the progression verdict is decided
/// (Satisfied only ends finite-horizon specs), or the step budget runs out.
/// Labels are read after every step; the reset labels are not a symbol.
EpisodeOutcome run_episode(Env& env, const PreparedSpec& spec, Agent& agent, const EpisodeInfo& info,
                           const EpisodeOptions& options = {});

/// Convenience overload that compiles the spec.
EpisodeOutcome run_episode(Env& env, const SpecRecord& spec, Agent& agent, std::uint64_t seed,
                           std::size_t eval_horizon = 0);

std::uint64_t episode_seed(std::uint64_t seed_base, std::size_t seed_index, std::size_t episode_index);

struct EvalConfig {
  std::size_t n_seeds = 5;
  std::size_t n_episodes = 100;
  std::uint64_t seed_base = 0;
  std::size_t eval_horizon = 0;
  unsigned jobs = 1;
  bool record_trajectories = false;
};

/// Counts for one (spec, seed) pair.
struct ReportRow {
  std::string spec_id;
  Family family = Family::IND;
  std::size_t seed = 0;
  std::size_t n_episodes = 0;
  std::size_t satisfied = 0;
  std::size_t violated = 0;
  std::size_t open = 0;
  /// Sum of steps_to_decision over satisfied episodes.
  std::size_t satisfied_steps = 0;
  /// Sum of accepting visits over episodes that were not violated.
  std::size_t accepting_visits = 0;

  double eta_s() const;
  double eta_v() const;
  double eta_o() const;
  /// Mean steps over satisfied episodes; none when there are none.
  std::optional<double> mu() const;
  /// Mean accepting visits over non-violated episodes.
  std::optional<double> mu_acc() const;
};

struct Aggregate {
  std::string spec_id;
  Family family = Family::IND;
  std::string metric;
  std::optional<double> mean;
  std::optional<double> stddev;
  std::size_t n = 0;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  /// One JSON line per episode when trajectories are recorded.
  std::vector<std::string> trajectories;

  /// Mean and sample standard deviation across seeds per spec and metric;
  /// seeds where a metric is none are skipped.
  std::vector<Aggregate> aggregates() const;
  void write_csv(std::ostream& out) const;
  void write_summary_csv(std::ostream& out) const;
};

using EnvFactory = std::function<std::unique_ptr<Env>()>;
using AgentFactory = std::function<std::unique_ptr<Agent>()>;

/// Every (spec, seed, episode) runs on its own env and agent; results are
/// reduced in a fixed order so the report does not depend on `jobs`.
EvalReport evaluate(const EnvFactory& make_env, const std::vector<SpecRecord>& specs,
                    const AgentFactory& make_agent, const EvalConfig& config = {});

/// Shortest-number formatting that round-trips doubles; "none" for empty.
std::string format_number(std::optional<double> v);

struct OptimalSteps {
  std::size_t steps = 0;
  double normalized = 0.0;
};

/// Dijkstra over (cell, stage) on the wrapped grid. Entering a cell whose
/// label is in the stage's avoid set is forbidden; a reach label advances the
/// stage. Normalized by the number of stages.
OptimalSteps optimal_steps_letter(const LetterLayout& layout, const SubgoalPath& path);
/// Minimum over the first `max_paths` subgoal paths of the spec.
OptimalSteps optimal_steps_letter(const LetterLayout& layout, Formula spec, std::size_t max_paths = 32);

/// +1 when the labels satisfy the reach set, -1 for the avoid set, else 0.
double subgoal_reward(const SubgoalStep& subgoal, const LabelSet& labels);

/// Replaces the base reward by the subgoal reward of the current subgoal.
class SubgoalRewardWrapper : public Env {
 public:
  explicit SubgoalRewardWrapper(std::unique_ptr<Env> inner) : inner_(std::move(inner)) {}

  void set_subgoal(std::optional<SubgoalStep> s) { subgoal_ = std::move(s); }
  const Env& inner() const noexcept { return *inner_; }

  std::string id() const override { return inner_->id(); }
  std::set<Proposition> alphabet() const override { return inner_->alphabet(); }
  std::size_t n_agents() const override { return inner_->n_agents(); }
  ActionSpace action_space() const override { return inner_->action_space(); }
  ObservationLayout layout() const override { return inner_->layout(); }
  ResetResult reset(std::uint64_t seed) override { return inner_->reset(seed); }
  using Env::step;
  StepResult step(const std::vector<Action>& joint) override;
  std::vector<std::vector<Proposition>> exclusive_groups() const override {
    return inner_->exclusive_groups();
  }
  nlohmann::json raw_state() const override { return inner_->raw_state(); }
  LabelSet labels() const override { return inner_->labels(); }
  void set_horizon(std::size_t h) override { inner_->set_horizon(h); }

 private:
  std::unique_ptr<Env> inner_;
  std::optional<SubgoalStep> subgoal_;
};

}  // namespace specbench
