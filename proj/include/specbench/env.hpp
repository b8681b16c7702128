#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "specbench/formula.hpp"

namespace specbench {

class ActionOutOfRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class SteppedAfterTerminal : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};
class PlacementFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kPlacementAttempts = 1000;

/// Named slice of an observation vector.
struct Slice {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
  std::string unit;
};

struct ObservationLayout {
  std::vector<Slice> s_ap;
  std::vector<Slice> s_not_ap;
  std::size_t s_ap_size() const;
  std::size_t s_not_ap_size() const;
};

struct Observation {
  std::vector<double> s_ap;
  std::vector<double> s_not_ap;
};

struct ActionSpace {
  /// Number of discrete actions; 0 for a continuous box.
  int discrete = 0;
  /// Dimension of the continuous box [-1, 1]^dim.
  int dim = 0;
};

/// One agent's action: a single integer-valued entry for discrete spaces,
/// `dim` entries in [-1, 1] otherwise.
using Action = std::vector<double>;

struct StepResult {
  /// One observation per agent.
  std::vector<Observation> obs;
  double reward = 0.0;
  bool terminal = false;
  bool timeout = false;
  LabelSet propositions;
  std::size_t step = 0;
};

struct ResetResult {
  std::vector<Observation> obs;
  LabelSet propositions;
};

class Env {
 public:
  virtual ~Env() = default;

  virtual std::string id() const = 0;
  virtual std::set<Proposition> alphabet() const = 0;
  virtual std::size_t n_agents() const { return 1; }
  virtual ActionSpace action_space() const = 0;
  virtual ObservationLayout layout() const = 0;

  virtual ResetResult reset(std::uint64_t seed) = 0;
  /// One action per agent.
  virtual StepResult step(const std::vector<Action>& joint) = 0;
  StepResult step(const Action& a) { return step(std::vector<Action>{a}); }

  /// Propositions that can never be true together, as groups; the planner
  /// uses them to enumerate the assignments the labeling can produce. Empty
  /// when no such structure is guaranteed.
  virtual std::vector<std::vector<Proposition>> exclusive_groups() const { return {}; }

  /// Raw state for visualization and independent label recomputation.
  virtual nlohmann::json raw_state() const = 0;
  /// Labels recomputed from the current state.
  virtual LabelSet labels() const = 0;

  std::size_t horizon() const noexcept { return horizon_; }
  virtual void set_horizon(std::size_t h) { horizon_ = h; }
  std::size_t step_index() const noexcept { return step_; }
  bool done() const noexcept { return done_; }

 protected:
  void begin_episode() {
    step_ = 0;
    done_ = false;
  }
  /// Advances the step counter; sets timeout at the horizon.
  void finish_step(StepResult& r);
  void check_running() const;

  std::size_t horizon_ = 0;
  std::size_t step_ = 0;
  bool done_ = true;
};

/// Registry ids: letter, zone-point, zone-car, zone-multi, arm-grippers,
/// arm-full. `overrides` are config fields by name.
std::unique_ptr<Env> make_env(const std::string& id, const nlohmann::json& overrides = {});
std::vector<std::string> env_ids();

}  // namespace specbench
