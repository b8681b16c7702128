#pragma once

#include <array>

#include "specbench/env.hpp"
#include "specbench/rng.hpp"

namespace specbench {

struct LetterWorldConfig {
  int grid_size = 7;
  int n_letters = 12;  // a, b, c, ...
  int copies_per_letter = 2;
  std::size_t horizon = 75;
  bool partial_obs = false;
  int view_radius = 2;

  void validate() const;
};

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

enum LetterAction : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

/// Letter placement plus agent start; what the optimal-steps oracle needs.
struct LetterLayout {
  int grid_size = 7;
  Cell agent;
  /// Letter index per cell (row-major), -1 when empty.
  std::vector<int> letters;
  std::vector<std::string> names;

  int letter_at(Cell c) const { return letters[static_cast<std::size_t>(c.row * grid_size + c.col)]; }
  static LetterLayout from_json(const nlohmann::json& raw);
};

Cell wrap_move(Cell c, int action, int grid_size);

/// Grid world; each letter is placed `copies_per_letter` times on distinct
/// cells and the agent spawns on an empty cell. Moving off an edge wraps.
///
/// Full observation: s_ap is the absolute grid as a letter one-hot map
/// (row, col, letter), s_not_ap the agent position one-hot. Partial
/// observation: s_ap is the egocentric (2r+1)^2 window, s_not_ap is empty.
class LetterWorld : public Env {
 public:
  explicit LetterWorld(LetterWorldConfig config = {});

  std::string id() const override { return "letter"; }
  std::set<Proposition> alphabet() const override;
  ActionSpace action_space() const override { return {4, 0}; }
  ObservationLayout layout() const override;
  ResetResult reset(std::uint64_t seed) override;
  StepResult step(const std::vector<Action>& joint) override;
  using Env::step;
  std::vector<std::vector<Proposition>> exclusive_groups() const override;
  nlohmann::json raw_state() const override;
  LabelSet labels() const override;

  const LetterWorldConfig& config() const noexcept { return config_; }
  const LetterLayout& current_layout() const noexcept { return layout_; }
  Cell agent() const noexcept { return layout_.agent; }

  /// Decodes a full observation back into a layout (agent and letters).
  static LetterLayout decode(const Observation& obs, const LetterWorldConfig& config);

 private:
  Observation observe() const;

  LetterWorldConfig config_;
  LetterLayout layout_;
};

}  // namespace specbench
