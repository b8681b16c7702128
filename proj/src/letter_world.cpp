#include "specbench/letter_world.hpp"

#include <algorithm>

namespace specbench {

void LetterWorldConfig::validate() const {
  if (grid_size < 1) throw ConfigError("grid_size must be positive");
  if (n_letters < 1 || n_letters > 26) throw ConfigError("n_letters must be in [1, 26]");
  if (copies_per_letter < 1) throw ConfigError("copies_per_letter must be positive");
  if (horizon < 1) throw ConfigError("horizon must be positive");
  if (grid_size * grid_size < n_letters * copies_per_letter + 1) {
    throw ConfigError("grid too small for the letters plus the agent");
  }
  if (view_radius < 0 || (2 * view_radius + 1) > grid_size) {
    throw ConfigError("view window larger than the grid");
  }
}

Cell wrap_move(Cell c, int action, int grid_size) {
  switch (action) {
    case kUp: c.row -= 1; break;
    case kDown: c.row += 1; break;
    case kLeft: c.col -= 1; break;
    case kRight: c.col += 1; break;
    default: throw ActionOutOfRange("letter action must be 0..3");
  }
  c.row = (c.row % grid_size + grid_size) % grid_size;
  c.col = (c.col % grid_size + grid_size) % grid_size;
  return c;
}

LetterLayout LetterLayout::from_json(const nlohmann::json& raw) {
  LetterLayout out;
  out.grid_size = raw.at("grid_size").get<int>();
  auto agent = raw.at("agent");
  out.agent = {agent.at(0).get<int>(), agent.at(1).get<int>()};
  out.letters.assign(static_cast<std::size_t>(out.grid_size * out.grid_size), -1);
  for (const auto& [name, cells] : raw.at("letters").items()) {
    int idx = static_cast<int>(out.names.size());
    out.names.push_back(name);
    for (const auto& cell : cells) {
      int r = cell.at(0).get<int>(), c = cell.at(1).get<int>();
      if (r < 0 || c < 0 || r >= out.grid_size || c >= out.grid_size) {
        throw ConfigError("letter cell outside the grid");
      }
      out.letters[static_cast<std::size_t>(r * out.grid_size + c)] = idx;
    }
  }
  return out;
}

LetterWorld::LetterWorld(LetterWorldConfig config) : config_(config) {
  config_.validate();
  horizon_ = config_.horizon;
  layout_.grid_size = config_.grid_size;
  for (int i = 0; i < config_.n_letters; ++i) layout_.names.push_back(std::string(1, static_cast<char>('a' + i)));
  layout_.letters.assign(static_cast<std::size_t>(config_.grid_size * config_.grid_size), -1);
}

std::set<Proposition> LetterWorld::alphabet() const {
  std::set<Proposition> out;
  for (const auto& n : layout_.names) out.emplace(n);
  return out;
}

std::vector<std::vector<Proposition>> LetterWorld::exclusive_groups() const {
  std::vector<Proposition> group;
  for (const auto& n : layout_.names) group.emplace_back(n);
  return {group};
}

ObservationLayout LetterWorld::layout() const {
  ObservationLayout l;
  const auto L = static_cast<std::size_t>(config_.n_letters);
  if (config_.partial_obs) {
    const auto w = static_cast<std::size_t>(2 * config_.view_radius + 1);
    l.s_ap.push_back({"window_letters", 0, w * w * L, "one-hot (dr, dc, letter)"});
  } else {
    const auto g = static_cast<std::size_t>(config_.grid_size);
    l.s_ap.push_back({"grid_letters", 0, g * g * L, "one-hot (row, col, letter)"});
    l.s_not_ap.push_back({"agent_cell", 0, g * g, "one-hot (row, col)"});
  }
  return l;
}

ResetResult LetterWorld::reset(std::uint64_t seed) {
  Rng rng(mix64(seed, 1));
  const int g = config_.grid_size;
  const auto cells = static_cast<std::uint64_t>(g * g);
  layout_.letters.assign(cells, -1);
  std::vector<char> used(cells, 0);
  auto place = [&]() {
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
      auto c = rng.below(cells);
      if (!used[c]) {
        used[c] = 1;
        return static_cast<int>(c);
      }
    }
    throw PlacementFailure("letter: no free cell after 1000 attempts");
  };
  for (int letter = 0; letter < config_.n_letters; ++letter) {
    for (int k = 0; k < config_.copies_per_letter; ++k) layout_.letters[static_cast<std::size_t>(place())] = letter;
  }
  int a = place();
  layout_.agent = {a / g, a % g};
  begin_episode();
  return {{observe()}, labels()};
}

StepResult LetterWorld::step(const std::vector<Action>& joint) {
  check_running();
  if (joint.size() != 1 || joint[0].size() != 1) {
    throw ActionOutOfRange("letter expects one action with one entry");
  }
  const double v = joint[0][0];
  if (!(v >= 0 && v <= 3) || v != static_cast<int>(v)) {
    throw ActionOutOfRange("letter action must be 0..3");
  }
  layout_.agent = wrap_move(layout_.agent, static_cast<int>(v), config_.grid_size);
  StepResult r;
  r.obs.push_back(observe());
  r.propositions = labels();
  finish_step(r);
  return r;
}

LabelSet LetterWorld::labels() const {
  LabelSet out;
  int idx = layout_.letter_at(layout_.agent);
  if (idx >= 0) out.emplace(layout_.names[static_cast<std::size_t>(idx)]);
  return out;
}

Observation LetterWorld::observe() const {
  Observation o;
  const int g = config_.grid_size;
  const auto L = static_cast<std::size_t>(config_.n_letters);
  if (config_.partial_obs) {
    const int r = config_.view_radius;
    const int w = 2 * r + 1;
    o.s_ap.assign(static_cast<std::size_t>(w * w) * L, 0.0);
    for (int dr = -r; dr <= r; ++dr) {
      for (int dc = -r; dc <= r; ++dc) {
        Cell c{((layout_.agent.row + dr) % g + g) % g, ((layout_.agent.col + dc) % g + g) % g};
        int idx = layout_.letter_at(c);
        if (idx < 0) continue;
        auto pos = static_cast<std::size_t>((dr + r) * w + (dc + r));
        o.s_ap[pos * L + static_cast<std::size_t>(idx)] = 1.0;
      }
    }
    return o;
  }
  o.s_ap.assign(static_cast<std::size_t>(g * g) * L, 0.0);
  for (std::size_t cell = 0; cell < layout_.letters.size(); ++cell) {
    if (layout_.letters[cell] >= 0) o.s_ap[cell * L + static_cast<std::size_t>(layout_.letters[cell])] = 1.0;
  }
  o.s_not_ap.assign(static_cast<std::size_t>(g * g), 0.0);
  o.s_not_ap[static_cast<std::size_t>(layout_.agent.row * g + layout_.agent.col)] = 1.0;
  return o;
}

LetterLayout LetterWorld::decode(const Observation& obs, const LetterWorldConfig& config) {
  if (config.partial_obs) throw ConfigError("decoding needs full observations");
  LetterLayout out;
  const int g = config.grid_size;
  const auto L = static_cast<std::size_t>(config.n_letters);
  out.grid_size = g;
  for (int i = 0; i < config.n_letters; ++i) out.names.push_back(std::string(1, static_cast<char>('a' + i)));
  out.letters.assign(static_cast<std::size_t>(g * g), -1);
  for (std::size_t cell = 0; cell < out.letters.size(); ++cell) {
    for (std::size_t k = 0; k < L; ++k) {
      if (obs.s_ap.at(cell * L + k) != 0.0) out.letters[cell] = static_cast<int>(k);
    }
  }
  for (std::size_t cell = 0; cell < obs.s_not_ap.size(); ++cell) {
    if (obs.s_not_ap[cell] != 0.0) out.agent = {static_cast<int>(cell) / g, static_cast<int>(cell) % g};
  }
  return out;
}

nlohmann::json LetterWorld::raw_state() const {
  nlohmann::json letters = nlohmann::json::object();
  const int g = config_.grid_size;
  for (const auto& n : layout_.names) letters[n] = nlohmann::json::array();
  for (int cell = 0; cell < g * g; ++cell) {
    int idx = layout_.letters[static_cast<std::size_t>(cell)];
    if (idx >= 0) letters[layout_.names[static_cast<std::size_t>(idx)]].push_back({cell / g, cell % g});
  }
  return {{"env", id()},
          {"step", step_},
          {"grid_size", g},
          {"agent", {layout_.agent.row, layout_.agent.col}},
          {"letters", letters}};
}

}  // namespace specbench
