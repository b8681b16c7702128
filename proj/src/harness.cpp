#include "specbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <queue>
#include <thread>

#include "specbench/arm_env.hpp"
#include "specbench/semantics.hpp"
#include "specbench/zone_env.hpp"

namespace specbench {

namespace {

const Env& unwrap(const Env& env) {
  if (auto* w = dynamic_cast<const SubgoalRewardWrapper*>(&env)) return unwrap(w->inner());
  return env;
}

nlohmann::json labels_json(const LabelSet& labels) {
  auto out = nlohmann::json::array();
  for (const auto& p : labels) out.push_back(p.name());
  return out;
}

class HorizonGuard {
 public:
  HorizonGuard(Env& env, std::size_t h) : env_(env), saved_(env.horizon()) { env_.set_horizon(h); }
  ~HorizonGuard() { env_.set_horizon(saved_); }
  HorizonGuard(const HorizonGuard&) = delete;
  HorizonGuard& operator=(const HorizonGuard&) = delete;

 private:
  Env& env_;
  std::size_t saved_;
};

}  // namespace

AssignmentDomain domain_for(const Env& env, const BuchiAutomaton& a) {
  auto groups = env.exclusive_groups();
  if (groups.empty()) return AssignmentDomain::all();
  const std::set<Proposition> in_alphabet(a.alphabet().begin(), a.alphabet().end());
  std::set<Proposition> grouped;
  std::vector<LabelSet> sets{LabelSet{}};
  for (const auto& g : groups) {
    std::vector<LabelSet> next;
    for (const auto& s : sets) {
      next.push_back(s);
      for (const auto& p : g) {
        if (!in_alphabet.contains(p)) continue;
        auto t = s;
        t.insert(p);
        next.push_back(std::move(t));
      }
    }
    sets = std::move(next);
    grouped.insert(g.begin(), g.end());
  }
  for (const auto& p : a.alphabet()) {
    if (grouped.contains(p)) continue;
    const std::size_t n = sets.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto t = sets[i];
      t.insert(p);
      sets.push_back(std::move(t));
    }
  }
  return AssignmentDomain::explicit_sets(std::move(sets));
}

PreparedSpec prepare(const SpecRecord& spec, const Env& env) {
  const auto sigma = env.alphabet();
  for (const auto& p : alphabet(spec.formula)) {
    if (!sigma.contains(p)) {
      throw AlphabetMismatch("spec " + spec.id + " uses '" + p.name() + "', which " + env.id() +
                             " never labels");
    }
  }
  PreparedSpec out;
  out.record = spec;
  out.automaton = std::make_shared<const BuchiAutomaton>(compile(spec.formula));
  out.domain = domain_for(env, *out.automaton);
  return out;
}

// ---------------------------------------------------------------- agents

void RandomAgent::reset(const Env&, const EpisodeInfo& info) { rng_ = Rng(mix64(info.seed, 3)); }

std::vector<Action> RandomAgent::act(const Env& env, const std::vector<Observation>&, const SpecContext&) {
  const auto space = env.action_space();
  std::vector<Action> out;
  for (std::size_t i = 0; i < env.n_agents(); ++i) {
    Action a;
    if (space.discrete > 0) {
      a.push_back(static_cast<double>(rng_.below(static_cast<std::uint64_t>(space.discrete))));
    } else {
      for (int d = 0; d < space.dim; ++d) a.push_back(rng_.uniform(-1.0, 1.0));
    }
    out.push_back(std::move(a));
  }
  return out;
}

void BfsPlanner::reset(const Env& env, const EpisodeInfo&) {
  auto* lw = dynamic_cast<const LetterWorld*>(&unwrap(env));
  if (!lw || lw->config().partial_obs) throw ConfigError("bfs planner needs a fully observed letter world");
}

std::vector<Action> BfsPlanner::act(const Env& env, const std::vector<Observation>& obs, const SpecContext& ctx) {
  const auto& lw = dynamic_cast<const LetterWorld&>(unwrap(env));
  const LetterLayout layout = LetterWorld::decode(obs.at(0), lw.config());
  const auto& a = *ctx.spec->automaton;
  const bool finite = ctx.spec->record.horizon == HorizonKind::Finite;
  const int g = layout.grid_size;

  auto label_of = [&](Cell c) {
    LabelSet l;
    int idx = layout.letter_at(c);
    if (idx >= 0) l.emplace(layout.names[static_cast<std::size_t>(idx)]);
    return l;
  };

  struct Node {
    Cell cell;
    Frontier frontier;
    int first;
  };
  std::map<std::pair<int, Frontier>, char> seen;
  std::deque<Node> queue;
  queue.push_back({layout.agent, ctx.frontier, -1});
  seen.emplace(std::make_pair(layout.agent.row * g + layout.agent.col, ctx.frontier), 1);
  int fallback = -1;
  while (!queue.empty()) {
    Node n = std::move(queue.front());
    queue.pop_front();
    for (int act = kUp; act <= kRight; ++act) {
      Cell next = wrap_move(n.cell, act, g);
      auto ms = step_monitor(a, n.frontier, label_of(next));
      if (ms.status == MonitorStatus::Violated) continue;
      const int first = n.first < 0 ? act : n.first;
      if (fallback < 0) fallback = first;
      const bool goal = finite ? ms.status == MonitorStatus::SatisfiedSink : ms.accepting_hit;
      if (goal) return {{static_cast<double>(first)}};
      if (seen.emplace(std::make_pair(next.row * g + next.col, ms.frontier), 1).second) {
        queue.push_back({next, std::move(ms.frontier), first});
      }
    }
  }
  return {{static_cast<double>(std::max(fallback, 0))}};
}

namespace {

// Colors an agent should stay away from: adding that color to the current
// labels would complete an avoid assignment.
template <typename PropOf>
std::vector<int> avoided_colors(const SpecContext& ctx, int n_colors, PropOf prop_of) {
  std::vector<int> out;
  if (!ctx.subgoal) return out;
  for (int c = 0; c < n_colors; ++c) {
    for (const auto& name : prop_of(c)) {
      Proposition p(name);
      LabelSet with = ctx.labels;
      with.insert(p);
      bool hit = std::any_of(ctx.subgoal->avoid.begin(), ctx.subgoal->avoid.end(), [&](const LabelSet& s) {
        return s.contains(p) && std::includes(with.begin(), with.end(), s.begin(), s.end());
      });
      if (hit) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

double wrap_angle(double x) { return std::remainder(x, 2.0 * std::numbers::pi); }

Action steer_zone(const ZoneConfig& cfg, const ZoneAgent& ag, Vec2 desired, double target_dist) {
  const double norm = std::hypot(desired.x, desired.y);
  if (norm < 1e-12) return {0.0, 0.0};
  const double err = wrap_angle(std::atan2(desired.y, desired.x) - ag.heading);
  const double forward = std::max(std::cos(err), 0.0) *
                         std::clamp(target_dist / (cfg.max_speed * cfg.dt), 0.0, 1.0);
  if (cfg.robot == Robot::Point) {
    return {std::clamp(err / (cfg.max_turn_rate * cfg.dt), -1.0, 1.0), forward};
  }
  const double diff = std::clamp(err * cfg.track / (cfg.max_speed * cfg.dt), -2.0, 2.0);
  const double base = forward * (1.0 - std::abs(diff) / 2.0);
  return {std::clamp(base - diff / 2.0, -1.0, 1.0), std::clamp(base + diff / 2.0, -1.0, 1.0)};
}

}  // namespace

void GreedyField::reset(const Env& env, const EpisodeInfo&) {
  const Env& e = unwrap(env);
  if (!dynamic_cast<const ZoneEnv*>(&e) && !dynamic_cast<const ArmEnv*>(&e)) {
    throw ConfigError("greedy agent needs a zone or arm environment");
  }
}

std::vector<Action> GreedyField::act(const Env& env, const std::vector<Observation>&, const SpecContext& ctx) {
  const Env& e = unwrap(env);
  const bool hold = !ctx.subgoal || ctx.subgoal->reach.empty();

  if (auto* zone = dynamic_cast<const ZoneEnv*>(&e)) {
    const auto& cfg = zone->config();
    const auto& agents = zone->agents();
    const auto& zones = zone->zones();
    const double r = cfg.zone_radius;
    std::vector<Action> out(agents.size(), Action{0.0, 0.0});
    if (hold) return out;

    auto nearest = [&](std::size_t i, int color) {
      double best = INFINITY;
      std::optional<Vec2> at;
      for (const auto& z : zones) {
        if (z.color != color) continue;
        double d = std::hypot(z.center.x - agents[i].pos.x, z.center.y - agents[i].pos.y);
        if (d < best) {
          best = d;
          at = z.center;
        }
      }
      return std::make_pair(best, at);
    };
    // Per reach assignment: the color each agent has to stand in.
    auto wanted = [&](const LabelSet& s, std::size_t i) {
      for (int c = 0; c < 4; ++c) {
        if (s.contains(Proposition(zone->prop_name(c, static_cast<int>(i))))) return c;
      }
      return -1;
    };
    const LabelSet* best_set = nullptr;
    double best_cost = INFINITY;
    for (const auto& s : ctx.subgoal->reach) {
      double cost = 0.0;
      for (std::size_t i = 0; i < agents.size(); ++i) {
        int c = wanted(s, i);
        if (c >= 0) cost += nearest(i, c).first;
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_set = &s;
      }
    }
    if (!best_set) return out;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const auto& ag = agents[i];
      auto avoid = avoided_colors(ctx, 4, [&](int c) {
        return std::vector<std::string>{zone->prop_name(c, static_cast<int>(i))};
      });
      const int c = wanted(*best_set, i);
      Vec2 desired{0.0, 0.0};
      double dist = 0.0;
      if (c >= 0) {
        auto [d, at] = nearest(i, c);
        if (!at) continue;
        dist = d;
        if (d > 1e-12) desired = {(at->x - ag.pos.x) / d, (at->y - ag.pos.y) / d};
      } else {
        // Not needed anywhere: leave whatever zone the agent stands in.
        bool inside = false;
        for (const auto& z : zones) {
          double dx = ag.pos.x - z.center.x, dy = ag.pos.y - z.center.y;
          if (std::hypot(dx, dy) <= r) {
            inside = true;
            double d = std::hypot(dx, dy);
            desired = d > 1e-12 ? Vec2{dx / d, dy / d} : Vec2{std::cos(ag.heading), std::sin(ag.heading)};
            dist = r;
          }
        }
        if (!inside) continue;
      }
      const double influence = 2.0 * clearance_ * r;
      for (const auto& z : zones) {
        if (std::find(avoid.begin(), avoid.end(), z.color) == avoid.end()) continue;
        double dx = ag.pos.x - z.center.x, dy = ag.pos.y - z.center.y;
        double d = std::hypot(dx, dy);
        if (d >= influence || d < 1e-12) continue;
        double w = 1.5 * (influence / d - 1.0);
        desired.x += w * dx / d;
        desired.y += w * dy / d;
      }
      out[i] = steer_zone(cfg, ag, desired, std::max(dist, r));
    }
    return out;
  }

  const auto& arm = dynamic_cast<const ArmEnv&>(e);
  const auto& cfg = arm.config();
  const Vec3 ee = arm.end_effector();
  const auto& regions = arm.regions();
  const bool full = cfg.mode == ArmMode::GrippersArm;
  if (hold) return {{0.0, 0.0, 0.0}};
  auto props_of = [&](int c) {
    const auto& col = kRegionColors[static_cast<std::size_t>(c)];
    return full ? std::vector<std::string>{"g_" + col, "a_" + col} : std::vector<std::string>{col};
  };
  auto dist = [](const Vec3& a, const Vec3& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
  };
  int target = -1;
  double best = INFINITY;
  for (const auto& s : ctx.subgoal->reach) {
    for (int c = 0; c < static_cast<int>(regions.size()); ++c) {
      bool wants = false;
      for (const auto& p : props_of(c)) wants = wants || s.contains(Proposition(p));
      double d = dist(ee, regions[static_cast<std::size_t>(c)]);
      if (wants && d < best) {
        best = d;
        target = c;
      }
    }
  }
  if (target < 0) return {{0.0, 0.0, 0.0}};
  const Vec3& goal = regions[static_cast<std::size_t>(target)];
  Vec3 desired{};
  for (int k = 0; k < 3; ++k) desired[static_cast<std::size_t>(k)] = best > 1e-12 ? (goal[k] - ee[k]) / best : 0.0;
  const double r = cfg.region_radius;
  const double influence = 2.0 * clearance_ * r;
  for (int c : avoided_colors(ctx, static_cast<int>(regions.size()), props_of)) {
    if (c == target) continue;
    const Vec3& center = regions[static_cast<std::size_t>(c)];
    const Vec3 from = full ? closest_point_on_segment(cfg.base, ee, center) : ee;
    double d = dist(from, center);
    if (d >= influence || d < 1e-12) continue;
    double w = 1.5 * (influence / d - 1.0);
    for (std::size_t k = 0; k < 3; ++k) desired[k] += w * (from[k] - center[k]) / d;
  }
  const double norm = std::hypot(desired[0], desired[1], desired[2]);
  if (norm < 1e-12) return {{0.0, 0.0, 0.0}};
  const double scale = std::min(1.0, best / cfg.max_speed) / norm;
  Action a(3);
  for (std::size_t k = 0; k < 3; ++k) a[k] = std::clamp(desired[k] * scale, -1.0, 1.0);
  return {a};
}

std::unique_ptr<Agent> make_agent(const std::string& name) {
  if (name == "random") return std::make_unique<RandomAgent>();
  if (name == "bfs" || name == "bfs_planner") return std::make_unique<BfsPlanner>();
  if (name == "greedy" || name == "greedy_field") return std::make_unique<GreedyField>();
  throw ConfigError("unknown agent '" + name + "'");
}

std::vector<std::string> agent_names() { return {"random", "bfs", "greedy"}; }

// ---------------------------------------------------------------- episodes

EpisodeOutcome run_episode(Env& env, const PreparedSpec& spec, Agent& agent, const EpisodeInfo& info,
                           const EpisodeOptions& options) {
  const bool finite = spec.record.horizon == HorizonKind::Finite;
  const std::size_t budget =
      finite ? env.horizon() : (options.eval_horizon ? options.eval_horizon : 10 * env.horizon());
  HorizonGuard guard(env, budget);
  const auto& a = *spec.automaton;

  auto reset = env.reset(info.seed);
  agent.reset(env, info);

  SpecContext ctx;
  ctx.spec = &spec;
  ctx.progressed = simplify(nnf(spec.record.formula));
  ctx.frontier = initial_frontier(a);
  ctx.labels = reset.propositions;

  EpisodeOutcome out;
  out.verdict = verdict_of(ctx.progressed);
  out.monitor = ctx.frontier.empty() ? MonitorStatus::Violated : MonitorStatus::Open;
  nlohmann::json steps = nlohmann::json::array();
  nlohmann::json reset_state;
  if (options.trajectory) reset_state = env.raw_state();
  auto finish = [&] {
    if (options.trajectory) {
      auto& t = *options.trajectory;
      t = nlohmann::json::object();
      t["spec_id"] = spec.record.id;
      t["seed_index"] = info.seed_index;
      t["episode"] = info.episode_index;
      t["episode_seed"] = info.seed;
      t["verdict"] = std::string(to_string(out.verdict));
      t["steps_to_decision"] = out.steps_to_decision ? nlohmann::json(*out.steps_to_decision) : nlohmann::json();
      t["accepting_visits"] = out.accepting_visits;
      t["length"] = out.length;
      t["reset"] = {{"labels", labels_json(reset.propositions)}, {"state", std::move(reset_state)}};
      t["steps"] = std::move(steps);
    }
    return out;
  };
  if (out.verdict != Verdict::Open) {
    out.steps_to_decision = 0;
    if (out.verdict == Verdict::Violated || finite) return finish();
  }

  std::vector<Observation> obs = std::move(reset.obs);
  Frontier subgoal_for;
  bool have_subgoal = false;
  while (true) {
    if (!have_subgoal || subgoal_for != ctx.frontier) {
      ctx.subgoal = next_subgoal(a, ctx.frontier, spec.domain);
      subgoal_for = ctx.frontier;
      have_subgoal = true;
    }
    ctx.step = out.length;
    auto actions = agent.act(env, obs, ctx);
    auto r = env.step(actions);
    ++out.length;
    ctx.labels = r.propositions;
    ctx.progressed = progress(ctx.progressed, r.propositions);
    auto ms = step_monitor(a, ctx.frontier, r.propositions);
    ctx.frontier = std::move(ms.frontier);
    out.monitor = ms.status;
    const Verdict before = out.verdict;
    out.verdict = verdict_of(ctx.progressed);
    if (out.verdict != Verdict::Violated && ms.accepting_hit) ++out.accepting_visits;
    if (before == Verdict::Open && out.verdict != Verdict::Open) out.steps_to_decision = out.length;
    if (options.trajectory) {
      nlohmann::json acts = nlohmann::json::array();
      for (const auto& act : actions) acts.push_back(act);
      steps.push_back({{"t", out.length},
                       {"action", acts},
                       {"labels", labels_json(r.propositions)},
                       {"verdict", std::string(to_string(out.verdict))},
                       {"monitor", std::string(to_string(out.monitor))},
                       {"accepting_visits", out.accepting_visits},
                       {"state", env.raw_state()}});
    }
    if (out.verdict == Verdict::Violated || (finite && out.verdict == Verdict::Satisfied)) break;
    if (r.terminal || r.timeout) break;
    obs = std::move(r.obs);
  }
  return finish();
}

EpisodeOutcome run_episode(Env& env, const SpecRecord& spec, Agent& agent, std::uint64_t seed,
                           std::size_t eval_horizon) {
  auto prepared = prepare(spec, env);
  EpisodeInfo info;
  info.seed = seed;
  EpisodeOptions options;
  options.eval_horizon = eval_horizon;
  return run_episode(env, prepared, agent, info, options);
}

std::uint64_t episode_seed(std::uint64_t seed_base, std::size_t seed_index, std::size_t episode_index) {
  return mix64(seed_base, seed_index, episode_index);
}

// ---------------------------------------------------------------- reports

double ReportRow::eta_s() const { return n_episodes ? static_cast<double>(satisfied) / static_cast<double>(n_episodes) : 0.0; }
double ReportRow::eta_v() const { return n_episodes ? static_cast<double>(violated) / static_cast<double>(n_episodes) : 0.0; }
double ReportRow::eta_o() const { return n_episodes ? static_cast<double>(open) / static_cast<double>(n_episodes) : 0.0; }

std::optional<double> ReportRow::mu() const {
  if (satisfied == 0) return std::nullopt;
  return static_cast<double>(satisfied_steps) / static_cast<double>(satisfied);
}

std::optional<double> ReportRow::mu_acc() const {
  const std::size_t kept = n_episodes - violated;
  if (kept == 0) return std::nullopt;
  return static_cast<double>(accepting_visits) / static_cast<double>(kept);
}

std::string format_number(std::optional<double> v) {
  if (!v) return "none";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, *v);
  return std::string(buf, res.ptr);
}

std::vector<Aggregate> EvalReport::aggregates() const {
  std::vector<Aggregate> out;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ReportRow*>> by_spec;
  for (const auto& r : rows) {
    if (!by_spec.contains(r.spec_id)) order.push_back(r.spec_id);
    by_spec[r.spec_id].push_back(&r);
  }
  using Getter = std::optional<double> (*)(const ReportRow&);
  const std::vector<std::pair<std::string, Getter>> metrics = {
      {"eta_s", [](const ReportRow& r) -> std::optional<double> { return r.eta_s(); }},
      {"eta_v", [](const ReportRow& r) -> std::optional<double> { return r.eta_v(); }},
      {"eta_o", [](const ReportRow& r) -> std::optional<double> { return r.eta_o(); }},
      {"mu", [](const ReportRow& r) { return r.mu(); }},
      {"mu_acc", [](const ReportRow& r) { return r.mu_acc(); }},
  };
  for (const auto& id : order) {
    const auto& group = by_spec[id];
    for (const auto& [metric, get] : metrics) {
      Aggregate agg;
      agg.spec_id = id;
      agg.family = group.front()->family;
      agg.metric = metric;
      std::vector<double> xs;
      for (const auto* r : group) {
        if (auto v = get(*r)) xs.push_back(*v);
      }
      agg.n = xs.size();
      if (!xs.empty()) {
        double sum = 0.0;
        for (double x : xs) sum += x;
        agg.mean = sum / static_cast<double>(xs.size());
        if (xs.size() > 1) {
          double ss = 0.0;
          for (double x : xs) ss += (x - *agg.mean) * (x - *agg.mean);
          agg.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        }
      }
      out.push_back(std::move(agg));
    }
  }
  return out;
}

void EvalReport::write_csv(std::ostream& out) const {
  out << "spec_id,family,seed,n_episodes,eta_s,eta_v,eta_o,mu,mu_acc\n";
  for (const auto& r : rows) {
    out << r.spec_id << ',' << to_string(r.family) << ',' << r.seed << ',' << r.n_episodes << ','
        << format_number(r.eta_s()) << ',' << format_number(r.eta_v()) << ',' << format_number(r.eta_o())
        << ',' << format_number(r.mu()) << ',' << format_number(r.mu_acc()) << '\n';
  }
}

void EvalReport::write_summary_csv(std::ostream& out) const {
  out << "spec_id,family,metric,mean,std,n_seeds\n";
  for (const auto& a : aggregates()) {
    out << a.spec_id << ',' << to_string(a.family) << ',' << a.metric << ',' << format_number(a.mean) << ','
        << format_number(a.stddev) << ',' << a.n << '\n';
  }
}

EvalReport evaluate(const EnvFactory& make_env_fn, const std::vector<SpecRecord>& specs,
                    const AgentFactory& make_agent_fn, const EvalConfig& config) {
  std::vector<PreparedSpec> prepared;
  {
    auto probe = make_env_fn();
    for (const auto& s : specs) prepared.push_back(prepare(s, *probe));
  }
  const std::size_t per_spec = config.n_seeds * config.n_episodes;
  const std::size_t total = prepared.size() * per_spec;
  std::vector<EpisodeOutcome> outcomes(total);
  std::vector<std::string> lines(config.record_trajectories ? total : 0);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    std::unique_ptr<Env> env;
    std::unique_ptr<Agent> agent;
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      try {
        if (!env) env = make_env_fn();
        if (!agent) agent = make_agent_fn();
        const auto& spec = prepared[k / per_spec];
        EpisodeInfo info;
        info.seed_index = (k % per_spec) / config.n_episodes;
        info.episode_index = k % config.n_episodes;
        info.seed = episode_seed(config.seed_base, info.seed_index, info.episode_index);
        EpisodeOptions options;
        options.eval_horizon = config.eval_horizon;
        nlohmann::json traj;
        if (config.record_trajectories) options.trajectory = &traj;
        outcomes[k] = run_episode(*env, spec, *agent, info, options);
        if (config.record_trajectories) lines[k] = traj.dump();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  const unsigned jobs = std::max(1u, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  EvalReport report;
  for (std::size_t s = 0; s < prepared.size(); ++s) {
    for (std::size_t seed = 0; seed < config.n_seeds; ++seed) {
      ReportRow row;
      row.spec_id = prepared[s].record.id;
      row.family = prepared[s].record.family;
      row.seed = seed;
      row.n_episodes = config.n_episodes;
      for (std::size_t e = 0; e < config.n_episodes; ++e) {
        const auto& o = outcomes[s * per_spec + seed * config.n_episodes + e];
        switch (o.verdict) {
          case Verdict::Satisfied:
            ++row.satisfied;
            row.satisfied_steps += o.steps_to_decision.value_or(0);
            break;
          case Verdict::Violated: ++row.violated; break;
          case Verdict::Open: ++row.open; break;
        }
        if (o.verdict != Verdict::Violated) row.accepting_visits += o.accepting_visits;
      }
      report.rows.push_back(std::move(row));
    }
  }
  report.trajectories = std::move(lines);
  return report;
}

// ---------------------------------------------------------------- oracle

OptimalSteps optimal_steps_letter(const LetterLayout& layout, const SubgoalPath& path) {
  const int g = layout.grid_size;
  const std::size_t n = path.length();
  auto label_of = [&](int cell) {
    LabelSet l;
    int idx = layout.letters[static_cast<std::size_t>(cell)];
    if (idx >= 0) l.emplace(layout.names[static_cast<std::size_t>(idx)]);
    return l;
  };
  auto finish = [&](std::size_t steps) {
    OptimalSteps out;
    out.steps = steps;
    out.normalized = n ? static_cast<double>(steps) / static_cast<double>(n) : 0.0;
    return out;
  };
  const int start = layout.agent.row * g + layout.agent.col;
  std::size_t stage0 = 0;
  if (n > 0 && path.steps[0].reach_matches(label_of(start))) stage0 = 1;
  if (stage0 == n) return finish(0);

  const std::size_t cells = static_cast<std::size_t>(g * g);
  std::vector<std::size_t> dist(cells * (n + 1), SIZE_MAX);
  using Item = std::tuple<std::size_t, int, std::size_t>;  // cost, cell, stage
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[stage0 * cells + static_cast<std::size_t>(start)] = 0;
  pq.emplace(0, start, stage0);
  while (!pq.empty()) {
    auto [cost, cell, stage] = pq.top();
    pq.pop();
    if (cost != dist[stage * cells + static_cast<std::size_t>(cell)]) continue;
    if (stage == n) return finish(cost);
    const Cell here{cell / g, cell % g};
    for (int act = kUp; act <= kRight; ++act) {
      Cell next = wrap_move(here, act, g);
      const int nc = next.row * g + next.col;
      const auto l = label_of(nc);
      const auto& step = path.steps[stage];
      if (step.avoid_matches(l)) continue;
      const std::size_t ns = step.reach_matches(l) ? stage + 1 : stage;
      auto& d = dist[ns * cells + static_cast<std::size_t>(nc)];
      if (cost + 1 < d) {
        d = cost + 1;
        pq.emplace(cost + 1, nc, ns);
      }
    }
  }
  throw Unreachable("avoided cells cut every route to the subgoal sequence");
}

OptimalSteps optimal_steps_letter(const LetterLayout& layout, Formula spec, std::size_t max_paths) {
  auto a = compile(spec);
  std::vector<SubgoalPath> paths;
  try {
    paths = extract_subgoal_sequences(a, max_paths, AssignmentDomain::exclusive());
  } catch (const NoAcceptingPath&) {
    throw Unreachable("specification has no accepting path");
  }
  std::optional<OptimalSteps> best;
  for (const auto& p : paths) {
    try {
      auto s = optimal_steps_letter(layout, p);
      if (!best || s.steps < best->steps) best = s;
    } catch (const Unreachable&) {
    }
  }
  if (!best) throw Unreachable("avoided cells cut every route to the subgoal sequence");
  return *best;
}

double subgoal_reward(const SubgoalStep& subgoal, const LabelSet& labels) {
  if (subgoal.reach_matches(labels)) return 1.0;
  if (subgoal.avoid_matches(labels)) return -1.0;
  return 0.0;
}

StepResult SubgoalRewardWrapper::step(const std::vector<Action>& joint) {
  auto r = inner_->step(joint);
  r.reward = subgoal_ ? subgoal_reward(*subgoal_, r.propositions) : 0.0;
  return r;
}

}  // namespace specbench
