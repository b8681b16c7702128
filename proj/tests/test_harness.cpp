#include <doctest.h>

#include <sstream>

#include "fixture_env.hpp"
#include "specbench/harness.hpp"
#include "specbench/semantics.hpp"
#include "specbench/syntax.hpp"
#include "specbench/zone_env.hpp"

using namespace specbench;

namespace {

int torus(Cell a, Cell b, int g) {
  int dr = std::abs(a.row - b.row), dc = std::abs(a.col - b.col);
  return std::min(dr, g - dr) + std::min(dc, g - dc);
}

// Reach-only chains over distinct letters: min over letter cells per stage of
// summed torus distances.
int chain_optimum(const LetterLayout& l, const std::vector<std::vector<std::string>>& stages) {
  const int g = l.grid_size;
  std::vector<std::pair<Cell, int>> frontier{{l.agent, 0}};
  for (const auto& stage : stages) {
    std::vector<std::pair<Cell, int>> next;
    for (int cell = 0; cell < g * g; ++cell) {
      int idx = l.letters[static_cast<std::size_t>(cell)];
      if (idx < 0) continue;
      const auto& name = l.names[static_cast<std::size_t>(idx)];
      if (std::find(stage.begin(), stage.end(), name) == stage.end()) continue;
      Cell c{cell / g, cell % g};
      int best = INT_MAX;
      for (const auto& [from, d] : frontier) best = std::min(best, d + torus(from, c, g));
      next.emplace_back(c, best);
    }
    frontier = std::move(next);
  }
  int best = INT_MAX;
  for (const auto& [c, d] : frontier) best = std::min(best, d);
  return best;
}

LetterLayout small_layout(int g, Cell agent, std::vector<std::pair<std::string, Cell>> letters) {
  LetterLayout l;
  l.grid_size = g;
  l.agent = agent;
  l.letters.assign(static_cast<std::size_t>(g * g), -1);
  for (const auto& [name, cell] : letters) {
    auto it = std::find(l.names.begin(), l.names.end(), name);
    int idx = static_cast<int>(it - l.names.begin());
    if (it == l.names.end()) l.names.push_back(name);
    l.letters[static_cast<std::size_t>(cell.row * g + cell.col)] = idx;
  }
  return l;
}

SpecRecord finite_spec(const std::string& text, const std::string& id = "t") {
  SpecRecord r;
  r.id = id;
  r.formula = parse(text);
  r.family = Family::IND;
  r.horizon = HorizonKind::Finite;
  return r;
}

SpecRecord infinite_spec(const std::string& text, const std::string& id = "t") {
  SpecRecord r = finite_spec(text, id);
  r.family = Family::Rec;
  r.horizon = HorizonKind::Infinite;
  return r;
}

std::vector<LabelSet> label_trace(const nlohmann::json& traj) {
  std::vector<LabelSet> out;
  for (const auto& s : traj.at("steps")) {
    LabelSet l;
    for (const auto& p : s.at("labels")) l.emplace(p.get<std::string>());
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace

TEST_CASE("optimal steps examples") {
  auto path_for = [](const std::string& text) {
    auto a = compile(parse(text));
    return extract_subgoal_sequences(a, 1, AssignmentDomain::exclusive()).at(0);
  };
  auto fa = path_for("F a");
  // Leftward through the wrap: (0,0) -> (0,4) -> (0,3).
  CHECK(optimal_steps_letter(small_layout(5, {0, 0}, {{"a", {0, 3}}}), fa).steps == 2);
  CHECK(optimal_steps_letter(small_layout(7, {0, 0}, {{"a", {0, 3}}}), fa).steps == 3);
  CHECK(optimal_steps_letter(small_layout(5, {0, 0}, {{"a", {0, 4}}}), fa).steps == 1);
  auto here = optimal_steps_letter(small_layout(5, {0, 0}, {{"a", {0, 0}}}), fa);
  CHECK(here.steps == 0);
  CHECK(here.normalized == 0.0);

  auto walled = small_layout(5, {0, 0}, {{"a", {2, 2}}, {"b", {1, 2}}, {"b", {3, 2}}, {"b", {2, 1}}, {"b", {2, 3}}});
  CHECK_THROWS_AS(optimal_steps_letter(walled, path_for("!b U a")), Unreachable);
  CHECK(optimal_steps_letter(walled, path_for("F a")).steps == 4);

  auto two = optimal_steps_letter(small_layout(5, {0, 0}, {{"a", {0, 2}}, {"l", {4, 2}}}), path_for("F (a & F l)"));
  CHECK(two.steps == 2 + 1);
  CHECK(two.normalized == doctest::Approx(1.5));
}

TEST_CASE("optimal steps agree with the torus-distance chain oracle") {
  auto env = make_env("letter");
  const std::vector<std::vector<std::vector<std::string>>> chains = {
      {{"a"}}, {{"a"}, {"l"}}, {{"a", "b"}, {"k", "l"}}, {{"a"}, {"b"}, {"c"}, {"d"}},
      {{"a", "b"}, {"c", "d"}, {"e", "f"}, {"g", "h"}}};
  const std::vector<std::string> texts = {"F a", "F (a & F l)", "F ((a | b) & F (k | l))",
                                          "F (a & F (b & F (c & F d)))",
                                          "F ((a | b) & F ((c | d) & F ((e | f) & F (g | h))))"};
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    env->reset(seed);
    auto layout = LetterLayout::from_json(env->raw_state());
    for (std::size_t k = 0; k < texts.size(); ++k) {
      CAPTURE(texts[k]);
      CHECK(static_cast<int>(optimal_steps_letter(layout, parse(texts[k])).steps) == chain_optimum(layout, chains[k]));
    }
  }
}

TEST_CASE("bfs agent on F a reaches the nearest a in torus distance") {
  auto env = make_env("letter");
  BfsPlanner agent;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    env->reset(seed);
    auto layout = LetterLayout::from_json(env->raw_state());
    auto out = run_episode(*env, finite_spec("F a"), agent, seed);
    CHECK(out.verdict == Verdict::Satisfied);
    REQUIRE(out.steps_to_decision.has_value());
    CHECK(static_cast<int>(*out.steps_to_decision) == chain_optimum(layout, {{"a"}}));
  }
}

namespace {

class SeekYellow : public Agent {
 public:
  std::string name() const override { return "seek"; }
  void reset(const Env&, const EpisodeInfo&) override {}
  std::vector<Action> act(const Env& env, const std::vector<Observation>&, const SpecContext& ctx) override {
    const auto& z = dynamic_cast<const ZoneEnv&>(env);
    const auto& ag = z.agents()[0];
    double best = INFINITY;
    Vec2 to{};
    for (const auto& zone : z.zones()) {
      if (kZoneColors[static_cast<std::size_t>(zone.color)] != "y") continue;
      double d = std::hypot(zone.center.x - ag.pos.x, zone.center.y - ag.pos.y);
      if (d < best) {
        best = d;
        to = {zone.center.x - ag.pos.x, zone.center.y - ag.pos.y};
      }
    }
    (void)ctx;
    double err = std::remainder(std::atan2(to.y, to.x) - ag.heading, 2.0 * M_PI);
    return {{std::clamp(err / 0.2, -1.0, 1.0), std::abs(err) < 0.3 ? 1.0 : 0.0}};
  }
};

}  // namespace

TEST_CASE("entering a yellow zone violates G !y at the entry step") {
  auto env = make_env("zone-point");
  SeekYellow agent;
  auto prepared = prepare(finite_spec("G !y"), *env);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    nlohmann::json traj;
    EpisodeInfo info;
    info.seed = seed;
    EpisodeOptions options;
    options.trajectory = &traj;
    auto out = run_episode(*env, prepared, agent, info, options);
    CHECK(out.verdict == Verdict::Violated);
    auto trace = label_trace(traj);
    std::size_t first = 0;
    while (first < trace.size() && !trace[first].contains(Proposition("y"))) ++first;
    REQUIRE(first < trace.size());
    CHECK(out.steps_to_decision == first + 1);
    CHECK(out.length == first + 1);
  }
}

TEST_CASE("random agent runs out the evaluation horizon on a recurrence spec") {
  auto env = make_env("letter");
  RandomAgent agent;
  auto out = run_episode(*env, infinite_spec("G F a"), agent, 5, 300);
  CHECK(out.verdict == Verdict::Open);
  CHECK(out.length == 300);
  CHECK(!out.steps_to_decision.has_value());
  CHECK(env->horizon() == 75);
}

TEST_CASE("alphabet mismatch") {
  auto env = make_env("letter");
  CHECK_THROWS_AS(prepare(finite_spec("F b_0"), *env), AlphabetMismatch);
}

TEST_CASE("assignment domains follow exclusive groups") {
  auto letter = make_env("letter");
  auto a = compile(parse("F (a & F b)"));
  CHECK(domain_for(*letter, a).masks(a).size() == 3);
  auto multi = make_env("zone-multi");
  auto c = compile(parse("F (b_0 & b_1)"));
  CHECK(domain_for(*multi, c).masks(c).size() == 4);
  auto arm = make_env("arm-full");
  auto d = compile(parse("F (g_b & a_m & a_y)"));
  CHECK(domain_for(*arm, d).masks(d).size() == 2 * 4);
}

TEST_CASE("harness verdicts match progression and the monitor on the dumped trace") {
  auto env = make_env("letter");
  std::vector<std::unique_ptr<Agent>> agents;
  agents.push_back(std::make_unique<RandomAgent>());
  agents.push_back(std::make_unique<BfsPlanner>());
  for (const auto& spec : corpus_by_name("letter")) {
    auto prepared = prepare(spec, *env);
    for (auto& agent : agents) {
      for (std::size_t e = 0; e < 6; ++e) {
        nlohmann::json traj;
        EpisodeInfo info;
        info.seed = episode_seed(1, 0, e);
        EpisodeOptions options;
        options.trajectory = &traj;
        options.eval_horizon = 200;
        auto out = run_episode(*env, prepared, *agent, info, options);
        auto trace = label_trace(traj);
        CHECK(trace.size() == out.length);
        std::size_t last = 0;
        for (const auto& s : traj.at("steps")) {
          std::size_t v = s.at("accepting_visits").get<std::size_t>();
          CHECK(v >= last);
          last = v;
        }
        CHECK(last == out.accepting_visits);
        if (spec.horizon != HorizonKind::Finite) continue;
        auto ref = run_progression(spec.formula, trace);
        CHECK(ref.verdict == out.verdict);
        CHECK(ref.steps_to_decision == out.steps_to_decision);
        const MonitorStatus expect = out.verdict == Verdict::Satisfied   ? MonitorStatus::SatisfiedSink
                                     : out.verdict == Verdict::Violated ? MonitorStatus::Violated
                                                                         : MonitorStatus::Open;
        CHECK(out.monitor == expect);
      }
    }
  }
}

TEST_CASE("accepting visits freeze at violation") {
  fixture::SwitchEnv env(20);
  ScriptedAgent agent([](std::size_t t, const EpisodeInfo&) {
    return std::vector<Action>{{t < 5 ? static_cast<double>(1 + t % 2 * 0) : 2.0}};
  });
  SpecRecord spec = infinite_spec("G F a & G !b");
  auto out = run_episode(env, spec, agent, 0, 20);
  CHECK(out.verdict == Verdict::Violated);
  CHECK(out.steps_to_decision == 6);
  CHECK(out.accepting_visits == 5);
}

TEST_CASE("evaluate: fixture counts give exact rates") {
  auto fixture_agent = [] {
    return std::make_unique<ScriptedAgent>([](std::size_t t, const EpisodeInfo& info) {
      double act = 0.0;
      if (info.episode_index < 60 && t == 2) act = 1.0;
      if (info.episode_index >= 60 && info.episode_index < 80 && t == 4) act = 2.0;
      return std::vector<Action>{{act}};
    });
  };
  EvalConfig cfg;
  cfg.n_seeds = 5;
  cfg.n_episodes = 100;
  auto report = evaluate([] { return std::make_unique<fixture::SwitchEnv>(10); }, {finite_spec("!b U a", "fx")},
                         fixture_agent, cfg);
  REQUIRE(report.rows.size() == 5);
  for (const auto& row : report.rows) {
    CHECK(row.satisfied == 60);
    CHECK(row.violated == 20);
    CHECK(row.open == 20);
    CHECK(row.satisfied + row.violated + row.open == row.n_episodes);
    CHECK(row.eta_s() == 0.6);
    CHECK(row.mu() == 3.0);
    CHECK(row.mu_acc() == 60.0 / 80.0);
  }
  for (const auto& agg : report.aggregates()) {
    if (agg.metric == "eta_s") {
      CHECK(agg.mean == 0.6);
      CHECK(agg.stddev == 0.0);
    }
  }
  std::ostringstream csv;
  report.write_csv(csv);
  CHECK(csv.str().find("fx,IND,0,100,0.6,0.2,0.2,3,0.75\n") != std::string::npos);
}

TEST_CASE("evaluate: always satisfying and always timing out") {
  auto env_fn = [] { return std::make_unique<fixture::SwitchEnv>(10); };
  auto constant = [](double a) {
    return [a] { return std::make_unique<ScriptedAgent>([a](std::size_t, const EpisodeInfo&) { return std::vector<Action>{{a}}; }); };
  };
  EvalConfig cfg;
  cfg.n_seeds = 2;
  cfg.n_episodes = 10;
  auto sat = evaluate(env_fn, {finite_spec("F a")}, constant(1.0), cfg);
  for (const auto& r : sat.rows) {
    CHECK(r.eta_s() == 1.0);
    CHECK(r.eta_v() == 0.0);
    CHECK(r.eta_o() == 0.0);
  }
  auto timeout = evaluate(env_fn, {finite_spec("F a")}, constant(0.0), cfg);
  for (const auto& r : timeout.rows) {
    CHECK(r.eta_o() == 1.0);
    CHECK(!r.mu().has_value());
  }
  std::ostringstream csv;
  timeout.write_csv(csv);
  CHECK(csv.str().find(",1,none,") != std::string::npos);
}

TEST_CASE("evaluate is independent of the number of jobs") {
  auto env_fn = [] { return make_env("letter"); };
  auto agent_fn = [] { return make_agent("random"); };
  auto specs = corpus_by_name("letter_ind");
  EvalConfig cfg;
  cfg.n_seeds = 2;
  cfg.n_episodes = 6;
  cfg.record_trajectories = true;
  auto one = evaluate(env_fn, specs, agent_fn, cfg);
  cfg.jobs = 3;
  auto three = evaluate(env_fn, specs, agent_fn, cfg);
  std::ostringstream a, b;
  one.write_csv(a);
  three.write_csv(b);
  CHECK(a.str() == b.str());
  CHECK(one.trajectories == three.trajectories);
  CHECK(one.trajectories.size() == specs.size() * 12);
}

TEST_CASE("bfs planner on the complexity corpus") {
  auto env_fn = [] { return make_env("letter"); };
  auto agent_fn = [] { return make_agent("bfs"); };
  EvalConfig cfg;
  cfg.n_seeds = 2;
  cfg.n_episodes = 20;
  auto report = evaluate(env_fn, complexity_corpus(), agent_fn, cfg);
  for (const auto& r : report.rows) {
    CAPTURE(r.spec_id);
    CHECK(r.violated == 0);
    if (r.family == Family::ReachOnly) CHECK(r.satisfied == r.n_episodes);
  }
}

TEST_CASE("bfs steps are bounded below by the optimal steps oracle") {
  auto env = make_env("letter");
  BfsPlanner agent;
  std::size_t equal = 0, total = 0;
  for (const auto& spec : corpus_by_name("letter_reach_only")) {
    auto prepared = prepare(spec, *env);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      env->reset(seed);
      auto layout = LetterLayout::from_json(env->raw_state());
      auto best = optimal_steps_letter(layout, spec.formula);
      EpisodeInfo info;
      info.seed = seed;
      auto out = run_episode(*env, prepared, agent, info);
      REQUIRE(out.verdict == Verdict::Satisfied);
      CHECK(*out.steps_to_decision >= best.steps);
      equal += *out.steps_to_decision == best.steps;
      ++total;
    }
  }
  CHECK(equal == total);
}

TEST_CASE("random agent satisfies F a sometimes") {
  EvalConfig cfg;
  cfg.n_seeds = 1;
  cfg.n_episodes = 50;
  auto report = evaluate([] { return make_env("letter"); }, {finite_spec("F a")}, [] { return make_agent("random"); }, cfg);
  CHECK(report.rows[0].satisfied > 0);
}

TEST_CASE("greedy agent reaches zones and regions") {
  EvalConfig cfg;
  cfg.n_seeds = 1;
  cfg.n_episodes = 20;
  for (const std::string id : {"zone-point", "zone-car", "arm-grippers"}) {
    CAPTURE(id);
    auto report = evaluate([&] { return make_env(id); }, {finite_spec("!y U b"), finite_spec("F (m & F g)")},
                           [] { return make_agent("greedy"); }, cfg);
    for (const auto& r : report.rows) CHECK(r.satisfied >= 15);
  }
}

TEST_CASE("subgoal reward") {
  auto a = compile(parse("!y U b"));
  auto step = next_subgoal(a, initial_frontier(a), AssignmentDomain::exclusive());
  REQUIRE(step.has_value());
  CHECK(subgoal_reward(*step, {Proposition("b")}) == 1.0);
  CHECK(subgoal_reward(*step, {Proposition("y")}) == -1.0);
  CHECK(subgoal_reward(*step, {}) == 0.0);
  CHECK(subgoal_reward(*step, {Proposition("g")}) == 0.0);

  auto fa = compile(parse("F a"));
  SubgoalRewardWrapper env(std::make_unique<fixture::SwitchEnv>(5));
  env.set_subgoal(next_subgoal(fa, initial_frontier(fa), AssignmentDomain::all()));
  env.reset(0);
  CHECK(env.step(Action{0.0}).reward == 0.0);
  CHECK(env.step(Action{1.0}).reward == 1.0);
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.6) == "0.6");
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(std::nullopt) == "none");
  double x = 1.0 / 3.0;
  CHECK(std::stod(format_number(x)) == x);
}
