#include <doctest.h>

#include <deque>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "specbench/automaton.hpp"
#include "specbench/progression.hpp"
#include "specbench/semantics.hpp"
#include "specbench/syntax.hpp"

using namespace specbench;

namespace {

// Live = reaches an accepting state that lies on a cycle. Plain DFS per
// state, no SCC decomposition.
std::vector<char> dfs_live(const BuchiAutomaton& a) {
  const auto n = a.num_states();
  auto reach = [&](StateId from) {
    std::vector<char> seen(n, 0);
    std::vector<StateId> stack;
    for (const auto& e : a.out_edges(from)) stack.push_back(e.target);
    while (!stack.empty()) {
      StateId s = stack.back();
      stack.pop_back();
      if (seen[s]) continue;
      seen[s] = 1;
      for (const auto& e : a.out_edges(s)) stack.push_back(e.target);
    }
    return seen;  // states reachable in >= 1 step
  };
  std::vector<std::vector<char>> r(n);
  for (StateId s = 0; s < n; ++s) r[s] = reach(s);
  std::vector<char> good(n, 0);
  for (StateId s = 0; s < n; ++s) good[s] = a.is_accepting(s) && r[s][s];
  std::vector<char> live(n, 0);
  for (StateId s = 0; s < n; ++s) {
    live[s] = good[s];
    for (StateId t = 0; t < n && !live[s]; ++t) live[s] = r[s][t] && good[t];
  }
  return live;
}

bool is_cosafe(Formula f) {
  switch (f.op()) {
    case Op::Always: return false;
    case Op::True:
    case Op::False:
    case Op::Atom: return true;
    default:
      if (f.is_unary()) return is_cosafe(f.lhs());
      return is_cosafe(f.lhs()) && is_cosafe(f.rhs());
  }
}

std::size_t bfs_distance_to_target(const BuchiAutomaton& a, const AssignmentDomain& d) {
  auto masks = d.masks(a);
  auto paths = extract_subgoal_sequences(a, 1, d);
  // Independent BFS over usable edges.
  std::vector<int> dist(a.num_states(), -1);
  std::deque<StateId> q;
  for (StateId s : a.initial()) {
    dist[s] = 0;
    q.push_back(s);
  }
  std::vector<char> target(a.num_states(), 0);
  auto live = dfs_live(a);
  for (StateId s = 0; s < a.num_states(); ++s) {
    // accepting and on a cycle
    bool cyc = false;
    std::vector<char> seen(a.num_states(), 0);
    std::vector<StateId> st;
    for (const auto& e : a.out_edges(s)) st.push_back(e.target);
    while (!st.empty()) {
      StateId u = st.back();
      st.pop_back();
      if (seen[u]) continue;
      seen[u] = 1;
      if (u == s) cyc = true;
      for (const auto& e : a.out_edges(u)) st.push_back(e.target);
    }
    target[s] = a.is_accepting(s) && cyc && live[s];
  }
  while (!q.empty()) {
    StateId u = q.front();
    q.pop_front();
    if (target[u]) return static_cast<std::size_t>(dist[u]);
    for (const auto& e : a.out_edges(u)) {
      bool usable = false;
      for (auto m : masks) usable = usable || e.guard.satisfied_by(m);
      if (!usable || !live[e.target] || dist[e.target] >= 0) continue;
      dist[e.target] = dist[u] + 1;
      q.push_back(e.target);
    }
  }
  return SIZE_MAX;
}

}  // namespace

TEST_CASE("F a compiles to the textbook automaton") {
  auto a = compile(parse("F a"));
  REQUIRE(a.num_states() == 2);
  StateId init = a.initial().at(0);
  CHECK_FALSE(a.is_accepting(init));
  CHECK(a.accepting_states().size() == 1);
  CHECK(a.dead_states().empty());
  StateId sink = a.accepting_states()[0];
  CHECK(a.is_sat_sink(sink));
  CHECK(a.state(sink).residual() == Formula::tt());
  bool self_not_a = false, to_sink_on_a = false;
  for (const auto& e : a.out_edges(init)) {
    if (e.target == init && a.guard_text(e.guard) == "!a") self_not_a = true;
    if (e.target == sink && a.guard_text(e.guard) == "a") to_sink_on_a = true;
  }
  CHECK(self_not_a);
  CHECK(to_sink_on_a);
  CHECK(a.out_edges(init).size() == 2);
}

TEST_CASE("G a") {
  auto a = compile(parse("G a"));
  REQUIRE(a.num_states() == 1);
  CHECK(a.is_accepting(0));
  REQUIRE(a.out_edges(0).size() == 1);
  CHECK(a.guard_text(a.out_edges(0)[0].guard) == "a");
  auto step = step_monitor(a, initial_frontier(a), make_labels({}));
  CHECK(step.status == MonitorStatus::Violated);
}

TEST_CASE("constants") {
  auto f = compile(Formula::ff());
  CHECK(nonempty_states(f).empty());
  CHECK(f.language_empty());
  auto t = compile(Formula::tt());
  CHECK(t.num_states() == 1);
  CHECK(t.is_sat_sink(0));
  CHECK(t.is_accepting(0));
  auto fa = compile(parse("F a"));
  CHECK(nonempty_states(fa).size() == fa.num_states());
}

TEST_CASE("GF a & GF b agrees with the oracle") {
  Formula f = parse("G F a & G F b");
  auto a = compile(f);
  CHECK(a.acceptance_sets() == 2);
  oracle::for_each_lasso({"a", "b"}, 2, 3, [&](const LassoTrace& w) {
    REQUIRE(accepts(a, w) == oracle::holds(f, w));
  });
}

TEST_CASE("accepts examples") {
  auto fa = compile(parse("F a"));
  CHECK(accepts(fa, LassoTrace{{make_labels({"a"})}, {make_labels({})}}));
  auto ga = compile(parse("G a"));
  CHECK_FALSE(accepts(ga, LassoTrace{{make_labels({"a"})}, {make_labels({})}}));
  Formula rec = parse("G F b & G F g & G !(y | m)");
  auto r = compile(rec);
  LassoTrace w{{}, {make_labels({"b"}), make_labels({"g"})}};
  CHECK(accepts(r, w));
  CHECK(holds_on_lasso(rec, w));
  LassoTrace bad{{}, {make_labels({"b"}), make_labels({"g", "y"})}};
  CHECK_FALSE(accepts(r, bad));
}

TEST_CASE("language equivalence on random NNF formulas") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> atoms{"a", "b", "c"};
  for (int i = 0; i < 60; ++i) {
    Formula f = oracle::random_formula(rng, atoms, 4, true);
    auto a = compile(f);
    CAPTURE(format(f));
    oracle::for_each_lasso(atoms, 1, 2, [&](const LassoTrace& w) {
      REQUIRE(accepts(a, w) == oracle::holds(f, w));
    });
  }
}

TEST_CASE("language equivalence including X and non-NNF input") {
  std::mt19937_64 rng(31);
  const std::vector<std::string> atoms{"a", "b"};
  for (int i = 0; i < 100; ++i) {
    Formula f = oracle::random_formula(rng, atoms, 5, false, true);
    auto a = compile(f);
    CAPTURE(format(f));
    oracle::for_each_lasso(atoms, 2, 2, [&](const LassoTrace& w) {
      REQUIRE(accepts(a, w) == oracle::holds(f, w));
    });
  }
}

TEST_CASE("dead states match the DFS oracle") {
  std::mt19937_64 rng(41);
  const std::vector<std::string> atoms{"a", "b", "c"};
  std::vector<Formula> fs{parse("a & (!a U b)"), parse("G a & F !a"), parse("F G a & G F !a")};
  for (int i = 0; i < 100; ++i) fs.push_back(oracle::random_formula(rng, atoms, 4, true));
  for (Formula f : fs) {
    auto a = compile(f);
    auto live = dfs_live(a);
    for (StateId s = 0; s < a.num_states(); ++s) REQUIRE(a.is_dead(s) == !live[s]);
    for (StateId s : a.accepting_states()) {
      if (a.is_dead(s)) continue;
    }
    // Recomputing on the live set changes nothing.
    auto ne = nonempty_states(a);
    for (StateId s : ne) REQUIRE(live[s]);
  }
  CHECK(compile(parse("G a & F !a")).language_empty());
}

TEST_CASE("monitor examples") {
  auto fa = compile(parse("F a"));
  auto s1 = step_monitor(fa, initial_frontier(fa), make_labels({"a"}));
  CHECK(s1.status == MonitorStatus::SatisfiedSink);
  CHECK(s1.accepting_hit);
  REQUIRE(s1.frontier.size() == 1);
  CHECK(fa.is_sat_sink(s1.frontier[0]));

  auto gy = compile(parse("G !y"));
  auto s2 = step_monitor(gy, initial_frontier(gy), make_labels({"y"}));
  CHECK(s2.status == MonitorStatus::Violated);
  CHECK(s2.frontier.empty());
  CHECK_FALSE(s2.accepting_hit);

  auto rec = compile(parse("G F b & G !y"));
  Frontier fr = initial_frontier(rec);
  std::vector<bool> hits;
  for (auto sigma : {make_labels({"b"}), make_labels({}), make_labels({"b"})}) {
    auto st = step_monitor(rec, fr, sigma);
    CHECK(st.status == MonitorStatus::Open);
    CHECK(st.frontier.size() == 1);
    hits.push_back(st.accepting_hit);
    fr = st.frontier;
  }
  CHECK(hits == std::vector<bool>{true, false, true});

  // Propositions outside the alphabet are ignored.
  auto s3 = step_monitor(fa, initial_frontier(fa), make_labels({"z"}));
  CHECK(s3.status == MonitorStatus::Open);
}

TEST_CASE("monitor agrees with progression on co-safe formulas") {
  std::mt19937_64 rng(53);
  const std::vector<std::string> atoms{"a", "b", "c"};
  auto symbols = oracle::power_set(atoms);
  int tested = 0;
  while (tested < 150) {
    Formula f = nnf(oracle::random_formula(rng, atoms, 4, true));
    if (!is_cosafe(f)) continue;
    ++tested;
    auto a = compile(f);
    for (int t = 0; t < 20; ++t) {
      Formula cur = simplify(f);
      Frontier fr = initial_frontier(a);
      MonitorStatus status = fr.empty() ? MonitorStatus::Violated : MonitorStatus::Open;
      auto expect = [&](Verdict v) {
        switch (v) {
          case Verdict::Satisfied: return MonitorStatus::SatisfiedSink;
          case Verdict::Violated: return MonitorStatus::Violated;
          default: return MonitorStatus::Open;
        }
      };
      CAPTURE(format(f));
      for (int k = 0; k < 8 && status != MonitorStatus::Violated; ++k) {
        if (verdict_of(cur) != Verdict::Open) break;
        const auto& sigma = symbols[rng() % symbols.size()];
        cur = progress(cur, sigma);
        auto st = step_monitor(a, fr, sigma);
        fr = st.frontier;
        status = st.status;
        REQUIRE(status == expect(verdict_of(cur)));
      }
    }
  }
}

TEST_CASE("subgoal extraction examples") {
  auto a = compile(parse("F(a & F l)"));
  auto paths = extract_subgoal_sequences(a, 5, AssignmentDomain::exclusive());
  REQUIRE(!paths.empty());
  auto& p = paths[0];
  REQUIRE(p.length() == 2);
  CHECK(p.steps[0].reach == std::vector<LabelSet>{make_labels({"a"})});
  CHECK(p.steps[0].avoid.empty());
  CHECK(p.steps[1].reach == std::vector<LabelSet>{make_labels({"l"})});
  CHECK(p.steps[1].avoid.empty());
  CHECK(paths.size() == 1);

  auto b = compile(parse("!a U (b & (!c U d))"));
  auto bp = extract_subgoal_sequences(b, 5, AssignmentDomain::exclusive());
  REQUIRE(bp[0].length() == 2);
  CHECK(bp[0].steps[0].reach == std::vector<LabelSet>{make_labels({"b"})});
  CHECK(bp[0].steps[0].avoid == std::vector<LabelSet>{make_labels({"a"})});
  CHECK(bp[0].steps[1].reach == std::vector<LabelSet>{make_labels({"d"})});
  CHECK(bp[0].steps[1].avoid == std::vector<LabelSet>{make_labels({"c"})});
  // Guards behind the reach sets really move along the compiled automaton.
  for (const auto& st : bp[0].steps) {
    for (const auto& r : st.reach) {
      auto m = step_monitor(b, {st.from}, r);
      CHECK(std::find(m.frontier.begin(), m.frontier.end(), st.to) != m.frontier.end());
      CHECK_FALSE(st.avoid_matches(r));
    }
  }

  auto g = compile(parse("G a"));
  auto gp = extract_subgoal_sequences(g, 3, AssignmentDomain::exclusive());
  REQUIRE(gp[0].length() == 0);
  CHECK(gp[0].final_avoid == std::vector<LabelSet>{make_labels({})});

  CHECK_THROWS_AS(extract_subgoal_sequences(compile(Formula::ff()), 3), NoAcceptingPath);
}

TEST_CASE("subgoal paths are shortest first") {
  std::mt19937_64 rng(61);
  const std::vector<std::string> atoms{"a", "b", "c"};
  int tested = 0;
  for (int i = 0; i < 200 && tested < 80; ++i) {
    Formula f = oracle::random_formula(rng, atoms, 4, true);
    auto a = compile(f);
    if (a.language_empty()) continue;
    ++tested;
    for (auto d : {AssignmentDomain::all(), AssignmentDomain::exclusive()}) {
      std::vector<SubgoalPath> paths;
      try {
        paths = extract_subgoal_sequences(a, 6, d);
      } catch (const NoAcceptingPath&) {
        continue;
      }
      for (std::size_t k = 1; k < paths.size(); ++k) {
        REQUIRE(paths[k - 1].length() <= paths[k].length());
      }
      REQUIRE(paths[0].length() == bfs_distance_to_target(a, d));
    }
  }
  CHECK(tested > 20);
}

TEST_CASE("next_subgoal") {
  auto a = compile(parse("F(a & F l)"));
  auto d = AssignmentDomain::exclusive();
  auto first = next_subgoal(a, initial_frontier(a), d);
  REQUIRE(first);
  CHECK(first->reach == std::vector<LabelSet>{make_labels({"a"})});
  auto fr = step_monitor(a, initial_frontier(a), make_labels({"a"})).frontier;
  auto second = next_subgoal(a, fr, d);
  REQUIRE(second);
  CHECK(second->reach == std::vector<LabelSet>{make_labels({"l"})});

  auto rec = compile(parse("G F b & G F g & G !(y | m)"));
  auto r1 = next_subgoal(rec, initial_frontier(rec), d);
  REQUIRE(r1);
  CHECK(r1->reach_matches(make_labels({"b"})));
  CHECK(r1->avoid_matches(make_labels({"y"})));
  CHECK(r1->avoid_matches(make_labels({"m"})));

  auto g = compile(parse("G !y"));
  auto hold = next_subgoal(g, initial_frontier(g), d);
  REQUIRE(hold);
  CHECK(hold->reach.empty());
  CHECK(hold->avoid == std::vector<LabelSet>{make_labels({"y"})});
}

TEST_CASE("dump format") {
  auto a = compile(parse("F a"));
  std::ostringstream out;
  write_dump(out, a);
  CHECK(out.str() == "state 0\nstate 1 accepting sink\nedge 0 0 !a\nedge 0 1 a\nedge 1 1 true\n");
}

TEST_CASE("state cap") {
  std::vector<Formula> parts;
  for (char c = 'a'; c <= 'j'; ++c) parts.push_back(make_always(make_eventually(Formula::atom(std::string(1, c)))));
  CHECK_THROWS_AS(compile(make_and(parts), CompileOptions{50}), CompileBudgetExceeded);
}
