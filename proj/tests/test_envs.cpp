#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "env_oracles.hpp"
#include "specbench/arm_env.hpp"
#include "specbench/letter_world.hpp"
#include "specbench/zone_env.hpp"

using namespace specbench;

TEST_CASE("letter placement") {
  LetterWorld env;
  auto r = env.reset(0);
  std::map<int, int> counts;
  int occupied = 0;
  for (int v : env.current_layout().letters) {
    if (v >= 0) {
      ++counts[v];
      ++occupied;
    }
  }
  CHECK(occupied == 24);
  CHECK(counts.size() == 12);
  for (auto [k, n] : counts) CHECK(n == 2);
  CHECK(env.current_layout().letter_at(env.agent()) == -1);
  CHECK(r.propositions.empty());
  CHECK(env.alphabet().size() == 12);
}

TEST_CASE("letter wrap and actions") {
  CHECK(wrap_move({3, 0}, kLeft, 7).col == 6);
  CHECK(wrap_move({3, 6}, kRight, 7).col == 0);
  CHECK(wrap_move({0, 2}, kUp, 7).row == 6);
  CHECK(wrap_move({6, 2}, kDown, 7).row == 0);
  CHECK(wrap_move({3, 3}, kUp, 7) == Cell{2, 3});

  LetterWorld env;
  env.reset(5);
  CHECK_THROWS_AS(env.step(Action{4}), ActionOutOfRange);
  CHECK_THROWS_AS(env.step(Action{1.5}), ActionOutOfRange);
  CHECK_THROWS_AS(env.step(Action{-1}), ActionOutOfRange);
  for (int i = 0; i < 74; ++i) {
    auto s = env.step(Action{static_cast<double>(i % 4)});
    CHECK_FALSE(s.timeout);
  }
  auto last = env.step(Action{0});
  CHECK(last.timeout);
  CHECK(last.step == 75);
  CHECK_THROWS_AS(env.step(Action{0}), SteppedAfterTerminal);
}

TEST_CASE("letter occupancy and observation decomposition") {
  LetterWorld env;
  auto r = env.reset(9);
  auto letters = env.current_layout().letters;
  auto layout = env.layout();
  CHECK(r.obs[0].s_ap.size() == layout.s_ap_size());
  CHECK(r.obs[0].s_not_ap.size() == layout.s_not_ap_size());
  CHECK(layout.s_ap_size() == 49 * 12);
  auto s_ap = r.obs[0].s_ap;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 60; ++i) {
    auto s = env.step(Action{static_cast<double>(rng() % 4)});
    CHECK(env.current_layout().letters == letters);
    CHECK(s.obs[0].s_ap == s_ap);
    Cell a = env.agent();
    CHECK((a.row >= 0 && a.row < 7 && a.col >= 0 && a.col < 7));
    auto decoded = LetterWorld::decode(s.obs[0], env.config());
    CHECK(decoded.agent == a);
    CHECK(decoded.letters == letters);
  }
}

TEST_CASE("letter partial observation window") {
  LetterWorldConfig c;
  c.partial_obs = true;
  LetterWorld env(c);
  env.reset(3);
  auto layout = env.layout();
  CHECK(layout.s_ap_size() == 25 * 12);
  CHECK(layout.s_not_ap_size() == 0);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 40; ++i) {
    auto s = env.step(Action{static_cast<double>(rng() % 4)});
    // Window center is the agent's own cell.
    int here = env.current_layout().letter_at(env.agent());
    for (int k = 0; k < 12; ++k) {
      CHECK(s.obs[0].s_ap[static_cast<std::size_t>(12 * 12 + k)] == (k == here ? 1.0 : 0.0));
    }
    // Cell one row up, wrapped.
    Cell up = wrap_move(env.agent(), kUp, 7);
    int above = env.current_layout().letter_at(up);
    for (int k = 0; k < 12; ++k) {
      CHECK(s.obs[0].s_ap[static_cast<std::size_t>(7 * 12 + k)] == (k == above ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("letter config errors") {
  LetterWorldConfig c;
  c.grid_size = 4;
  CHECK_THROWS_AS(LetterWorld{c}, ConfigError);
  CHECK_THROWS_AS(make_env("letter", {{"grid_size", "x"}}), ConfigError);
  CHECK_THROWS_AS(make_env("letter", {{"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(make_env("nope"), ConfigError);
}

TEST_CASE("determinism across instances") {
  for (const auto& id : env_ids()) {
    CAPTURE(id);
    auto a = make_env(id);
    auto b = make_env(id);
    auto ra = a->reset(1234);
    auto rb = b->reset(1234);
    REQUIRE(a->raw_state().dump() == b->raw_state().dump());
    REQUIRE(ra.obs[0].s_ap == rb.obs[0].s_ap);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300 && !a->done(); ++i) {
      std::vector<Action> joint;
      for (std::size_t k = 0; k < a->n_agents(); ++k) joint.push_back(oracle::random_action(rng, a->action_space()));
      auto sa = a->step(joint);
      auto sb = b->step(joint);
      REQUIRE(sa.obs.size() == sb.obs.size());
      for (std::size_t k = 0; k < sa.obs.size(); ++k) {
        REQUIRE(sa.obs[k].s_ap == sb.obs[k].s_ap);
        REQUIRE(sa.obs[k].s_not_ap == sb.obs[k].s_not_ap);
      }
      REQUIRE(sa.propositions == sb.propositions);
      REQUIRE(sa.timeout == sb.timeout);
    }
    auto c = make_env(id);
    c->reset(1235);
    CHECK(c->raw_state().dump() != a->raw_state().dump());
  }
}

TEST_CASE("zone placement invariants") {
  ZoneEnv env;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto r = env.reset(seed);
    CHECK(r.propositions.empty());
    const auto& z = env.zones();
    REQUIRE(z.size() == 8);
    for (std::size_t i = 0; i < z.size(); ++i) {
      for (std::size_t j = i + 1; j < z.size(); ++j) {
        CHECK(std::hypot(z[i].center.x - z[j].center.x, z[i].center.y - z[j].center.y) >= 0.6);
      }
      CHECK(std::abs(z[i].center.x) <= 2.2);
      CHECK(std::abs(z[i].center.y) <= 2.2);
    }
  }
  ZoneConfig tight;
  tight.zone_radius = 1.2;
  ZoneEnv bad(tight);
  CHECK_THROWS_AS(bad.reset(0), PlacementFailure);
}

TEST_CASE("dynamic zones do not perturb placement") {
  ZoneConfig dyn;
  dyn.dynamic_zones = 3;
  ZoneEnv a, b(dyn);
  a.reset(77);
  b.reset(77);
  for (std::size_t i = 0; i < a.zones().size(); ++i) {
    CHECK(a.zones()[i].center.x == b.zones()[i].center.x);
    CHECK(a.zones()[i].center.y == b.zones()[i].center.y);
  }
  CHECK(a.agents()[0].pos.x == b.agents()[0].pos.x);
  CHECK(b.zones()[2].dynamic);
  CHECK_FALSE(b.zones()[3].dynamic);
  CHECK(b.exclusive_groups().empty());
  CHECK(a.exclusive_groups().size() == 1);
}

TEST_CASE("point and car kinematics") {
  ZoneEnv env;
  env.reset(0);
  env.set_state({}, {ZoneAgent{{0, 0}, 0.0}});
  env.step(Action{0.0, 1.0});
  CHECK(env.agents()[0].pos.x == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(env.agents()[0].pos.y == 0.0);

  env.set_state({}, {ZoneAgent{{0, 0}, 0.0}});
  env.step(Action{1.0, 1.0});
  CHECK(env.agents()[0].heading == doctest::Approx(0.2));
  CHECK(env.agents()[0].pos.x == doctest::Approx(0.1 * std::cos(0.2)));
  CHECK(env.agents()[0].pos.y == doctest::Approx(0.1 * std::sin(0.2)));

  ZoneConfig cc;
  cc.robot = Robot::Car;
  ZoneEnv car(cc);
  car.reset(0);
  car.set_state({}, {ZoneAgent{{0, 0}, 0.0}});
  car.step(Action{1.0, 1.0});
  CHECK(car.agents()[0].pos.x == doctest::Approx(0.1));
  CHECK(car.agents()[0].heading == 0.0);
  car.set_state({}, {ZoneAgent{{0, 0}, 0.0}});
  car.step(Action{-1.0, 1.0});
  CHECK(car.agents()[0].pos.x == 0.0);
  CHECK(car.agents()[0].heading == doctest::Approx(1.0));  // (2 / 0.2) * 0.1

  // Walls clamp without bouncing.
  env.set_state({}, {ZoneAgent{{2.45, 0}, 0.0}});
  env.step(Action{0.0, 1.0});
  CHECK(env.agents()[0].pos.x == 2.5);
  env.step(Action{0.0, 1.0});
  CHECK(env.agents()[0].pos.x == 2.5);
  CHECK_THROWS_AS(env.step(Action{0.0, 1.5}), ActionOutOfRange);
  CHECK_THROWS_AS(env.step(Action{0.0}), ActionOutOfRange);
}

TEST_CASE("lidar analytic placements") {
  const double r = 0.3, range = 3.0;
  const int bins = 16;
  const double sector = 2 * std::numbers::pi / bins;
  for (double heading : {0.0, 0.7, -2.1, 3.0}) {
    for (int k = 0; k < bins; ++k) {
      const double a = heading + (k + 0.5) * sector;
      Disc d{{1.3 * std::cos(a), 1.3 * std::sin(a)}, r};
      auto scan = lidar_scan({0, 0}, heading, {d}, bins, range);
      CHECK(std::abs(scan[static_cast<std::size_t>(k)] - 2.0 / 3.0) <= 1e-9);
    }
  }
  auto empty = lidar_scan({0, 0}, 0.0, {}, bins, range);
  CHECK(empty == std::vector<double>(16, 0.0));

  // A zone behind the agent shows up in the rear bins only.
  Disc behind{{-1.5, 0.0}, r};
  auto scan = lidar_scan({0, 0}, 0.0, {behind}, bins, range);
  CHECK(scan[0] == 0.0);
  CHECK(scan[15] == 0.0);
  CHECK(scan[7] > 0.0);
  CHECK(scan[8] > 0.0);
  // Rotating the agent by pi moves it to the front bins.
  auto turned = lidar_scan({0, 0}, std::numbers::pi, {behind}, bins, range);
  CHECK(turned[0] > 0.0);
  CHECK(turned[15] > 0.0);
  CHECK(turned[7] == 0.0);

  // Inside a zone every ray reads 1.
  auto inside = lidar_scan({0, 0}, 0.0, {Disc{{0.1, 0.0}, r}}, bins, range);
  CHECK(inside == std::vector<double>(16, 1.0));

  // Random placements against the perpendicular-foot oracle.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2.5, 2.5), ang(-3.14, 3.14);
  for (int i = 0; i < 2000; ++i) {
    double px = u(rng), py = u(rng), h = ang(rng), cx = u(rng), cy = u(rng);
    auto s = lidar_scan({px, py}, h, {Disc{{cx, cy}, r}}, bins, range);
    for (int k = 0; k < bins; ++k) {
      double expect = oracle::lidar_reading(px, py, h + (k + 0.5) * sector, cx, cy, r, range);
      REQUIRE(std::abs(s[static_cast<std::size_t>(k)] - expect) <= 1e-9);
    }
  }
}

TEST_CASE("dynamic zone reflection") {
  const double lim = 2.5 - 0.3;
  std::vector<Zone> zones{{0, {lim - 0.01, 0.0}, {0.2, 0.0}, true}, {1, {0.0, 0.0}, {0.0, 0.0}, false}};
  advance_dynamic_zones(zones, 0.1, 2.5, 0.3);
  CHECK(zones[0].velocity.x == -0.2);
  CHECK(zones[0].center.x == doctest::Approx(lim - 0.01));
  CHECK(zones[1].center.x == 0.0);

  std::vector<Zone> free{{0, {0.0, 0.0}, {0.2, 0.0}, true}};
  advance_dynamic_zones(free, 0.1, 2.5, 0.3);
  CHECK(std::abs(free[0].center.x - 0.02) <= 1e-15);

  std::vector<Zone> z{{0, {0.3, -0.4}, {0.2 * std::cos(1.1), 0.2 * std::sin(1.1)}, true}};
  for (int i = 0; i < 10000; ++i) {
    advance_dynamic_zones(z, 0.1, 2.5, 0.3);
    REQUIRE(std::abs(std::hypot(z[0].velocity.x, z[0].velocity.y) - 0.2) <= 1e-9);
    REQUIRE(std::abs(z[0].center.x) <= lim);
    REQUIRE(std::abs(z[0].center.y) <= lim);
  }
}

TEST_CASE("multi-agent labels are indexed") {
  auto env = make_env("zone-multi");
  CHECK(env->n_agents() == 2);
  for (const auto& p : env->alphabet()) CHECK(p.name().find('_') != std::string::npos);
  auto* z = dynamic_cast<ZoneEnv*>(env.get());
  z->reset(3);
  auto zones = z->zones();
  z->set_state(zones, {ZoneAgent{zones[0].center, 0.0}, ZoneAgent{zones[2].center, 0.0}});
  CHECK(z->labels() == make_labels({"b_0", "g_1"}));
  auto r = z->step({Action{0, 0}, Action{0, 0}});
  CHECK(r.propositions == make_labels({"b_0", "g_1"}));
  CHECK(r.obs.size() == 2);
  CHECK(r.obs[0].s_ap.size() == z->layout().s_ap_size());
  CHECK(z->layout().s_ap_size() == 5 * 16);
  CHECK(z->exclusive_groups().size() == 2);
}

TEST_CASE("arm placement and labels") {
  ArmEnv env;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto r = env.reset(seed);
    CHECK(r.propositions.empty());
    for (const auto& c : env.regions()) {
      for (double v : c) CHECK(std::abs(v) <= 0.5);
    }
  }
  auto regions = env.regions();
  Vec3 ee{regions[0][0] + 0.07, regions[0][1], regions[0][2]};
  env.set_state(regions, ee);
  CHECK(env.labels().contains(Proposition("b")));
  env.set_state(regions, {regions[0][0] + 0.081, regions[0][1], regions[0][2]});
  CHECK_FALSE(env.labels().contains(Proposition("b")));

  ArmConfig full;
  full.mode = ArmMode::GrippersArm;
  ArmEnv arm(full);
  arm.reset(1);
  CHECK(arm.alphabet().size() == 8);
  // A sphere straddling the arm segment but away from the end effector.
  std::vector<Vec3> regs{{0.0, 0.0, -0.1}, {0.4, 0.4, 0.4}, {-0.4, 0.4, 0.4}, {0.4, -0.4, 0.4}};
  arm.set_state(regs, {0.0, 0.0, 0.3});
  CHECK(arm.labels() == make_labels({"a_b"}));
  arm.set_state(regs, {0.0, 0.0, -0.1});
  CHECK(arm.labels() == make_labels({"a_b", "g_b"}));
  // Step moves at most max_speed per axis and clamps to the box.
  arm.set_state(regs, {0.49, 0.0, 0.0});
  arm.step(Action{1.0, -1.0, 0.5});
  CHECK(arm.end_effector()[0] == 0.5);
  CHECK(arm.end_effector()[1] == doctest::Approx(-0.05));
  CHECK(arm.end_effector()[2] == doctest::Approx(0.025));
}

TEST_CASE("range bearing") {
  auto rb = range_bearing({0, 0, 0}, {0.3, 0, 0});
  CHECK(rb.distance == doctest::Approx(0.3));
  CHECK(rb.direction == Vec3{1, 0, 0});
  auto zero = range_bearing({0.1, 0.2, 0.3}, {0.1, 0.2, 0.3});
  CHECK(zero.distance == 0.0);
  CHECK(zero.direction == Vec3{0, 0, 0});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 10000; ++i) {
    auto r = range_bearing({u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)});
    double n = std::sqrt(r.direction[0] * r.direction[0] + r.direction[1] * r.direction[1] +
                         r.direction[2] * r.direction[2]);
    REQUIRE(std::abs(n - 1.0) <= 1e-12);
  }
}

TEST_CASE("segment sphere intersection cases") {
  CHECK(segment_intersects_sphere({0, 0, 0}, {1, 0, 0}, {0.5, 0.1, 0}, 0.1));   // tangent
  CHECK_FALSE(segment_intersects_sphere({0, 0, 0}, {1, 0, 0}, {0.5, 0.25, 0}, 0.125));
  CHECK(segment_intersects_sphere({0, 0, 0}, {1, 0, 0}, {0.5, 0.0, 0}, 0.1));   // crossing
  CHECK_FALSE(segment_intersects_sphere({0, 0, 0}, {1, 0, 0}, {1.5, 0, 0}, 0.25));  // beyond end
  CHECK(segment_intersects_sphere({0, 0, 0}, {1, 0, 0}, {1.25, 0, 0}, 0.25));   // touches end
  CHECK(segment_intersects_sphere({0, 0, 0}, {0, 0, 0}, {0, 0, 0.5}, 0.5));     // degenerate
  CHECK_FALSE(segment_intersects_sphere({0, 0, 0}, {0, 0, 0}, {0, 0, 0.75}, 0.5));
  auto p = closest_point_on_segment({0, 0, 0}, {2, 0, 0}, {1, 1, 0});
  CHECK(p == Vec3{1, 0, 0});
}

TEST_CASE("label soundness") {
  for (const auto& id : env_ids()) {
    CAPTURE(id);
    auto env = make_env(id);
    CHECK(oracle::label_soundness(*env, 20000, 99) == 0);
  }
  ZoneConfig dyn;
  dyn.dynamic_zones = 8;
  ZoneEnv z(dyn);
  CHECK(oracle::label_soundness(z, 20000, 7) == 0);
}
