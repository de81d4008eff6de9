#include <doctest.h>

#include <cmath>
#include <vector>

#include "botsim/navigator.hpp"
#include "botsim/sensor.hpp"

using namespace botsim;

namespace {

ScanVector open_scan() { return {450.0, 450.0, 450.0, 450.0}; }

PlannerFn teacher_planner(const Thresholds& th) {
  return [th](const ScanVector& s) { return teacher_decide(s, th); };
}

}  // namespace

TEST_CASE("controller holds the previous command until the planner replies") {
  NavConfig cfg;  // delay 2
  TwoTierController ctl(cfg, teacher_planner(cfg.thresholds));

  auto t0 = ctl.decide(open_scan(), 0);
  CHECK(t0.first == Command::stop);
  CHECK(t0.second == Source::hold);
  auto t1 = ctl.decide(open_scan(), 1);
  CHECK(t1.first == Command::stop);
  CHECK(t1.second == Source::hold);
  auto t2 = ctl.decide(open_scan(), 2);
  CHECK(t2.first == Command::front);
  CHECK(t2.second == Source::planner);
}

TEST_CASE("one request in flight at a time sets the reply cadence") {
  NavConfig cfg;
  TwoTierController ctl(cfg, teacher_planner(cfg.thresholds));
  std::vector<Source> sources;
  for (long t = 0; t < 9; ++t) sources.push_back(ctl.decide(open_scan(), t).second);
  // replies land every delay+1 ticks: 2, 5, 8
  CHECK(sources == std::vector<Source>{Source::hold, Source::hold, Source::planner,
                                       Source::hold, Source::hold, Source::planner,
                                       Source::hold, Source::hold, Source::planner});
}

TEST_CASE("zero delay answers on the same tick") {
  NavConfig cfg;
  cfg.planner_delay_ticks = 0;
  TwoTierController ctl(cfg, teacher_planner(cfg.thresholds));
  auto t0 = ctl.decide(open_scan(), 0);
  CHECK(t0.first == Command::front);
  CHECK(t0.second == Source::planner);
}

TEST_CASE("critical scan fires the reflex on the same tick") {
  NavConfig cfg;
  TwoTierController ctl(cfg, teacher_planner(cfg.thresholds));
  ScanVector danger{4.0, 100.0, 100.0, 100.0};
  auto r = ctl.decide(danger, 0);
  CHECK(r.first == Command::back);
  CHECK(r.second == Source::reflex);
}

TEST_CASE("critical event discards the pending planner reply") {
  NavConfig cfg;
  TwoTierController ctl(cfg, teacher_planner(cfg.thresholds));
  ctl.decide(open_scan(), 0);
  ctl.decide(open_scan(), 1);
  // the reply for tick 0 would land now, but the emergency wins
  ScanVector danger{4.0, 100.0, 100.0, 100.0};
  auto t2 = ctl.decide(danger, 2);
  CHECK(t2.first == Command::back);
  CHECK(t2.second == Source::reflex);
  // next clear tick starts a fresh exchange: hold back, answer at t+delay
  auto t3 = ctl.decide(open_scan(), 3);
  CHECK(t3.first == Command::back);
  CHECK(t3.second == Source::hold);
  auto t4 = ctl.decide(open_scan(), 4);
  CHECK(t4.second == Source::hold);
  auto t5 = ctl.decide(open_scan(), 5);
  CHECK(t5.first == Command::front);
  CHECK(t5.second == Source::planner);
}

TEST_CASE("planner sees wire-quantized scans") {
  NavConfig cfg;
  cfg.planner_delay_ticks = 0;
  ScanVector seen;
  PlannerFn capture = [&seen](const ScanVector& s) {
    seen = s;
    return Command::front;
  };
  TwoTierController ctl(cfg, capture);
  ctl.decide({123.456789, 99.994, 5.004, 449.996}, 0);
  CHECK(seen.front == 123.46);
  CHECK(seen.back == 99.99);
  CHECK(seen.left == 5.0);
  CHECK(seen.right == 450.0);
}

TEST_CASE("open arena: the teacher drives straight without contact") {
  WorldSpec w;
  w.bounds = {-3000.0, -3000.0, 3000.0, 3000.0};
  RobotSpec robot;
  NavConfig cfg;
  cfg.max_ticks = 200;
  cfg.noise_sigma = 0.0;
  Trajectory traj = run_episode(w, {{0.0, 0.0}, 0.0}, robot, Policy::reflex_only,
                                nullptr, cfg, 1);
  REQUIRE(traj.size() == 200);
  for (const auto& rec : traj) CHECK(rec.command == Command::front);
  EpisodeMetrics m = compute_metrics(traj, cfg, robot, &w, nullptr);
  CHECK(m.collisions == 0);
  CHECK(m.lr_alternations == 0);
}

TEST_CASE("episodes replay byte-identically per seed") {
  Scenario sc = build_scenario("course", 3);
  Trajectory a = run_episode(sc.world, sc.start, sc.robot, Policy::two_tier, nullptr,
                             sc.config, 3, nullptr);
  Trajectory b = run_episode(sc.world, sc.start, sc.robot, Policy::two_tier, nullptr,
                             sc.config, 3, nullptr);
  CHECK(trajectory_csv(a) == trajectory_csv(b));
}

TEST_CASE("arbitration soundness: reflex exactly when a channel is critical") {
  Scenario sc = build_scenario("mobile", 4);
  Trajectory traj = run_episode(sc.world, sc.start, sc.robot, Policy::two_tier, nullptr,
                                sc.config, 4, nullptr);
  for (const auto& rec : traj) {
    CHECK((rec.source == Source::reflex) == is_critical(rec.scan, sc.config.thresholds));
  }
}

TEST_CASE("translation into contact halts in place") {
  WorldSpec w;
  w.bounds = {0.0, 0.0, 400.0, 400.0};
  w.static_obstacles.push_back(rect_polygon(100.0, 0.0, 110.0, 400.0));
  RobotSpec robot;
  NavConfig cfg;
  cfg.max_ticks = 300;
  cfg.noise_sigma = 0.0;
  cfg.thresholds.threshold = 0.1;  // teacher always says front
  cfg.thresholds.critical = 0.05;
  Trajectory traj = run_episode(w, {{50.0, 200.0}, 0.0}, robot, Policy::reflex_only,
                                nullptr, cfg, 1);
  const auto& last = traj.back();
  CHECK(last.pose.position.x() <= 100.0 - robot.body_radius);
  CHECK(last.pose.position.x() > 100.0 - robot.body_radius - 1.1);
  EpisodeMetrics m = compute_metrics(traj, cfg, robot, &w, nullptr);
  CHECK(m.collisions == 1);  // merged into a single sustained contact event
}

TEST_CASE("exit region ends the episode") {
  WorldSpec w;
  w.bounds = {0.0, 0.0, 400.0, 400.0};
  RobotSpec robot;
  NavConfig cfg;
  cfg.max_ticks = 1000;
  cfg.noise_sigma = 0.0;
  ExitRegion exit{{0.0, 0.0, 260.0, 400.0}, true};
  Trajectory traj = run_episode(w, {{200.0, 200.0}, 0.0}, robot, Policy::reflex_only,
                                nullptr, cfg, 1, &exit);
  CHECK(traj.size() < 1000);
  CHECK(escaped(exit, traj.back().pose.position));
  EpisodeMetrics m = compute_metrics(traj, cfg, robot, &w, &exit);
  CHECK(m.escaped);
  CHECK(*m.ticks_to_exit == traj.back().tick);
}

TEST_CASE("lr alternation counting") {
  Trajectory traj;
  Command seq[] = {Command::left, Command::right, Command::left, Command::right,
                   Command::left};
  for (long t = 0; t < 5; ++t) {
    TrajectoryRecord r;
    r.tick = t;
    r.command = seq[t];
    traj.push_back(r);
  }
  NavConfig cfg;
  RobotSpec robot;
  EpisodeMetrics m = compute_metrics(traj, cfg, robot, nullptr, nullptr);
  CHECK(m.lr_alternations == 4);

  // interleaved non-turn commands do not reset the count
  Trajectory mixed;
  Command seq2[] = {Command::left, Command::front, Command::right, Command::front,
                    Command::left};
  for (long t = 0; t < 5; ++t) {
    TrajectoryRecord r;
    r.tick = t;
    r.command = seq2[t];
    mixed.push_back(r);
  }
  CHECK(compute_metrics(mixed, cfg, robot, nullptr, nullptr).lr_alternations == 2);
}

TEST_CASE("scenarios are deterministic per seed") {
  for (const char* name : {"course", "enclosure", "corner", "mobile"}) {
    Scenario a = build_scenario(name, 11);
    Scenario b = build_scenario(name, 11);
    CHECK(world_to_json(a.world) == world_to_json(b.world));
    CHECK(a.start.position == b.start.position);
    CHECK(a.start.heading == b.start.heading);
  }
  Scenario c = build_scenario("course", 1);
  Scenario d = build_scenario("course", 2);
  CHECK(world_to_json(c.world) != world_to_json(d.world));
  CHECK_THROWS_AS((void)build_scenario("maze", 1), std::invalid_argument);
}

TEST_CASE("enclosure has exactly one 40 cm opening") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    Scenario sc = build_scenario("enclosure", seed);
    // walls trace the box except one gap: measure total wall length along
    // the four sides via polygon extents
    double total = 0.0;
    for (const auto& poly : sc.world.static_obstacles) {
      double min_x = poly[0].x(), max_x = poly[0].x();
      double min_y = poly[0].y(), max_y = poly[0].y();
      for (const auto& v : poly) {
        min_x = std::min(min_x, v.x());
        max_x = std::max(max_x, v.x());
        min_y = std::min(min_y, v.y());
        max_y = std::max(max_y, v.y());
      }
      total += std::max(max_x - min_x, max_y - min_y);
    }
    // two 132 cm lids, two 120 cm sides, minus one 40 cm gap
    CHECK(total == doctest::Approx(2 * 132.0 + 2 * 120.0 - 40.0));
    REQUIRE(sc.exit.has_value());
    CHECK(!escaped(*sc.exit, sc.start.position));
  }
}

TEST_CASE("corner start scan is symmetric with zero noise") {
  Scenario sc = build_scenario("corner", 1);
  ScanVector s = sense(sc.world, sc.start, sc.robot, NoiseSpec{0.0, 0}, 0);
  CHECK(std::abs(s.left - s.right) < 1.0);
}

TEST_CASE("trajectory CSV round-trips") {
  Scenario sc = build_scenario("corner", 2);
  sc.config.max_ticks = 50;
  Trajectory traj = run_episode(sc.world, sc.start, sc.robot, Policy::reflex_only,
                                nullptr, sc.config, 2, nullptr);
  std::string text = trajectory_csv(traj);
  auto parsed = parse_trajectory_csv(text);
  REQUIRE(parsed.ok());
  REQUIRE(parsed.value().size() == traj.size());
  CHECK(trajectory_csv(parsed.value()) == text);
  CHECK(parsed.value()[10].command == traj[10].command);
  CHECK(parsed.value()[10].source == traj[10].source);

  CHECK(!parse_trajectory_csv("bogus\n1,2,3\n").ok());
  CHECK(!parse_trajectory_csv("tick,x,y,heading,front,back,left,right,command,source\n"
                              "0,1.0,2.0,0.1,10,10,10,10,skip,hold\n")
             .ok());
}
