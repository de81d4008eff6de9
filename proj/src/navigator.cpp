#include "botsim/navigator.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "botsim/rng.hpp"
#include "botsim/sensor.hpp"

namespace botsim {

const char* source_name(Source s) {
  switch (s) {
    case Source::reflex: return "reflex";
    case Source::planner: return "planner";
    case Source::hold: return "hold";
  }
  return "hold";
}

std::optional<Source> source_from_name(std::string_view name) {
  if (name == "reflex") return Source::reflex;
  if (name == "planner") return Source::planner;
  if (name == "hold") return Source::hold;
  return std::nullopt;
}

TwoTierController::TwoTierController(const NavConfig& cfg, PlannerFn planner)
    : cfg_(cfg),
      planner_(std::move(planner)),
      request_(cfg.planner_delay_ticks / 2),
      reply_(cfg.planner_delay_ticks - cfg.planner_delay_ticks / 2) {}

std::pair<Command, Source> TwoTierController::decide(const ScanVector& scan, long tick) {
  if (is_critical(scan, cfg_.thresholds)) {
    // Safety dominates freshness: drop any in-flight exchange so a stale
    // planner command can never fire after the emergency.
    request_.clear();
    reply_.clear();
    in_flight_ = false;
    last_ = critical_reflex(scan, cfg_.thresholds);
    return {last_, Source::reflex};
  }

  if (!in_flight_) {
    request_.send(tick, encode_scan(scan));
    in_flight_ = true;
  }

  bool link_error = false;
  if (auto frame = request_.poll(tick)) {
    auto decoded = decode_scan(*frame);
    if (decoded.ok()) {
      reply_.send(tick, encode_command(planner_(decoded.value())));
    } else {
      link_error = true;
    }
  }

  if (auto byte = reply_.poll(tick)) {
    in_flight_ = false;
    auto cmd = decode_command(*byte);
    if (cmd.ok()) {
      last_ = cmd.value();
      return {last_, Source::planner};
    }
    link_error = true;
  }

  // A decode failure surfaces as a plain hold; the freed slot re-requests
  // with a fresh scan on the next tick.
  if (link_error) in_flight_ = false;
  return {last_, Source::hold};
}

bool escaped(const ExitRegion& exit, const Vec2& position) {
  bool inside = exit.rect.contains(position);
  return exit.escaped_when_outside ? !inside : inside;
}

Trajectory run_episode(const WorldSpec& world, const Pose& start, const RobotSpec& robot,
                       Policy policy, const PlannerFn* planner, const NavConfig& cfg,
                       uint64_t seed, const ExitRegion* exit) {
  PlannerFn fallback = [th = cfg.thresholds](const ScanVector& s) {
    return teacher_decide(s, th);
  };
  TwoTierController controller(cfg, planner ? *planner : fallback);
  NoiseSpec noise{cfg.noise_sigma, seed};

  Trajectory traj;
  traj.reserve(static_cast<size_t>(cfg.max_ticks));
  Pose pose = start;
  for (long t = 0; t < cfg.max_ticks; ++t) {
    WorldSpec now = advance_obstacles(world, static_cast<double>(t) * cfg.tick_seconds);
    ScanVector scan = sense(now, pose, robot, noise, t);

    Command cmd;
    Source src;
    if (policy == Policy::reflex_only) {
      if (is_critical(scan, cfg.thresholds)) {
        cmd = critical_reflex(scan, cfg.thresholds);
        src = Source::reflex;
      } else {
        cmd = teacher_decide(scan, cfg.thresholds);
        src = Source::planner;
      }
    } else {
      auto decision = controller.decide(scan, t);
      cmd = decision.first;
      src = decision.second;
    }

    traj.push_back({t, pose, scan, cmd, src});
    if (exit && escaped(*exit, pose.position)) break;

    Pose next = step_kinematics(pose, cmd, robot, cfg.tick_seconds);
    if (cmd == Command::front || cmd == Command::back) {
      WorldSpec after =
          advance_obstacles(world, static_cast<double>(t + 1) * cfg.tick_seconds);
      if (collides(after, next.position, robot.body_radius)) {
        // Halt against the obstacle; the unchanged position marks the contact.
        next.position = pose.position;
      }
    }
    pose = next;
  }
  return traj;
}

EpisodeMetrics compute_metrics(const Trajectory& traj, const NavConfig& cfg,
                               const RobotSpec& robot, const WorldSpec* world,
                               const ExitRegion* exit) {
  EpisodeMetrics m;
  if (traj.empty()) return m;

  bool prev_contact = false;
  for (size_t i = 0; i < traj.size(); ++i) {
    bool contact = false;
    if (i > 0) {
      const auto& prev = traj[i - 1];
      bool translating =
          prev.command == Command::front || prev.command == Command::back;
      if (translating && traj[i].pose.position == prev.pose.position) contact = true;
    }
    if (world) {
      WorldSpec now = advance_obstacles(
          *world, static_cast<double>(traj[i].tick) * cfg.tick_seconds);
      if (collides(now, traj[i].pose.position, robot.body_radius)) contact = true;
    }
    if (contact && !prev_contact) m.collisions++;
    prev_contact = contact;
  }

  bool have_turn = false;
  Command prev_turn = Command::left;
  for (const auto& rec : traj) {
    if (!is_turn(rec.command)) continue;
    if (have_turn && rec.command != prev_turn) m.lr_alternations++;
    prev_turn = rec.command;
    have_turn = true;
  }

  std::optional<long> first_critical;
  std::optional<long> first_reflex;
  for (const auto& rec : traj) {
    bool critical = false;
    for (int c = 0; c < kNumSensors; ++c) {
      if (rec.scan.channel(c) < cfg.thresholds.critical) critical = true;
    }
    if (critical && !first_critical) first_critical = rec.tick;
    if (first_critical && !first_reflex && rec.source == Source::reflex) {
      first_reflex = rec.tick;
    }
  }
  if (first_critical && first_reflex) {
    m.min_reaction_ticks = *first_reflex - *first_critical;
  }

  if (exit) {
    for (const auto& rec : traj) {
      if (escaped(*exit, rec.pose.position)) {
        m.escaped = true;
        m.ticks_to_exit = rec.tick;
        break;
      }
    }
  }

  constexpr size_t kWindow = 400;
  if (traj.size() > kWindow) {
    double worst = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + kWindow < traj.size(); ++i) {
      worst = std::min(worst,
                       (traj[i + kWindow].pose.position - traj[i].pose.position).norm());
    }
    m.min_window_displacement = worst;
  } else {
    m.min_window_displacement =
        (traj.back().pose.position - traj.front().pose.position).norm();
  }
  return m;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "tick,x,y,heading,front,back,left,right,command,source\n";
  char buf[192];
  for (const auto& r : traj) {
    int n = std::snprintf(buf, sizeof buf, "%ld,%.3f,%.3f,%.5f,%.2f,%.2f,%.2f,%.2f,%s,%s\n",
                          r.tick, r.pose.position.x(), r.pose.position.y(),
                          r.pose.heading, r.scan.front, r.scan.back, r.scan.left,
                          r.scan.right, command_name(r.command), source_name(r.source));
    out.append(buf, static_cast<size_t>(n));
  }
  return out;
}

Result<Trajectory, ParseError> parse_trajectory_csv(const std::string& text) {
  constexpr char kHeader[] = "tick,x,y,heading,front,back,left,right,command,source";
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  if (lines.empty() || lines[0] != kHeader) {
    return ParseError{ParseError::Kind::Header, 1, std::string("expected \"") + kHeader + "\""};
  }

  Trajectory traj;
  for (size_t li = 1; li < lines.size(); ++li) {
    int line_no = static_cast<int>(li) + 1;
    std::vector<std::string> fields;
    size_t pos = 0;
    const std::string& line = lines[li];
    for (;;) {
      size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (fields.size() != 10) {
      return ParseError{ParseError::Kind::Row, line_no,
                        "expected 10 fields, got " + std::to_string(fields.size())};
    }
    TrajectoryRecord rec;
    try {
      rec.tick = std::stol(fields[0]);
      rec.pose.position.x() = std::stod(fields[1]);
      rec.pose.position.y() = std::stod(fields[2]);
      rec.pose.heading = std::stod(fields[3]);
      rec.scan.front = std::stod(fields[4]);
      rec.scan.back = std::stod(fields[5]);
      rec.scan.left = std::stod(fields[6]);
      rec.scan.right = std::stod(fields[7]);
    } catch (const std::exception&) {
      return ParseError{ParseError::Kind::Row, line_no, "non-numeric field"};
    }
    auto cmd = command_from_name(fields[8]);
    auto src = source_from_name(fields[9]);
    if (!cmd || !src) {
      return ParseError{ParseError::Kind::Row, line_no, "unknown command or source"};
    }
    rec.command = *cmd;
    rec.source = *src;
    traj.push_back(rec);
  }
  return traj;
}

namespace {

Polygon regular_polygon(const Vec2& center, double radius, int sides, double phase) {
  Polygon poly;
  poly.reserve(static_cast<size_t>(sides));
  for (int i = 0; i < sides; ++i) {
    double a = phase + 2.0 * kPi * static_cast<double>(i) / static_cast<double>(sides);
    poly.push_back(center + radius * unit(a));
  }
  return poly;
}

// The sensor floor is 5 cm and critical comparisons are strict, so a reading
// below the firmware default of 5 can never occur in the emulation; every
// evaluation scenario raises the emergency band just above the floor.
NavConfig scenario_config() {
  NavConfig cfg;
  cfg.thresholds.critical = 6.0;
  return cfg;
}

Scenario build_course(uint64_t seed) {
  Scenario sc;
  sc.name = "course";
  sc.config = scenario_config();
  sc.world.bounds = {0.0, 0.0, 400.0, 400.0};
  // Seeded wobble on the start heading so episodes differ in approach and
  // not just in layout. A fixed diagonal start let a few layouts funnel the
  // run into the rule table's absorbing states: the corner forward/backward
  // standoff, or a rotation cycle where one side beam alternates between a
  // nearby face and the opening behind it.
  Rng hr(mix_seed(seed, 0x56u));
  sc.start = {{55.0, 55.0}, kPi / 4 + 0.6 * (hr.next_double() - 0.5)};
  sc.config.max_ticks = 3000;

  Rng rng(mix_seed(seed, 0xC0u));
  int count = 6 + static_cast<int>(rng.next_below(5));
  std::vector<Vec2> centers;
  std::vector<double> radii;
  int guard = 0;
  while (static_cast<int>(centers.size()) < count && guard < 4000) {
    ++guard;
    Vec2 c{80.0 + 240.0 * rng.next_double(), 80.0 + 240.0 * rng.next_double()};
    double r = 14.0 + 16.0 * rng.next_double();
    if ((c - sc.start.position).norm() < 95.0) continue;
    bool clear = true;
    for (size_t i = 0; i < centers.size(); ++i) {
      if ((c - centers[i]).norm() < r + radii[i] + 58.0) clear = false;
    }
    if (!clear) continue;
    centers.push_back(c);
    radii.push_back(r);
    int sides = 4 + static_cast<int>(rng.next_below(3));
    double phase = 2.0 * kPi * rng.next_double();
    sc.world.static_obstacles.push_back(regular_polygon(c, r, sides, phase));
  }
  return sc;
}

Scenario build_enclosure(uint64_t seed) {
  Scenario sc;
  sc.name = "enclosure";
  sc.config = scenario_config();
  sc.world.bounds = {0.0, 0.0, 400.0, 400.0};
  sc.config.max_ticks = 4000;

  // 120x120 interior centered in the room, 6 cm walls, one 40 cm opening.
  const double lo = 140.0, hi = 260.0, th = 6.0;
  Rng rng(mix_seed(seed, 0xE5u));
  int open_side = static_cast<int>(rng.next_below(4));  // 0 S, 1 N, 2 W, 3 E
  double off = lo + 26.0 + (hi - lo - 52.0) * rng.next_double();  // gap center
  double g0 = off - 20.0, g1 = off + 20.0;

  auto add_wall = [&sc](double x0, double y0, double x1, double y1) {
    sc.world.static_obstacles.push_back(rect_polygon(x0, y0, x1, y1));
  };
  // south wall (y in [lo-th, lo])
  if (open_side == 0) {
    add_wall(lo - th, lo - th, g0, lo);
    add_wall(g1, lo - th, hi + th, lo);
  } else {
    add_wall(lo - th, lo - th, hi + th, lo);
  }
  // north wall
  if (open_side == 1) {
    add_wall(lo - th, hi, g0, hi + th);
    add_wall(g1, hi, hi + th, hi + th);
  } else {
    add_wall(lo - th, hi, hi + th, hi + th);
  }
  // west wall
  if (open_side == 2) {
    add_wall(lo - th, lo, lo, g0);
    add_wall(lo - th, g1, lo, hi);
  } else {
    add_wall(lo - th, lo, lo, hi);
  }
  // east wall
  if (open_side == 3) {
    add_wall(hi, lo, hi + th, g0);
    add_wall(hi, g1, hi + th, hi);
  } else {
    add_wall(hi, lo, hi + th, hi);
  }

  // Start at the center facing the opening, offset by up to ~23 degrees.
  // The rule table leaves the box by bumping the far edge of the opening
  // during a wall follow and turning through it, so the start has to deliver
  // the robot to the opening's wall. An arbitrary heading instead leaves the
  // escape to luck: a corner diagonal parks it in the forward/backward
  // standoff the corner scenario pins on purpose, and a cross-box bounce can
  // settle into a perimeter circuit that never faces the gap.
  double gx = open_side == 2 ? lo : open_side == 3 ? hi : off;
  double gy = open_side == 0 ? lo : open_side == 1 ? hi : off;
  double heading = std::atan2(gy - 200.0, gx - 200.0) + 0.8 * (rng.next_double() - 0.5);
  sc.start = {{200.0, 200.0}, heading};
  sc.exit = ExitRegion{{lo - th, lo - th, hi + th, hi + th}, true};
  return sc;
}

Scenario build_corner(uint64_t) {
  // Two walls meeting at a right angle with a post filling the vertex; the
  // robot starts on the bisector facing the post. Without the post the
  // forward channel only drops to the turn threshold after both side
  // channels are already under it, so the rule table settles into a
  // forward/backward standoff and never turns. The post blocks the forward
  // channel early enough that both sides still clear the threshold, and the
  // drift of the creep-and-turn dance keeps flipping which side looks more
  // open. The scene is a fixed diagnostic: the dimensions below hold the
  // rule table in that dance for thousands of ticks.
  Scenario sc;
  sc.name = "corner";
  sc.config = scenario_config();
  sc.world.bounds = {0.0, 0.0, 400.0, 400.0};
  sc.config.max_ticks = 2000;
  sc.config.noise_sigma = 0.0;

  const double wall = 90.0, th = 6.0, post = 21.0;
  sc.world.static_obstacles.push_back(rect_polygon(0.0, 0.0, wall, th));
  sc.world.static_obstacles.push_back(rect_polygon(0.0, 0.0, th, wall));
  sc.world.static_obstacles.push_back(rect_polygon(0.0, 0.0, post, post));

  sc.start = {{49.0, 49.0}, 5.0 * kPi / 4.0};
  sc.exit = ExitRegion{{0.0, 0.0, 240.0, 240.0}, true};
  return sc;
}

Scenario build_mobile(uint64_t seed) {
  Scenario sc;
  sc.name = "mobile";
  sc.config = scenario_config();
  sc.world.bounds = {0.0, 0.0, 400.0, 400.0};
  sc.config.max_ticks = 600;

  Rng rng(mix_seed(seed, 0x0Bu));
  double bar_x = 112.0 + 3.0 * rng.next_double() - 1.5;
  double speed = 160.0 * (0.95 + 0.1 * rng.next_double());

  MobileObstacle bar;
  bar.shape = rect_polygon(bar_x, 140.0, bar_x + 16.0, 260.0);
  Vec2 anchor{bar_x + 8.0, 200.0};
  bar.script.waypoints = {anchor, anchor + Vec2{-32.0, 0.0}, anchor + Vec2{-32.0, 140.0}};
  bar.script.speed = speed;
  bar.script.loop = false;
  sc.world.mobile_obstacles.push_back(bar);

  sc.start = {{60.0, 200.0}, 0.0};
  return sc;
}

}  // namespace

Scenario build_scenario(const std::string& name, uint64_t seed) {
  if (name == "course") return build_course(seed);
  if (name == "enclosure") return build_enclosure(seed);
  if (name == "corner") return build_corner(seed);
  if (name == "mobile") return build_mobile(seed);
  throw std::invalid_argument("unknown scenario \"" + name + "\"");
}

}  // namespace botsim
