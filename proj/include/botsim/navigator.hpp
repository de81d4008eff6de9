#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "botsim/command.hpp"
#include "botsim/dataset.hpp"
#include "botsim/reflex.hpp"
#include "botsim/serial.hpp"
#include "botsim/world.hpp"

namespace botsim {

enum class Source : uint8_t { reflex, planner, hold };

const char* source_name(Source s);
std::optional<Source> source_from_name(std::string_view name);

enum class Policy { reflex_only, two_tier };

struct NavConfig {
  Thresholds thresholds{};
  int planner_delay_ticks{2};
  double tick_seconds{0.05};
  long max_ticks{4000};
  double noise_sigma{0.5};
};

using PlannerFn = std::function<Command(const ScanVector&)>;

// Planner leg of the control loop, run over the emulated serial wire: scans
// go out encoded, commands come back as single bytes, each direction through
// a FIFO delay so a request issued at t is acted on at t + planner_delay.
// One request in flight at a time; while waiting the previous command holds.
// A critical scan fires the reflex instantly and flushes the link, so a stale
// planner reply can never actuate after an emergency.
class TwoTierController {
 public:
  TwoTierController(const NavConfig& cfg, PlannerFn planner);

  std::pair<Command, Source> decide(const ScanVector& scan, long tick);

 private:
  NavConfig cfg_;
  PlannerFn planner_;
  DelayChannel<std::string> request_;
  DelayChannel<char> reply_;
  bool in_flight_{false};
  Command last_{Command::stop};
};

struct TrajectoryRecord {
  long tick{0};
  Pose pose{};
  ScanVector scan{};
  Command command{Command::stop};
  Source source{Source::hold};
};

using Trajectory = std::vector<TrajectoryRecord>;

struct ExitRegion {
  Rect rect{};
  bool escaped_when_outside{false};  // false: escaped when inside rect
};

bool escaped(const ExitRegion& exit, const Vec2& position);

struct Scenario {
  std::string name;
  WorldSpec world;
  Pose start{};
  RobotSpec robot{};
  NavConfig config{};
  std::optional<ExitRegion> exit;
};

// Named evaluation worlds: "course" (seeded convex scatter), "enclosure"
// (box with one 40 cm opening), "corner" (two walls at a right angle, robot
// facing the vertex on the bisector), "mobile" (open room with a scripted
// crossing obstacle). Deterministic per seed.
Scenario build_scenario(const std::string& name, uint64_t seed);

// Closed-loop run. Collisions never abort: a translation into contact leaves
// the robot where it was and the tick is recorded; the run ends at max_ticks
// or as soon as the exit region is reached.
Trajectory run_episode(const WorldSpec& world, const Pose& start, const RobotSpec& robot,
                       Policy policy, const PlannerFn* planner, const NavConfig& cfg,
                       uint64_t seed, const ExitRegion* exit = nullptr);

struct EpisodeMetrics {
  int collisions{0};          // contact events, consecutive contact ticks merge
  int lr_alternations{0};     // left<->right flips among issued turn commands
  std::optional<long> min_reaction_ticks;  // first critical reading -> first reflex
  bool escaped{false};
  std::optional<long> ticks_to_exit;
  double min_window_displacement{0.0};  // net displacement, worst 400-tick window
};

EpisodeMetrics compute_metrics(const Trajectory& traj, const NavConfig& cfg,
                               const RobotSpec& robot, const WorldSpec* world,
                               const ExitRegion* exit);

// Log format: "tick,x,y,heading,front,back,left,right,command,source".
std::string trajectory_csv(const Trajectory& traj);
Result<Trajectory, ParseError> parse_trajectory_csv(const std::string& text);

}  // namespace botsim
