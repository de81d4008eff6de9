#pragma once

#include <string>
#include <vector>

#include "botsim/command.hpp"
#include "botsim/geometry.hpp"

namespace botsim {

struct Pose {
  Vec2 position{0.0, 0.0};
  double heading{0.0};  // radians, kept in [0, 2*pi)
};

// The obstacle polygon is drawn with its anchor at waypoints[0]; at time t the
// whole polygon is translated by anchor(t) - waypoints[0]. A looping script
// treats the waypoints as a closed cycle (last connects back to first) and is
// periodic with period path_length / speed.
struct ObstacleScript {
  std::vector<Vec2> waypoints;
  double speed{0.0};  // cm/s
  bool loop{false};
};

struct MobileObstacle {
  Polygon shape;
  ObstacleScript script;
};

struct WorldSpec {
  Rect bounds{0.0, 0.0, 400.0, 400.0};
  std::vector<Polygon> static_obstacles;
  std::vector<MobileObstacle> mobile_obstacles;
};

struct SensorMount {
  double offset{12.0};  // cm from robot center along the mount bearing
  double bearing{0.0};  // radians relative to heading
};

// front 0, back pi, left +pi/4, right -pi/4; rays start at the disc edge.
struct SensorRig {
  SensorMount front{12.0, 0.0};
  SensorMount back{12.0, kPi};
  SensorMount left{12.0, kPi / 4};
  SensorMount right{12.0, -kPi / 4};

  const SensorMount& mount(int i) const {
    switch (i) {
      case 0: return front;
      case 1: return back;
      case 2: return left;
      case 3: return right;
    }
    return front;
  }
};

struct RobotSpec {
  double body_radius{12.0};       // cm, disc robot
  double linear_speed{20.0};      // cm/s
  double angular_speed{kPi / 2};  // rad/s
  SensorRig sensors{};
};

// First-order kinematics: front/back translate along the heading, left/right
// rotate in place, stop holds. The returned heading is normalized.
Pose step_kinematics(const Pose& pose, Command cmd, const RobotSpec& robot, double dt);

// Closed-boundary rule: touching (distance == radius) already counts, both
// against obstacle polygons and against the bounds walls.
bool collides(const WorldSpec& world, const Vec2& position, double radius);

// Pure function of the initial world and sim time; mobile polygons are
// translated along their scripts, statics and bounds are untouched.
WorldSpec advance_obstacles(const WorldSpec& world, double sim_time);

// JSON schema documented in the README; round-trips exactly.
std::string world_to_json(const WorldSpec& world);
WorldSpec world_from_json(const std::string& text);  // throws std::runtime_error
WorldSpec load_world(const std::string& path);
void save_world(const WorldSpec& world, const std::string& path);

}  // namespace botsim
