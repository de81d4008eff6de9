#include "botsim/world.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace botsim {

Pose step_kinematics(const Pose& pose, Command cmd, const RobotSpec& robot, double dt) {
  Pose out = pose;
  switch (cmd) {
    case Command::front:
      out.position += robot.linear_speed * dt * unit(pose.heading);
      break;
    case Command::back:
      out.position -= robot.linear_speed * dt * unit(pose.heading);
      break;
    case Command::left:
      out.heading = normalize_heading(pose.heading + robot.angular_speed * dt);
      break;
    case Command::right:
      out.heading = normalize_heading(pose.heading - robot.angular_speed * dt);
      break;
    case Command::stop:
      break;
  }
  return out;
}

bool collides(const WorldSpec& world, const Vec2& p, double radius) {
  const Rect& b = world.bounds;
  if (p.x() - b.min_x <= radius || b.max_x - p.x() <= radius ||
      p.y() - b.min_y <= radius || b.max_y - p.y() <= radius) {
    return true;
  }
  for (const auto& poly : world.static_obstacles) {
    if (distance_to_polygon(p, poly) <= radius) return true;
  }
  for (const auto& mob : world.mobile_obstacles) {
    if (distance_to_polygon(p, mob.shape) <= radius) return true;
  }
  return false;
}

namespace {

Vec2 anchor_at(const ObstacleScript& s, double sim_time) {
  if (s.waypoints.empty()) return {0.0, 0.0};
  if (s.waypoints.size() == 1 || s.speed <= 0.0) return s.waypoints.front();

  size_t n = s.waypoints.size();
  size_t legs = s.loop ? n : n - 1;
  std::vector<double> len(legs);
  double total = 0.0;
  for (size_t i = 0; i < legs; ++i) {
    len[i] = (s.waypoints[(i + 1) % n] - s.waypoints[i]).norm();
    total += len[i];
  }
  if (total <= 0.0) return s.waypoints.front();

  double dist = s.speed * sim_time;
  if (s.loop) {
    dist = std::fmod(dist, total);
  } else if (dist >= total) {
    return s.waypoints.back();
  }
  for (size_t i = 0; i < legs; ++i) {
    if (dist <= len[i]) {
      double t = len[i] > 0.0 ? dist / len[i] : 0.0;
      return s.waypoints[i] + t * (s.waypoints[(i + 1) % n] - s.waypoints[i]);
    }
    dist -= len[i];
  }
  return s.waypoints.front();
}

}  // namespace

WorldSpec advance_obstacles(const WorldSpec& world, double sim_time) {
  WorldSpec out = world;
  for (auto& mob : out.mobile_obstacles) {
    if (mob.script.waypoints.empty()) continue;
    Vec2 shift = anchor_at(mob.script, sim_time) - mob.script.waypoints.front();
    for (auto& v : mob.shape) v += shift;
  }
  return out;
}

namespace {

using nlohmann::json;

json polygon_to_json(const Polygon& poly) {
  json arr = json::array();
  for (const auto& v : poly) arr.push_back({v.x(), v.y()});
  return arr;
}

Polygon polygon_from_json(const json& j) {
  Polygon poly;
  for (const auto& v : j) poly.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  if (poly.size() < 3) throw std::runtime_error("polygon needs at least 3 vertices");
  return poly;
}

}  // namespace

std::string world_to_json(const WorldSpec& world) {
  json j;
  j["bounds"] = {world.bounds.min_x, world.bounds.min_y, world.bounds.max_x,
                 world.bounds.max_y};
  j["static_obstacles"] = json::array();
  for (const auto& poly : world.static_obstacles) {
    j["static_obstacles"].push_back(polygon_to_json(poly));
  }
  j["mobile_obstacles"] = json::array();
  for (const auto& mob : world.mobile_obstacles) {
    json m;
    m["vertices"] = polygon_to_json(mob.shape);
    m["waypoints"] = json::array();
    for (const auto& w : mob.script.waypoints) m["waypoints"].push_back({w.x(), w.y()});
    m["speed"] = mob.script.speed;
    m["loop"] = mob.script.loop;
    j["mobile_obstacles"].push_back(m);
  }
  return j.dump(2) + "\n";
}

WorldSpec world_from_json(const std::string& text) {
  // json exceptions do not derive from std::runtime_error; callers are
  // promised the latter, so translate here.
  try {
    json j = json::parse(text);
    WorldSpec w;
    const auto& b = j.at("bounds");
    w.bounds = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                b.at(3).get<double>()};
    if (w.bounds.width() <= 0.0 || w.bounds.height() <= 0.0) {
      throw std::runtime_error("bounds must have positive extent");
    }
    if (j.contains("static_obstacles")) {
      for (const auto& p : j.at("static_obstacles")) {
        w.static_obstacles.push_back(polygon_from_json(p));
      }
    }
    if (j.contains("mobile_obstacles")) {
      for (const auto& m : j.at("mobile_obstacles")) {
        MobileObstacle mob;
        mob.shape = polygon_from_json(m.at("vertices"));
        if (m.contains("waypoints")) {
          for (const auto& wp : m.at("waypoints")) {
            mob.script.waypoints.push_back({wp.at(0).get<double>(), wp.at(1).get<double>()});
          }
        }
        mob.script.speed = m.value("speed", 0.0);
        mob.script.loop = m.value("loop", false);
        w.mobile_obstacles.push_back(mob);
      }
    }
    return w;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("world JSON: ") + e.what());
  }
}

WorldSpec load_world(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open world file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return world_from_json(ss.str());
}

void save_world(const WorldSpec& world, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write world file: " + path);
  out << world_to_json(world);
}

}  // namespace botsim
