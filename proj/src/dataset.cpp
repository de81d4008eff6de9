#include "botsim/dataset.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "botsim/rng.hpp"

namespace botsim {
namespace {

constexpr char kHeader[] = "Front,Back,Left,Right,Command";
constexpr double kTickSeconds = 0.05;

bool parse_double(const std::string& field, double* out) {
  if (field.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || !std::isfinite(v)) return false;
  *out = v;
  return true;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::string parse_error_text(const ParseError& e) {
  std::string where = e.kind == ParseError::Kind::Header ? "header" : "row";
  return "csv " + where + " error at line " + std::to_string(e.line_no) + ": " + e.detail;
}

std::string emit_csv(const Dataset& ds) {
  std::string out(kHeader);
  out += '\n';
  char buf[96];
  for (const auto& s : ds) {
    int n = std::snprintf(buf, sizeof buf, "%.2f,%.2f,%.2f,%.2f,%s\n", s.scan.front,
                          s.scan.back, s.scan.left, s.scan.right, command_name(s.label));
    out.append(buf, static_cast<size_t>(n));
  }
  return out;
}

Result<Dataset, ParseError> parse_csv(const std::string& text) {
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
  // A trailing newline produces one empty tail entry; drop it.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }

  if (lines.empty() || lines[0] != kHeader) {
    return ParseError{ParseError::Kind::Header, 1,
                      "expected \"" + std::string(kHeader) + "\""};
  }

  Dataset ds;
  ds.reserve(lines.size() - 1);
  for (size_t li = 1; li < lines.size(); ++li) {
    int line_no = static_cast<int>(li) + 1;
    const std::string& line = lines[li];
    if (line.empty()) {
      return ParseError{ParseError::Kind::Row, line_no, "empty row"};
    }
    auto fields = split_fields(line);
    if (fields.size() != kNumSensors + 1) {
      return ParseError{ParseError::Kind::Row, line_no,
                        "expected 5 fields, got " + std::to_string(fields.size())};
    }
    LabeledSample s;
    for (int i = 0; i < kNumSensors; ++i) {
      double v = 0.0;
      if (!parse_double(fields[static_cast<size_t>(i)], &v)) {
        return ParseError{ParseError::Kind::Row, line_no,
                          "non-numeric field \"" + fields[static_cast<size_t>(i)] + "\""};
      }
      if (v < kMinRange || v > kMaxRange) {
        return ParseError{ParseError::Kind::Row, line_no,
                          "reading outside [5, 450]: " + fields[static_cast<size_t>(i)]};
      }
      s.scan.set_channel(i, v);
    }
    auto label = command_from_name(fields[kNumSensors]);
    if (!label) {
      return ParseError{ParseError::Kind::Row, line_no,
                        "unknown label \"" + fields[kNumSensors] + "\""};
    }
    s.label = *label;
    ds.push_back(s);
  }
  return ds;
}

Result<Dataset, ParseError> load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return ParseError{ParseError::Kind::Header, 0, "cannot open " + path};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out << emit_csv(ds);
}

Result<Dataset, CollectError> collect(const WorldSpec& world, const RobotSpec& robot,
                                      const Pose& start, const Thresholds& th,
                                      long steps, uint64_t seed, double sigma) {
  Dataset ds;
  ds.reserve(static_cast<size_t>(steps));
  NoiseSpec noise{sigma, seed};
  Pose pose = start;
  for (long t = 0; t < steps; ++t) {
    WorldSpec now = advance_obstacles(world, static_cast<double>(t) * kTickSeconds);
    ScanVector scan = sense(now, pose, robot, noise, t);
    ds.push_back({scan, teacher_decide(scan, th)});

    Command cmd = is_critical(scan, th) ? critical_reflex(scan, th) : ds.back().label;
    Pose next = step_kinematics(pose, cmd, robot, kTickSeconds);
    WorldSpec after = advance_obstacles(world, static_cast<double>(t + 1) * kTickSeconds);
    if (collides(after, next.position, robot.body_radius)) {
      return CollectError{std::move(ds), t};
    }
    pose = next;
  }
  return ds;
}

std::vector<Episode> detect_oscillation(const std::vector<Command>& labels, int window,
                                        int min_alternations) {
  assert(window >= 2 && min_alternations >= 1);
  std::vector<Episode> out;
  size_t n = labels.size();
  size_t i = 0;
  while (i < n) {
    if (!is_turn(labels[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < n && is_turn(labels[j + 1])) ++j;

    size_t len = j - i + 1;
    size_t w = std::min<size_t>(static_cast<size_t>(window), len);
    // switches[k] marks a flip between positions i+k and i+k+1
    int best = 0;
    if (len >= 2) {
      std::vector<int> prefix(len, 0);
      for (size_t k = 1; k < len; ++k) {
        prefix[k] = prefix[k - 1] + (labels[i + k] != labels[i + k - 1] ? 1 : 0);
      }
      for (size_t s = 0; s + w <= len; ++s) {
        best = std::max(best, prefix[s + w - 1] - prefix[s]);
      }
    }
    if (best >= min_alternations) out.push_back({i, j});
    i = j + 1;
  }
  return out;
}

Dataset relabel(const Dataset& ds, int window, int min_alternations) {
  std::vector<Command> labels(ds.size());
  for (size_t i = 0; i < ds.size(); ++i) labels[i] = ds[i].label;
  Dataset out = ds;
  for (const Episode& ep : detect_oscillation(labels, window, min_alternations)) {
    Command first = ds[ep.begin].label;
    for (size_t i = ep.begin; i <= ep.end; ++i) out[i].label = first;
  }
  return out;
}

Result<Split, SplitError> stratified_split(const Dataset& ds, double train_fraction,
                                           uint64_t seed) {
  assert(train_fraction > 0.0 && train_fraction < 1.0);
  std::array<std::vector<size_t>, kNumCommands> by_class;
  for (size_t i = 0; i < ds.size(); ++i) {
    by_class[static_cast<size_t>(ds[i].label)].push_back(i);
  }

  for (int c = 0; c < kNumCommands; ++c) {
    size_t n = by_class[static_cast<size_t>(c)].size();
    if (n == 1) {
      return SplitError{std::string("class \"") + command_name(static_cast<Command>(c)) +
                        "\" has a single sample; stratification needs at least 2"};
    }
  }
  if (ds.empty()) return SplitError{"empty dataset"};

  Rng rng(seed);
  std::vector<char> in_train(ds.size(), 0);
  for (int c = 0; c < kNumCommands; ++c) {
    auto& idx = by_class[static_cast<size_t>(c)];
    if (idx.empty()) continue;
    shuffle(idx, rng);
    auto take = static_cast<size_t>(
        std::llround(train_fraction * static_cast<double>(idx.size())));
    take = std::clamp<size_t>(take, 1, idx.size() - 1);
    for (size_t k = 0; k < take; ++k) in_train[idx[k]] = 1;
  }

  Split split;
  for (size_t i = 0; i < ds.size(); ++i) {
    (in_train[i] ? split.train : split.test).push_back(ds[i]);
  }
  return split;
}

}  // namespace botsim
