#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "botsim/command.hpp"
#include "botsim/reflex.hpp"
#include "botsim/result.hpp"
#include "botsim/sensor.hpp"
#include "botsim/world.hpp"

namespace botsim {

struct LabeledSample {
  ScanVector scan;
  Command label{Command::stop};
};

using Dataset = std::vector<LabeledSample>;

struct ParseError {
  enum class Kind { Header, Row } kind{Kind::Header};
  int line_no{0};
  std::string detail;
};

std::string parse_error_text(const ParseError& e);

// Header is exactly "Front,Back,Left,Right,Command"; rows are four %.2f
// fields plus a lowercase label. parse and emit are exact inverses on
// 2-decimal data.
Result<Dataset, ParseError> parse_csv(const std::string& text);
std::string emit_csv(const Dataset& ds);

Result<Dataset, ParseError> load_dataset(const std::string& path);
void save_dataset(const Dataset& ds, const std::string& path);

struct CollectError {
  Dataset partial;  // samples gathered before the collision
  long collision_tick{0};
};

// Closed-loop teacher run at 20 Hz: each tick senses, records the teacher's
// label for the scan, and drives (the critical reflex overrides actuation
// when a channel is critical, matching the firmware). Deterministic per seed.
Result<Dataset, CollectError> collect(const WorldSpec& world, const RobotSpec& robot,
                                      const Pose& start, const Thresholds& th,
                                      long steps, uint64_t seed, double sigma = 0.5);

// Inclusive index range of one oscillation episode within a label sequence.
struct Episode {
  size_t begin{0};
  size_t end{0};
};

// An episode is a maximal run of consecutive turn labels that somewhere
// contains at least min_alternations left<->right switches inside a
// window-sized stretch. Episodes come back disjoint and ordered.
std::vector<Episode> detect_oscillation(const std::vector<Command>& labels,
                                        int window = 8, int min_alternations = 3);

// Rewrites every detected episode to its first label (commit to the first
// turn direction). Idempotent.
Dataset relabel(const Dataset& ds, int window = 8, int min_alternations = 3);

struct SplitError {
  std::string detail;
};

struct Split {
  Dataset train;
  Dataset test;
};

// Stratified by label: per class, train receives round(fraction * n) samples
// (clamped so both sides stay non-empty), selection shuffled by the seed,
// original order preserved inside each side. Every present class needs at
// least two samples.
Result<Split, SplitError> stratified_split(const Dataset& ds, double train_fraction = 0.75,
                                           uint64_t seed = 42);

}  // namespace botsim
