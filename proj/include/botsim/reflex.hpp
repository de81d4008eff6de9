#pragma once

#include "botsim/command.hpp"
#include "botsim/sensor.hpp"

namespace botsim {

struct Thresholds {
  double threshold{20.0};  // cm, navigation clearance
  double critical{5.0};    // cm, emergency distance; 0 < critical < threshold
};

// Strict comparison: a channel exactly at critical is not an emergency.
bool is_critical(const ScanVector& scan, const Thresholds& th);

// Escape move for a critical scan. Priority: front blocked -> back, back
// blocked -> front, both sides blocked -> back, else turn away from the
// blocked side. Precondition: is_critical(scan, th).
Command critical_reflex(const ScanVector& scan, const Thresholds& th);

// Reconstructed rule table of the original firmware: prefer driving forward,
// else turn toward the larger side clearance (ties go left), else retreat,
// else stop. Boundary readings fall to the less aggressive branch.
Command teacher_decide(const ScanVector& scan, const Thresholds& th);

}  // namespace botsim
