#include "botsim/reflex.hpp"

#include <cassert>

namespace botsim {

bool is_critical(const ScanVector& scan, const Thresholds& th) {
  return scan.front < th.critical || scan.back < th.critical ||
         scan.left < th.critical || scan.right < th.critical;
}

Command critical_reflex(const ScanVector& scan, const Thresholds& th) {
  assert(is_critical(scan, th));
  if (scan.front < th.critical) return Command::back;
  if (scan.back < th.critical) return Command::front;
  bool left_blocked = scan.left < th.critical;
  bool right_blocked = scan.right < th.critical;
  if (left_blocked && right_blocked) return Command::back;
  if (left_blocked) return Command::right;
  return Command::left;
}

Command teacher_decide(const ScanVector& scan, const Thresholds& th) {
  if (scan.front > th.threshold) return Command::front;
  if (std::max(scan.left, scan.right) > th.threshold) {
    return scan.left >= scan.right ? Command::left : Command::right;
  }
  if (scan.back > th.threshold) return Command::back;
  return Command::stop;
}

}  // namespace botsim
