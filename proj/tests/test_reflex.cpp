#include <doctest.h>

#include "botsim/reflex.hpp"

using namespace botsim;

namespace {
ScanVector scan(double f, double b, double l, double r) { return {f, b, l, r}; }
}  // namespace

TEST_CASE("is_critical uses a strict comparison") {
  Thresholds th;
  CHECK(!is_critical(scan(128.44, 82.77, 81.02, 74.99), th));
  CHECK(is_critical(scan(4.0, 100.0, 100.0, 100.0), th));
  CHECK(!is_critical(scan(5.0, 5.0, 5.0, 5.0), th));
  CHECK(is_critical(scan(100.0, 100.0, 4.99, 100.0), th));
}

TEST_CASE("critical_reflex priority order") {
  Thresholds th;
  CHECK(critical_reflex(scan(3.0, 100.0, 100.0, 100.0), th) == Command::back);
  CHECK(critical_reflex(scan(100.0, 2.0, 100.0, 100.0), th) == Command::front);
  CHECK(critical_reflex(scan(100.0, 100.0, 4.0, 4.0), th) == Command::back);
  CHECK(critical_reflex(scan(100.0, 100.0, 4.0, 100.0), th) == Command::right);
  CHECK(critical_reflex(scan(100.0, 100.0, 100.0, 4.0), th) == Command::left);
  // front wins over everything else
  CHECK(critical_reflex(scan(3.0, 2.0, 1.0, 1.0), th) == Command::back);
  // back beats the side rules
  CHECK(critical_reflex(scan(100.0, 2.0, 1.0, 1.0), th) == Command::front);
}

TEST_CASE("teacher_decide rule table") {
  Thresholds th;
  CHECK(teacher_decide(scan(128.44, 82.77, 81.02, 74.99), th) == Command::front);
  CHECK(teacher_decide(scan(10.0, 100.0, 50.0, 30.0), th) == Command::left);
  CHECK(teacher_decide(scan(10.0, 100.0, 30.0, 50.0), th) == Command::right);
  CHECK(teacher_decide(scan(10.0, 10.0, 10.0, 10.0), th) == Command::stop);
  CHECK(teacher_decide(scan(10.0, 100.0, 10.0, 10.0), th) == Command::back);
  // side tie goes left
  CHECK(teacher_decide(scan(10.0, 100.0, 44.0, 44.0), th) == Command::left);
  // boundary readings are not "clear": exactly 20 never drives that branch
  CHECK(teacher_decide(scan(20.0, 100.0, 50.0, 30.0), th) == Command::left);
  CHECK(teacher_decide(scan(20.0, 20.0, 20.0, 20.0), th) == Command::stop);
}
