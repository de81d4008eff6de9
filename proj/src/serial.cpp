#include "botsim/serial.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace botsim {

const char* frame_error_name(FrameError e) {
  switch (e) {
    case FrameError::Malformed: return "malformed frame";
    case FrameError::FieldCount: return "wrong field count";
    case FrameError::Range: return "value out of range";
    case FrameError::UnknownCommand: return "unknown command byte";
  }
  return "unknown error";
}

std::string encode_scan(const ScanVector& scan) {
  char buf[80];
  int n = std::snprintf(buf, sizeof buf, "%.2f,%.2f,%.2f,%.2f\n", scan.front,
                        scan.back, scan.left, scan.right);
  return std::string(buf, static_cast<size_t>(n));
}

namespace {

bool parse_field(std::string_view field, double* out) {
  if (field.empty() || field.size() >= 64) return false;
  char buf[64];
  field.copy(buf, field.size());
  buf[field.size()] = '\0';
  char* end = nullptr;
  double v = std::strtod(buf, &end);
  if (end != buf + field.size()) return false;
  if (!std::isfinite(v)) return false;
  *out = v;
  return true;
}

}  // namespace

Result<ScanVector, FrameError> decode_scan(std::string_view frame) {
  if (frame.empty() || frame.back() != '\n') return FrameError::Malformed;
  std::string_view body = frame.substr(0, frame.size() - 1);
  if (body.find('\n') != std::string_view::npos) return FrameError::Malformed;

  std::vector<double> values;
  bool all_numeric = true;
  size_t start = 0;
  for (;;) {
    size_t comma = body.find(',', start);
    std::string_view field =
        comma == std::string_view::npos ? body.substr(start) : body.substr(start, comma - start);
    double v = 0.0;
    if (parse_field(field, &v)) {
      values.push_back(v);
    } else {
      all_numeric = false;
      values.push_back(0.0);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }

  if (!all_numeric) return FrameError::Malformed;
  if (values.size() != kNumSensors) return FrameError::FieldCount;
  for (double v : values) {
    if (v < kMinRange || v > kMaxRange) return FrameError::Range;
  }
  ScanVector scan;
  for (int i = 0; i < kNumSensors; ++i) scan.set_channel(i, values[static_cast<size_t>(i)]);
  return scan;
}

char encode_command(Command c) {
  switch (c) {
    case Command::front: return 'f';
    case Command::back: return 'b';
    case Command::left: return 'l';
    case Command::right: return 'r';
    case Command::stop: return 's';
  }
  return 's';
}

Result<Command, FrameError> decode_command(char byte) {
  switch (byte) {
    case 'f': return Command::front;
    case 'b': return Command::back;
    case 'l': return Command::left;
    case 'r': return Command::right;
    case 's': return Command::stop;
  }
  return FrameError::UnknownCommand;
}

}  // namespace botsim
