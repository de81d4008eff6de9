#pragma once

#include <cassert>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "botsim/command.hpp"
#include "botsim/result.hpp"
#include "botsim/sensor.hpp"

namespace botsim {

enum class FrameError { Malformed, FieldCount, Range, UnknownCommand };

const char* frame_error_name(FrameError e);

// Wire format: "front,back,left,right\n", each field %.2f. Quantization is
// the only loss; one round trip changes a reading by at most 0.005 cm.
std::string encode_scan(const ScanVector& scan);

// Strict framing: exactly one terminating newline, exactly four numeric
// fields, every value inside [5, 450]. Non-numeric input is Malformed even
// when the field count is also wrong.
Result<ScanVector, FrameError> decode_scan(std::string_view frame);

// Single-byte command channel: 'f' 'b' 'l' 'r' 's'.
char encode_command(Command c);
Result<Command, FrameError> decode_command(char byte);

// FIFO link with a fixed latency: a message sent at tick t becomes pollable
// at t + delay_ticks and stays queued until polled. Ticks must not decrease.
template <class T>
class DelayChannel {
 public:
  explicit DelayChannel(int delay_ticks) : delay_(delay_ticks) {
    assert(delay_ticks >= 0);
  }

  void send(long tick, T msg) {
    assert(q_.empty() || q_.back().first <= tick);
    q_.emplace_back(tick, std::move(msg));
  }

  std::optional<T> poll(long tick) {
    if (q_.empty() || q_.front().first + delay_ > tick) return std::nullopt;
    T msg = std::move(q_.front().second);
    q_.pop_front();
    return msg;
  }

  size_t pending() const { return q_.size(); }
  void clear() { q_.clear(); }
  int delay_ticks() const { return delay_; }

 private:
  int delay_;
  std::deque<std::pair<long, T>> q_;
};

}  // namespace botsim
