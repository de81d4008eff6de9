#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace botsim {

// Drive commands. The enum order front < back < left < right < stop is the
// total order used for every deterministic tie-break in the stack.
enum class Command : uint8_t { front = 0, back = 1, left = 2, right = 3, stop = 4 };

inline constexpr int kNumCommands = 5;

const char* command_name(Command c);

std::optional<Command> command_from_name(std::string_view name);

inline bool is_turn(Command c) { return c == Command::left || c == Command::right; }

}  // namespace botsim
