#include "botsim/command.hpp"

namespace botsim {

const char* command_name(Command c) {
  switch (c) {
    case Command::front: return "front";
    case Command::back: return "back";
    case Command::left: return "left";
    case Command::right: return "right";
    case Command::stop: return "stop";
  }
  return "stop";
}

std::optional<Command> command_from_name(std::string_view name) {
  if (name == "front") return Command::front;
  if (name == "back") return Command::back;
  if (name == "left") return Command::left;
  if (name == "right") return Command::right;
  if (name == "stop") return Command::stop;
  return std::nullopt;
}

}  // namespace botsim
