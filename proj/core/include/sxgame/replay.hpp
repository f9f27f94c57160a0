#pragma once

// Rebuilds a room's game state from its event log records alone. Records
// before START (lobby traffic) and chat lines are skipped; everything from
// START on is fed to a broadcast replica.

#include <optional>
#include <span>
#include <string>
#include <variant>

#include "sxgame/event_log.hpp"
#include "sxgame/lobby.hpp"
#include "sxgame/miboard.hpp"
#include "sxgame/showdown.hpp"

namespace sxgame {

struct ReplayResult {
  GameType type{};
  std::variant<MiBoardState, ShowdownState> state;
  std::size_t applied = 0;  // control records fed to the replica

  bool finished() const;
  // Canonical serialisation of the rebuilt state.
  std::string snapshot() const;
};

// Returns nullopt if the records contain no START.
std::optional<ReplayResult> replay_room(std::span<const LogRecord> records);

}  // namespace sxgame
