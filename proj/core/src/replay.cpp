#include "sxgame/replay.hpp"

namespace sxgame {

bool ReplayResult::finished() const {
  return std::visit(
      [](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, MiBoardState>) {
          return s.phase == MiBoardPhase::FINISHED;
        } else {
          return s.phase == ShowdownPhase::FINISHED;
        }
      },
      state);
}

std::string ReplayResult::snapshot() const {
  return std::visit([](const auto& s) { return serialize(s); }, state);
}

std::optional<ReplayResult> replay_room(std::span<const LogRecord> records) {
  std::optional<GameType> type;
  MiBoardReplica miboard;
  ShowdownReplica showdown;
  std::size_t applied = 0;
  for (const auto& rec : records) {
    const auto op = parse_opcode(rec.opcode);
    if (!op) continue;  // CHAT and other non-control records
    if (!type) {
      if (*op != Opcode::START || rec.fields.empty()) continue;
      type = parse_game_type(rec.fields[0]);
      if (!type) continue;
    }
    const ControlMessage msg(*op, rec.fields);
    if (*type == GameType::MIBOARD) {
      miboard.apply(msg);
    } else {
      showdown.apply(msg);
    }
    ++applied;
  }
  if (!type) return std::nullopt;
  ReplayResult out;
  out.type = *type;
  out.applied = applied;
  if (*type == GameType::MIBOARD) {
    out.state = miboard.state();
  } else {
    out.state = showdown.state();
  }
  return out;
}

}  // namespace sxgame
