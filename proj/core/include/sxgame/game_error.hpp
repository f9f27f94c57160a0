#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sxgame {

// Rejections raised by the game engines. A rejected action leaves the engine unchanged.
class GameError : public std::runtime_error {
 public:
  enum class Code {
    GameFinished,
    WrongPhase,
    NotReader,
    NotGuesser,
    NotActive,
    UnknownPlayer,
    EmptySE,
    DuplicateIdent,
    InvalidStrategy,
    InvalidReason,
    InvalidHighlight,
    WrongPlayerCount,
    EmptyText,
    DuplicateSubmission,
  };

  GameError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

std::string_view to_string(GameError::Code code) noexcept;

}  // namespace sxgame
