#pragma once

// Line-oriented wire format shared by chat and game control traffic.
//
//   control:  "#!" OPCODE ( "|" escaped-field )*
//   chat:     sender ">" text
//
// Field escaping: "|" -> "\p", "\" -> "\\", LF -> "\n", CR -> "\r".
// Chat text is sent as-is except that a single space is inserted after
// ">" when the text (after any leading spaces) starts with "#!".

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sxgame {

enum class Opcode {
  JOIN,
  LEAVE,
  START,
  TURN_BEGIN,
  STRAT_CARD,
  SE_SUBMIT,
  IDENT_SUBMIT,
  VERIFY,
  IDENT_RESULT,
  DISCUSS_BEGIN,
  DISCUSS_END,
  ROLL,
  MOVE,
  EVENT_CARD,
  CONTROL_PASS,
  ROUND_BEGIN,
  ROUND_RESULT,
  MATCH_RESULT,
  TIMER_TICK,
  GAME_OVER,
  ERROR,
};

inline constexpr std::size_t kOpcodeCount = 21;

std::string_view to_string(Opcode op) noexcept;
std::optional<Opcode> parse_opcode(std::string_view name) noexcept;
const std::array<Opcode, kOpcodeCount>& all_opcodes() noexcept;

inline constexpr std::string_view kControlPrefix = "#!";

class ProtocolError : public std::runtime_error {
 public:
  enum class Code { InvalidOpcode, EmptySender, InvalidSender, InvalidText, MalformedControl, MalformedChat, InvalidFrame };

  ProtocolError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

std::string_view to_string(ProtocolError::Code code) noexcept;

/// One line on the wire, without its terminator. Never empty, never contains CR or LF.
class Frame {
 public:
  explicit Frame(std::string line);

  const std::string& str() const noexcept { return line_; }
  bool is_control() const noexcept { return line_.starts_with(kControlPrefix); }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::string line_;
};

struct ControlMessage {
  Opcode opcode{};
  std::vector<std::string> fields;

  ControlMessage() = default;
  ControlMessage(Opcode op, std::vector<std::string> f = {}) : opcode(op), fields(std::move(f)) {}

  const std::string& field(std::size_t i) const;

  friend bool operator==(const ControlMessage&, const ControlMessage&) = default;
};

struct ChatMessage {
  std::string sender;
  std::string text;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using Message = std::variant<ControlMessage, ChatMessage>;

Frame encode_control(const ControlMessage& msg);
Frame encode_chat(const ChatMessage& msg);
Frame encode(const Message& msg);

Message decode_frame(const Frame& frame);
// Convenience for raw transport input; throws InvalidFrame if the line is empty
// or carries a line terminator.
Message decode_frame(std::string_view line);

std::string escape_field(std::string_view field);
std::string unescape_field(std::string_view escaped);

// Player identifiers travel both as chat senders and as control fields.
bool is_valid_player_id(std::string_view id) noexcept;

std::string describe(const Message& msg);

}  // namespace sxgame
