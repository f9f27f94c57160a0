#include "sxgame/protocol.hpp"

#include <algorithm>

namespace sxgame {

namespace {

constexpr std::array<std::string_view, kOpcodeCount> kOpcodeNames = {
    "JOIN",         "LEAVE",         "START",       "TURN_BEGIN",   "STRAT_CARD",  "SE_SUBMIT",
    "IDENT_SUBMIT", "VERIFY",        "IDENT_RESULT", "DISCUSS_BEGIN", "DISCUSS_END", "ROLL",
    "MOVE",         "EVENT_CARD",    "CONTROL_PASS", "ROUND_BEGIN",  "ROUND_RESULT", "MATCH_RESULT",
    "TIMER_TICK",   "GAME_OVER",     "ERROR",
};

constexpr char kFieldSep = '|';
constexpr char kChatSep = '>';

bool has_line_terminator(std::string_view s) noexcept {
  return s.find_first_of("\r\n") != std::string_view::npos;
}

// True when the text, ignoring leading spaces, would read as a control prefix.
bool looks_like_control(std::string_view text) noexcept {
  const auto first = text.find_first_not_of(' ');
  return first != std::string_view::npos && text.substr(first).starts_with(kControlPrefix);
}

}  // namespace

std::string_view to_string(Opcode op) noexcept {
  return kOpcodeNames[static_cast<std::size_t>(op)];
}

std::optional<Opcode> parse_opcode(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kOpcodeNames.size(); ++i) {
    if (kOpcodeNames[i] == name) return static_cast<Opcode>(i);
  }
  return std::nullopt;
}

const std::array<Opcode, kOpcodeCount>& all_opcodes() noexcept {
  static const auto ops = [] {
    std::array<Opcode, kOpcodeCount> a{};
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = static_cast<Opcode>(i);
    return a;
  }();
  return ops;
}

std::string_view to_string(ProtocolError::Code code) noexcept {
  switch (code) {
    case ProtocolError::Code::InvalidOpcode: return "InvalidOpcode";
    case ProtocolError::Code::EmptySender: return "EmptySender";
    case ProtocolError::Code::InvalidSender: return "InvalidSender";
    case ProtocolError::Code::InvalidText: return "InvalidText";
    case ProtocolError::Code::MalformedControl: return "MalformedControl";
    case ProtocolError::Code::MalformedChat: return "MalformedChat";
    case ProtocolError::Code::InvalidFrame: return "InvalidFrame";
  }
  return "Unknown";
}

Frame::Frame(std::string line) : line_(std::move(line)) {
  if (line_.empty()) throw ProtocolError(ProtocolError::Code::InvalidFrame, "empty frame");
  if (has_line_terminator(line_)) {
    throw ProtocolError(ProtocolError::Code::InvalidFrame, "frame contains a line terminator");
  }
}

const std::string& ControlMessage::field(std::size_t i) const {
  if (i >= fields.size()) {
    throw ProtocolError(ProtocolError::Code::MalformedControl,
                        std::string(to_string(opcode)) + ": missing field " + std::to_string(i));
  }
  return fields[i];
}

std::string escape_field(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '|': out += "\\p"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    const char c = escaped[i];
    if (c == '|' || c == '\n' || c == '\r') {
      throw ProtocolError(ProtocolError::Code::MalformedControl, "raw separator inside field");
    }
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i == escaped.size()) {
      throw ProtocolError(ProtocolError::Code::MalformedControl, "dangling escape at end of field");
    }
    switch (escaped[i]) {
      case 'p': out += '|'; break;
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default:
        throw ProtocolError(ProtocolError::Code::MalformedControl,
                            std::string("unknown escape \\") + escaped[i]);
    }
  }
  return out;
}

bool is_valid_player_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > 32) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.';
  });
}

Frame encode_control(const ControlMessage& msg) {
  const auto idx = static_cast<std::size_t>(msg.opcode);
  if (idx >= kOpcodeCount) {
    throw ProtocolError(ProtocolError::Code::InvalidOpcode, "opcode outside the closed set");
  }
  std::string line(kControlPrefix);
  line += kOpcodeNames[idx];
  for (const auto& f : msg.fields) {
    line += kFieldSep;
    line += escape_field(f);
  }
  return Frame(std::move(line));
}

Frame encode_chat(const ChatMessage& msg) {
  if (msg.sender.empty()) throw ProtocolError(ProtocolError::Code::EmptySender, "chat sender is empty");
  if (msg.sender.find(kChatSep) != std::string::npos || has_line_terminator(msg.sender) ||
      msg.sender.starts_with(kControlPrefix)) {
    throw ProtocolError(ProtocolError::Code::InvalidSender, "chat sender cannot be framed: " + msg.sender);
  }
  if (has_line_terminator(msg.text)) {
    throw ProtocolError(ProtocolError::Code::InvalidText, "chat text contains a line terminator");
  }
  std::string line = msg.sender;
  line += kChatSep;
  if (looks_like_control(msg.text)) line += ' ';
  line += msg.text;
  return Frame(std::move(line));
}

Frame encode(const Message& msg) {
  return std::visit(
      [](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ControlMessage>) {
          return encode_control(m);
        } else {
          return encode_chat(m);
        }
      },
      msg);
}

Message decode_frame(const Frame& frame) {
  std::string_view line = frame.str();
  if (line.starts_with(kControlPrefix)) {
    line.remove_prefix(kControlPrefix.size());
    const auto bar = line.find(kFieldSep);
    const auto name = line.substr(0, bar);
    const auto op = parse_opcode(name);
    if (!op) {
      throw ProtocolError(ProtocolError::Code::MalformedControl, "unknown opcode '" + std::string(name) + "'");
    }
    ControlMessage msg{*op};
    if (bar == std::string_view::npos) return msg;
    std::string_view rest = line.substr(bar + 1);
    while (true) {
      const auto next = rest.find(kFieldSep);
      msg.fields.push_back(unescape_field(rest.substr(0, next)));
      if (next == std::string_view::npos) break;
      rest.remove_prefix(next + 1);
    }
    return msg;
  }

  const auto sep = line.find(kChatSep);
  if (sep == std::string_view::npos || sep == 0) {
    throw ProtocolError(ProtocolError::Code::MalformedChat, "chat frame without sender separator");
  }
  ChatMessage chat{std::string(line.substr(0, sep)), std::string(line.substr(sep + 1))};
  if (chat.text.starts_with(' ') && looks_like_control(std::string_view(chat.text).substr(1))) {
    chat.text.erase(0, 1);
  }
  return chat;
}

Message decode_frame(std::string_view line) {
  return decode_frame(Frame(std::string(line)));
}

std::string describe(const Message& msg) {
  if (const auto* c = std::get_if<ControlMessage>(&msg)) {
    std::string s = "Control{" + std::string(to_string(c->opcode));
    for (const auto& f : c->fields) s += ", \"" + f + "\"";
    return s + "}";
  }
  const auto& chat = std::get<ChatMessage>(msg);
  return "Chat{" + chat.sender + ": \"" + chat.text + "\"}";
}

}  // namespace sxgame
