#include "sxgame/lobby.hpp"

#include <algorithm>
#include <charconv>

namespace sxgame {

std::string_view to_string(GameType type) noexcept {
  return type == GameType::MIBOARD ? "MIBOARD" : "SHOWDOWN";
}

std::optional<GameType> parse_game_type(std::string_view name) noexcept {
  if (name == "MIBOARD" || name == "miboard") return GameType::MIBOARD;
  if (name == "SHOWDOWN" || name == "showdown") return GameType::SHOWDOWN;
  return std::nullopt;
}

Capacity capacity_for(GameType type) noexcept {
  return type == GameType::MIBOARD ? Capacity{3, 4} : Capacity{2, 2};
}

std::string_view to_string(LobbyError::Code code) noexcept {
  switch (code) {
    case LobbyError::Code::AlreadyInRoom: return "AlreadyInRoom";
    case LobbyError::Code::AlreadyStarted: return "AlreadyStarted";
    case LobbyError::Code::NotInRoom: return "NotInRoom";
    case LobbyError::Code::UnknownRoom: return "UnknownRoom";
  }
  return "Unknown";
}

bool Room::contains(std::string_view player) const noexcept {
  return std::find(players.begin(), players.end(), player) != players.end();
}

std::string format_room_id(std::uint64_t number) {
  return "R" + std::to_string(number);
}

std::optional<std::uint64_t> parse_room_number(std::string_view room_id) noexcept {
  if (room_id.size() < 2 || room_id[0] != 'R') return std::nullopt;
  std::uint64_t n = 0;
  const auto* first = room_id.data() + 1;
  const auto* last = room_id.data() + room_id.size();
  const auto [ptr, ec] = std::from_chars(first, last, n);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return n;
}

Zone::Zone(std::string name, std::uint64_t first_room_number)
    : name_(std::move(name)), next_room_number_(first_room_number) {}

std::string Zone::find_or_create_room(GameType type, const std::string& player) {
  if (const Room* r = room_of(player)) {
    throw LobbyError(LobbyError::Code::AlreadyInRoom, player + " is already in room " + r->id);
  }
  auto it = std::find_if(rooms_.begin(), rooms_.end(), [type](const Room& r) {
    return r.game_type == type && !r.started && !r.full();
  });
  if (it == rooms_.end()) {
    const auto cap = capacity_for(type);
    rooms_.push_back(Room{format_room_id(next_room_number_++), type, {}, false, cap.min_players, cap.max_players});
    it = std::prev(rooms_.end());
  }
  it->players.push_back(player);
  return it->id;
}

bool Zone::try_start(const std::string& room_id) {
  Room& r = mutable_room(room_id);
  if (r.started) throw LobbyError(LobbyError::Code::AlreadyStarted, room_id + " already started");
  if (r.players.size() < r.min_players) return false;
  r.started = true;
  return true;
}

LeaveOutcome Zone::leave_room(const std::string& room_id, const std::string& player) {
  Room& r = mutable_room(room_id);
  const auto it = std::find(r.players.begin(), r.players.end(), player);
  if (it == r.players.end()) {
    throw LobbyError(LobbyError::Code::NotInRoom, player + " is not in room " + room_id);
  }
  if (r.started) return LeaveOutcome::EngineHandles;
  r.players.erase(it);
  if (!r.players.empty()) return LeaveOutcome::Removed;
  rooms_.erase(std::find_if(rooms_.begin(), rooms_.end(), [&](const Room& x) { return x.id == room_id; }));
  return LeaveOutcome::RoomDeleted;
}

void Zone::close_room(const std::string& room_id) {
  const auto it = std::find_if(rooms_.begin(), rooms_.end(), [&](const Room& r) { return r.id == room_id; });
  if (it == rooms_.end()) throw LobbyError(LobbyError::Code::UnknownRoom, "no room " + room_id);
  rooms_.erase(it);
}

const Room& Zone::room(const std::string& room_id) const {
  if (const Room* r = find_room(room_id)) return *r;
  throw LobbyError(LobbyError::Code::UnknownRoom, "no room " + room_id);
}

const Room* Zone::find_room(std::string_view room_id) const noexcept {
  const auto it = std::find_if(rooms_.begin(), rooms_.end(), [&](const Room& r) { return r.id == room_id; });
  return it == rooms_.end() ? nullptr : &*it;
}

const Room* Zone::room_of(std::string_view player) const noexcept {
  const auto it = std::find_if(rooms_.begin(), rooms_.end(), [&](const Room& r) { return r.contains(player); });
  return it == rooms_.end() ? nullptr : &*it;
}

Room& Zone::mutable_room(const std::string& room_id) {
  return const_cast<Room&>(room(room_id));
}

}  // namespace sxgame
