#pragma once

// Zones and rooms. A zone holds rooms in creation order; a room hosts exactly
// one game and stops admitting players once started.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sxgame {

enum class GameType { MIBOARD, SHOWDOWN };

std::string_view to_string(GameType type) noexcept;
std::optional<GameType> parse_game_type(std::string_view name) noexcept;

struct Capacity {
  std::size_t min_players;
  std::size_t max_players;
};

Capacity capacity_for(GameType type) noexcept;

class LobbyError : public std::runtime_error {
 public:
  enum class Code { AlreadyInRoom, AlreadyStarted, NotInRoom, UnknownRoom };

  LobbyError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

std::string_view to_string(LobbyError::Code code) noexcept;

struct Room {
  std::string id;
  GameType game_type{};
  std::vector<std::string> players;  // join order
  bool started = false;
  std::size_t min_players = 0;
  std::size_t max_players = 0;

  bool full() const noexcept { return players.size() >= max_players; }
  bool startable() const noexcept { return !started && players.size() >= min_players; }
  bool contains(std::string_view player) const noexcept;
};

enum class LeaveOutcome {
  Removed,         // unstarted room, still has players
  RoomDeleted,     // unstarted room left empty
  EngineHandles,   // started room: roster kept, the game engine removes the player
};

class Zone {
 public:
  explicit Zone(std::string name = "default", std::uint64_t first_room_number = 1);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Room>& rooms() const noexcept { return rooms_; }

  // First-fit: the earliest-created unstarted, non-full room of the same type,
  // otherwise a freshly created room.
  std::string find_or_create_room(GameType type, const std::string& player);

  // Starts the room iff it has reached its minimum player count.
  bool try_start(const std::string& room_id);

  LeaveOutcome leave_room(const std::string& room_id, const std::string& player);

  // Removes a room whose game has finished; its players may join elsewhere.
  void close_room(const std::string& room_id);

  const Room& room(const std::string& room_id) const;
  const Room* find_room(std::string_view room_id) const noexcept;
  const Room* room_of(std::string_view player) const noexcept;

 private:
  Room& mutable_room(const std::string& room_id);

  std::string name_;
  std::vector<Room> rooms_;
  std::uint64_t next_room_number_;
};

std::string format_room_id(std::uint64_t number);
// Parses ids produced by format_room_id; nullopt for anything else.
std::optional<std::uint64_t> parse_room_number(std::string_view room_id) noexcept;

}  // namespace sxgame
