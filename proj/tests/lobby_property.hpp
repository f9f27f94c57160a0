#pragma once

// Randomized join/leave/start sequences run against Zone and the reference
// model side by side. Returns an empty string when every sequence agrees.

#include <random>
#include <sstream>
#include <string>

#include "oracles/lobby_model.hpp"
#include "sxgame/lobby.hpp"

namespace testing_support {

inline std::string check_lobby_sequences(std::size_t sequences, std::uint64_t seed, std::size_t steps = 60) {
  using namespace sxgame;
  std::mt19937_64 rng(seed);
  for (std::size_t seq = 0; seq < sequences; ++seq) {
    Zone zone;
    oracle::LobbyModel model;
    const std::size_t population = 3 + rng() % 10;
    std::ostringstream trace;
    const auto fail = [&](const std::string& why) {
      return "sequence " + std::to_string(seq) + ": " + why + "\n" + trace.str();
    };
    for (std::size_t step = 0; step < steps; ++step) {
      const std::string p = "p" + std::to_string(rng() % population);
      const int action = static_cast<int>(rng() % 10);
      const auto in_room = model.room_of(p);
      if (action < 6) {
        const int type = static_cast<int>(rng() % 2);
        const GameType gt = type == 0 ? GameType::MIBOARD : GameType::SHOWDOWN;
        trace << "join " << p << " " << to_string(gt) << "\n";
        if (in_room) {
          try {
            zone.find_or_create_room(gt, p);
            return fail("double join accepted");
          } catch (const LobbyError& e) {
            if (e.code() != LobbyError::Code::AlreadyInRoom) return fail("wrong error on double join");
          }
          continue;
        }
        const auto id = zone.find_or_create_room(gt, p);
        const auto idx = model.join(type, p);
        if (zone.rooms().size() != model.rooms.size()) return fail("room count differs after join");
        if (zone.rooms()[idx].id != id) return fail("joined " + id + " but first fit is " + zone.rooms()[idx].id);
      } else if (action < 8) {
        if (!in_room) continue;
        const auto& id = zone.rooms()[*in_room].id;
        trace << "start " << id << "\n";
        if (model.rooms[*in_room].started) {
          try {
            zone.try_start(id);
            return fail("restart accepted");
          } catch (const LobbyError& e) {
            if (e.code() != LobbyError::Code::AlreadyStarted) return fail("wrong error on restart");
          }
          continue;
        }
        if (zone.try_start(id) != model.start(*in_room)) return fail("try_start disagrees");
      } else {
        if (!in_room) {
          if (!zone.rooms().empty()) {
            try {
              zone.leave_room(zone.rooms().front().id, p);
              return fail("leave by non-member accepted");
            } catch (const LobbyError& e) {
              if (e.code() != LobbyError::Code::NotInRoom) return fail("wrong error on foreign leave");
            }
          }
          continue;
        }
        const auto id = zone.rooms()[*in_room].id;
        trace << "leave " << p << " " << id << "\n";
        const bool started = model.rooms[*in_room].started;
        const auto outcome = zone.leave_room(id, p);
        model.leave(*in_room, p);
        if (started != (outcome == LeaveOutcome::EngineHandles)) return fail("leave outcome disagrees");
      }
      if (zone.rooms().size() != model.rooms.size()) return fail("room count differs");
      for (std::size_t i = 0; i < model.rooms.size(); ++i) {
        const auto& zr = zone.rooms()[i];
        const auto& mr = model.rooms[i];
        if (zr.players != mr.players || zr.started != mr.started) return fail("room " + zr.id + " differs");
        if (zr.players.size() > zr.max_players) return fail("capacity exceeded in " + zr.id);
        const auto cap = capacity_for(zr.game_type);
        if (zr.max_players != cap.max_players || zr.min_players != cap.min_players) return fail("capacity bounds wrong");
      }
    }
  }
  return {};
}

}  // namespace testing_support
