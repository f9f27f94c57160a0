#pragma once

// Game server: sessions exchange newline-free frames with the server, which
// runs the lobby and one authoritative engine per started room. Every control
// message a room broadcasts is appended to the event log before any member
// sees it. If the log cannot be written the room pauses.
//
// The server itself is single-threaded: receive(), disconnect() and scheduler
// callbacks must all run on the scheduler's thread.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sxgame/config.hpp"
#include "sxgame/content.hpp"
#include "sxgame/evaluator.hpp"
#include "sxgame/event_log.hpp"
#include "sxgame/lobby.hpp"
#include "sxgame/miboard.hpp"
#include "sxgame/protocol.hpp"
#include "sxgame/scheduler.hpp"
#include "sxgame/showdown.hpp"

namespace sxgame {

using SessionId = std::uint64_t;
using FrameSink = std::function<void(const std::string& frame)>;

struct ScheduledTimer {
  std::string room_id;
  std::string kind;  // FILL, TURN, DISCUSSION, or a Showdown phase name
  int seconds = 0;
  std::int64_t at_ms = 0;
};

class GameServer {
 public:
  GameServer(ServerConfig config, std::shared_ptr<const ContentBundle> content, Scheduler& scheduler, EventLog& log);
  ~GameServer();

  GameServer(const GameServer&) = delete;
  GameServer& operator=(const GameServer&) = delete;

  SessionId connect(FrameSink sink);
  void receive(SessionId session, std::string_view line);
  void disconnect(SessionId session);
  // Several departures processed as one instant (matters for Showdown abandonment).
  void disconnect_all(const std::vector<SessionId>& sessions);

  const Zone& zone() const noexcept { return zone_; }
  const MiBoardGame* miboard(std::string_view room_id) const;
  const ShowdownMatch* showdown(std::string_view room_id) const;
  bool room_paused(std::string_view room_id) const;
  // Rooms whose game has ended, in completion order.
  const std::vector<std::string>& finished_rooms() const noexcept { return finished_rooms_; }
  const std::vector<ScheduledTimer>& scheduled_timers() const noexcept { return scheduled_; }
  const Evaluator& evaluator() const noexcept { return *evaluator_; }
  std::optional<std::string> player_of(SessionId session) const;

 private:
  struct Session {
    FrameSink sink;
    std::optional<std::string> player;
    std::optional<std::string> room;
  };

  struct RoomRuntime {
    std::string id;
    GameType type{};
    std::vector<std::string> members;  // players still attached to the room
    std::optional<MiBoardGame> miboard;
    std::optional<ShowdownMatch> showdown;
    bool paused = false;
    bool finished = false;
    std::optional<TimerId> fill_timer;
    std::optional<TimerId> turn_timer;
    std::optional<TimerId> discussion_timer;
    std::optional<TimerId> phase_timer;
    std::uint64_t showdown_epoch = 0;
  };

  void handle_control(SessionId sid, Session& session, const ControlMessage& msg);
  void handle_chat(SessionId sid, Session& session, const ChatMessage& msg);
  void handle_join(SessionId sid, Session& session, const ControlMessage& msg);
  void handle_leave(SessionId sid, Session& session);
  void handle_game_action(Session& session, const ControlMessage& msg);

  void start_room(RoomRuntime& room);
  void maybe_autostart(RoomRuntime& room);
  void publish(RoomRuntime& room, const std::string& actor, const Broadcasts& msgs);
  void after_engine_step(RoomRuntime& room, const Broadcasts& msgs);
  void schedule_room_timer(RoomRuntime& room, std::optional<TimerId>& slot, const std::string& kind, int seconds,
                           std::function<void(RoomRuntime&)> fire);
  void cancel_room_timers(RoomRuntime& room);
  void close_room(RoomRuntime& room);
  void remove_from_started_room(RoomRuntime& room, const std::vector<std::string>& players);

  void send(SessionId sid, const Frame& frame);
  void send_error(SessionId sid, std::string_view code, const std::string& message);
  RoomRuntime* runtime(std::string_view room_id);
  const RoomRuntime* runtime(std::string_view room_id) const;
  std::optional<SessionId> session_of(std::string_view player) const;
  std::uint64_t room_seed(const std::string& room_id) const;

  ServerConfig config_;
  std::shared_ptr<const ContentBundle> content_;
  Scheduler& scheduler_;
  EventLog& log_;
  std::unique_ptr<Evaluator> evaluator_;
  Zone zone_;
  std::map<SessionId, Session> sessions_;
  std::map<std::string, RoomRuntime, std::less<>> rooms_;
  std::vector<std::string> finished_rooms_;
  std::vector<ScheduledTimer> scheduled_;
  SessionId next_session_ = 1;
};

// Builds the evaluator a server would use for this configuration and content.
std::unique_ptr<Evaluator> make_evaluator(const ServerConfig& config, const ContentBundle& content);

}  // namespace sxgame
