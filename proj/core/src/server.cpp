#include "sxgame/server.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace sxgame {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool contains_opcode(const Broadcasts& msgs, Opcode op) {
  return std::any_of(msgs.begin(), msgs.end(), [op](const auto& m) { return m.opcode == op; });
}

}  // namespace

std::unique_ptr<Evaluator> make_evaluator(const ServerConfig& config, const ContentBundle& content) {
  std::shared_ptr<const VectorSpacePlugin> plugin;
  if (config.vector_space) plugin = default_vector_space(content);
  return std::make_unique<Evaluator>(Tokenizer(content.stopwords()), config.scoring, std::move(plugin));
}

GameServer::GameServer(ServerConfig config, std::shared_ptr<const ContentBundle> content, Scheduler& scheduler,
                       EventLog& log)
    : config_(std::move(config)), content_(std::move(content)), scheduler_(scheduler), log_(log) {
  config_.validate();
  if (!content_ || content_->texts().empty()) throw std::invalid_argument("server needs a content bundle with texts");
  if (config_.text_id && !content_->find_text(*config_.text_id)) {
    throw std::invalid_argument("configured text_id not in content: " + *config_.text_id);
  }
  evaluator_ = make_evaluator(config_, *content_);

  // Room ids must not collide with rooms already in the log.
  std::uint64_t first = 1;
  for (const auto& id : log_.rooms()) {
    if (const auto n = parse_room_number(id)) first = std::max(first, *n + 1);
  }
  zone_ = Zone(config_.zone, first);
}

GameServer::~GameServer() {
  for (auto& [_, room] : rooms_) cancel_room_timers(room);
}

SessionId GameServer::connect(FrameSink sink) {
  const SessionId id = next_session_++;
  sessions_.emplace(id, Session{std::move(sink), std::nullopt, std::nullopt});
  return id;
}

std::optional<std::string> GameServer::player_of(SessionId session) const {
  const auto it = sessions_.find(session);
  return it == sessions_.end() ? std::nullopt : it->second.player;
}

const MiBoardGame* GameServer::miboard(std::string_view room_id) const {
  const auto* r = runtime(room_id);
  return r && r->miboard ? &*r->miboard : nullptr;
}

const ShowdownMatch* GameServer::showdown(std::string_view room_id) const {
  const auto* r = runtime(room_id);
  return r && r->showdown ? &*r->showdown : nullptr;
}

bool GameServer::room_paused(std::string_view room_id) const {
  const auto* r = runtime(room_id);
  return r != nullptr && r->paused;
}

GameServer::RoomRuntime* GameServer::runtime(std::string_view room_id) {
  const auto it = rooms_.find(room_id);
  return it == rooms_.end() ? nullptr : &it->second;
}

const GameServer::RoomRuntime* GameServer::runtime(std::string_view room_id) const {
  const auto it = rooms_.find(room_id);
  return it == rooms_.end() ? nullptr : &it->second;
}

std::optional<SessionId> GameServer::session_of(std::string_view player) const {
  for (const auto& [id, s] : sessions_) {
    if (s.player && *s.player == player) return id;
  }
  return std::nullopt;
}

std::uint64_t GameServer::room_seed(const std::string& room_id) const {
  std::uint64_t h = config_.seed;
  for (unsigned char c : room_id) h = splitmix64(h ^ c);
  return h;
}

void GameServer::send(SessionId sid, const Frame& frame) {
  const auto it = sessions_.find(sid);
  if (it != sessions_.end() && it->second.sink) it->second.sink(frame.str());
}

void GameServer::send_error(SessionId sid, std::string_view code, const std::string& message) {
  send(sid, encode_control(ControlMessage(Opcode::ERROR, {std::string(code), message})));
}

// ---------------------------------------------------------------------------

void GameServer::receive(SessionId sid, std::string_view line) {
  const auto it = sessions_.find(sid);
  if (it == sessions_.end()) return;
  Message msg;
  try {
    msg = decode_frame(line);
  } catch (const ProtocolError& e) {
    send_error(sid, to_string(e.code()), e.what());
    return;
  }
  if (auto* chat = std::get_if<ChatMessage>(&msg)) {
    handle_chat(sid, it->second, *chat);
  } else {
    handle_control(sid, it->second, std::get<ControlMessage>(msg));
  }
}

void GameServer::handle_chat(SessionId sid, Session& session, const ChatMessage& msg) {
  if (!session.player || !session.room) {
    send_error(sid, "NOT_IN_ROOM", "join a room before chatting");
    return;
  }
  if (msg.sender != *session.player) {
    send_error(sid, "WRONG_SENDER", "chat sender does not match this session");
    return;
  }
  auto* room = runtime(*session.room);
  if (room == nullptr) return;
  try {
    log_.append_next(scheduler_.now_ms(), room->id, msg.sender, "CHAT", {msg.text});
  } catch (const LogError&) {
    // Chat is not game state; a failed chat write does not pause the room.
  }
  const Frame frame = encode_chat(msg);
  for (const auto& member : room->members) {
    if (const auto s = session_of(member)) send(*s, frame);
  }
}

void GameServer::handle_control(SessionId sid, Session& session, const ControlMessage& msg) {
  if (msg.opcode == Opcode::JOIN) {
    handle_join(sid, session, msg);
    return;
  }
  if (!session.player) {
    send_error(sid, "NOT_JOINED", "send JOIN first");
    return;
  }
  if (msg.fields.empty() || msg.fields[0] != *session.player) {
    send_error(sid, "WRONG_ACTOR", "first field must name this session's player");
    return;
  }
  if (msg.opcode == Opcode::LEAVE) {
    handle_leave(sid, session);
    return;
  }
  if (!session.room) {
    send_error(sid, "NOT_IN_ROOM", "not in a room");
    return;
  }
  if (msg.opcode == Opcode::START) {
    auto* room = runtime(*session.room);
    const Room& lobby_room = zone_.room(room->id);
    if (lobby_room.started) {
      send_error(sid, "AlreadyStarted", room->id + " already started");
    } else if (!lobby_room.startable()) {
      send_error(sid, "NOT_ENOUGH_PLAYERS", room->id + " needs " + std::to_string(lobby_room.min_players) + " players");
    } else {
      start_room(*room);
    }
    return;
  }
  handle_game_action(session, msg);
}

void GameServer::handle_join(SessionId sid, Session& session, const ControlMessage& msg) {
  if (msg.fields.size() < 2) {
    send_error(sid, "MALFORMED", "JOIN needs player and game type");
    return;
  }
  const std::string& player = msg.fields[0];
  const auto type = parse_game_type(msg.fields[1]);
  if (!is_valid_player_id(player)) {
    send_error(sid, "INVALID_PLAYER", "invalid player id '" + player + "'");
    return;
  }
  if (!type) {
    send_error(sid, "MALFORMED", "unknown game type '" + msg.fields[1] + "'");
    return;
  }
  if (session.room || (session.player && *session.player != player)) {
    send_error(sid, "ALREADY_JOINED", "this session is already bound");
    return;
  }
  if (const auto other = session_of(player); other && *other != sid) {
    send_error(sid, "PLAYER_IN_USE", player + " is connected on another session");
    return;
  }
  std::string room_id;
  try {
    room_id = zone_.find_or_create_room(*type, player);
  } catch (const LobbyError& e) {
    send_error(sid, to_string(e.code()), e.what());
    return;
  }
  auto [it, created] = rooms_.try_emplace(room_id);
  RoomRuntime& room = it->second;
  if (created) {
    room.id = room_id;
    room.type = *type;
  }
  room.members.push_back(player);
  session.player = player;
  session.room = room_id;
  const auto count = zone_.room(room_id).players.size();
  publish(room, player,
          {ControlMessage(Opcode::JOIN, {player, room_id, std::string(to_string(*type)), std::to_string(count)})});
  maybe_autostart(room);
}

void GameServer::maybe_autostart(RoomRuntime& room) {
  const Room& r = zone_.room(room.id);
  if (r.started || room.paused) return;
  if (r.full()) {
    start_room(room);
    return;
  }
  if (r.startable()) {
    if (!room.fill_timer) {
      schedule_room_timer(room, room.fill_timer, "FILL", config_.fill_timeout_seconds, [this](RoomRuntime& rr) {
        const Room* lr = zone_.find_room(rr.id);
        if (lr != nullptr && lr->startable() && !rr.paused) start_room(rr);
      });
    }
  } else if (room.fill_timer) {
    scheduler_.cancel(*room.fill_timer);
    room.fill_timer.reset();
  }
}

void GameServer::start_room(RoomRuntime& room) {
  if (!zone_.try_start(room.id)) return;
  if (room.fill_timer) {
    scheduler_.cancel(*room.fill_timer);
    room.fill_timer.reset();
  }
  const Room& r = zone_.room(room.id);
  Broadcasts out;
  if (room.type == GameType::MIBOARD) {
    room.miboard.emplace(r.players, *content_, config_.miboard, room_seed(room.id));
    out = room.miboard->start();
  } else {
    const PracticeText* text = nullptr;
    if (config_.text_id) {
      text = content_->find_text(*config_.text_id);
    } else {
      const auto n = parse_room_number(room.id).value_or(1);
      text = &content_->texts()[(n - 1) % content_->texts().size()];
    }
    const Evaluator* ev = evaluator_.get();
    room.showdown.emplace(r.players, *text, config_.showdown,
                          [ev](std::string_view se, std::string_view target, std::string_view prior) {
                            return ev->evaluate(se, target, prior);
                          });
    out = room.showdown->start();
  }
  publish(room, std::string(kSystemActor), out);
  after_engine_step(room, out);
}

void GameServer::handle_game_action(Session& session, const ControlMessage& msg) {
  const SessionId sid = *session_of(*session.player);
  auto* room = runtime(*session.room);
  if (room == nullptr) return;
  if (room->paused) {
    send_error(sid, "ROOM_PAUSED", room->id + " is paused after a logging failure");
    return;
  }
  if (!room->miboard && !room->showdown) {
    send_error(sid, "NOT_STARTED", room->id + " has not started");
    return;
  }
  const std::string& player = msg.fields[0];
  const auto field = [&](std::size_t i) -> const std::string& { return msg.field(i); };

  Broadcasts out;
  try {
    if (room->miboard) {
      auto& g = *room->miboard;
      switch (msg.opcode) {
        case Opcode::SE_SUBMIT: out = g.submit_se(player, field(1)); break;
        case Opcode::IDENT_SUBMIT: {
          const auto start = parse_index(field(3));
          const auto end = parse_index(field(4));
          if (!start || !end) {
            send_error(sid, "MALFORMED", "highlight bounds must be non-negative integers");
            return;
          }
          out = g.submit_identification(player, CmbArgument{field(1), field(2), *start, *end});
          break;
        }
        case Opcode::VERIFY: out = g.verify_and_resolve(player, field(1)); break;
        case Opcode::DISCUSS_END: out = g.vote_end_discussion(player); break;
        case Opcode::ROLL: out = g.roll_and_move(player); break;
        case Opcode::EVENT_CARD: out = g.draw_event(player); break;
        default:
          send_error(sid, "UNSUPPORTED", std::string(to_string(msg.opcode)) + " is not a MiBoard request");
          return;
      }
    } else {
      auto& m = *room->showdown;
      switch (msg.opcode) {
        case Opcode::SE_SUBMIT: out = m.submit_se(player, msg.fields.size() > 1 ? msg.fields[1] : std::string{}); break;
        case Opcode::TIMER_TICK: out = m.acknowledge(player); break;
        default:
          send_error(sid, "UNSUPPORTED", std::string(to_string(msg.opcode)) + " is not a Showdown request");
          return;
      }
    }
  } catch (const GameError& e) {
    send_error(sid, to_string(e.code()), e.what());
    return;
  } catch (const ProtocolError& e) {
    send_error(sid, "MALFORMED", e.what());
    return;
  }
  publish(*room, player, out);
  after_engine_step(*room, out);
}

void GameServer::publish(RoomRuntime& room, const std::string& actor, const Broadcasts& msgs) {
  if (msgs.empty() || room.paused) return;
  try {
    for (const auto& m : msgs) {
      log_.append_next(scheduler_.now_ms(), room.id, actor, std::string(to_string(m.opcode)), m.fields);
    }
  } catch (const LogError& e) {
    room.paused = true;
    cancel_room_timers(room);
    const Frame notice = encode_control(ControlMessage(Opcode::ERROR, {"LOG_IO", e.what()}));
    for (const auto& member : room.members) {
      if (const auto s = session_of(member)) send(*s, notice);
    }
    return;
  }
  std::vector<Frame> frames;
  frames.reserve(msgs.size());
  for (const auto& m : msgs) frames.push_back(encode_control(m));
  const auto members = room.members;
  for (const auto& member : members) {
    const auto s = session_of(member);
    if (!s) continue;
    for (const auto& f : frames) send(*s, f);
  }
}

void GameServer::after_engine_step(RoomRuntime& room, const Broadcasts& msgs) {
  if (room.paused) return;
  if (room.miboard) {
    auto& g = *room.miboard;
    if (g.finished()) {
      close_room(room);
      return;
    }
    const auto turn = g.state().turn_no;
    if (contains_opcode(msgs, Opcode::TURN_BEGIN)) {
      schedule_room_timer(room, room.turn_timer, "TURN", config_.miboard.turn_timeout_seconds,
                          [this, turn](RoomRuntime& rr) {
                            if (!rr.miboard || rr.miboard->finished() || rr.miboard->state().turn_no != turn) return;
                            const auto out = rr.miboard->abandon_turn();
                            publish(rr, std::string(kSystemActor), out);
                            after_engine_step(rr, out);
                          });
    }
    if (contains_opcode(msgs, Opcode::DISCUSS_BEGIN)) {
      schedule_room_timer(room, room.discussion_timer, "DISCUSSION", config_.miboard.discussion_seconds,
                          [this, turn](RoomRuntime& rr) {
                            if (!rr.miboard || rr.miboard->state().phase != MiBoardPhase::DISCUSSION ||
                                rr.miboard->state().turn_no != turn) {
                              return;
                            }
                            const auto out = rr.miboard->end_discussion();
                            publish(rr, std::string(kSystemActor), out);
                            after_engine_step(rr, out);
                          });
    }
    return;
  }
  if (room.showdown) {
    auto& m = *room.showdown;
    if (m.finished()) {
      close_room(room);
      return;
    }
    if (m.timer_epoch() != room.showdown_epoch) {
      room.showdown_epoch = m.timer_epoch();
      const auto timer = m.current_timer();
      if (!timer) return;
      if (!valid_timer_seconds(timer->seconds)) {
        throw std::logic_error("Showdown timer is not a positive multiple of 2 s");
      }
      const auto epoch = m.timer_epoch();
      schedule_room_timer(room, room.phase_timer, std::string(to_string(timer->phase)), timer->seconds,
                          [this, epoch](RoomRuntime& rr) {
                            if (!rr.showdown || rr.showdown->timer_epoch() != epoch) return;
                            const auto out = rr.showdown->timer_expired();
                            publish(rr, std::string(kSystemActor), out);
                            after_engine_step(rr, out);
                          });
    }
  }
}

void GameServer::schedule_room_timer(RoomRuntime& room, std::optional<TimerId>& slot, const std::string& kind,
                                     int seconds, std::function<void(RoomRuntime&)> fire) {
  if (slot) scheduler_.cancel(*slot);
  const std::int64_t delay = static_cast<std::int64_t>(seconds) * 1000;
  scheduled_.push_back(ScheduledTimer{room.id, kind, seconds, scheduler_.now_ms() + delay});
  slot = scheduler_.schedule_after(delay, [this, id = room.id, &slot, fire = std::move(fire)] {
    auto* rr = runtime(id);
    if (rr == nullptr || rr->paused || rr->finished) return;
    slot.reset();
    fire(*rr);
  });
}

void GameServer::cancel_room_timers(RoomRuntime& room) {
  for (auto* slot : {&room.fill_timer, &room.turn_timer, &room.discussion_timer, &room.phase_timer}) {
    if (*slot) scheduler_.cancel(**slot);
    slot->reset();
  }
}

void GameServer::close_room(RoomRuntime& room) {
  room.finished = true;
  cancel_room_timers(room);
  finished_rooms_.push_back(room.id);
  if (zone_.find_room(room.id) != nullptr) zone_.close_room(room.id);
  for (auto& [_, s] : sessions_) {
    if (s.room && *s.room == room.id) s.room.reset();
  }
  room.members.clear();
}

void GameServer::handle_leave(SessionId sid, Session& session) {
  (void)sid;
  if (!session.room || !session.player) return;
  auto* room = runtime(*session.room);
  const std::string player = *session.player;
  session.room.reset();
  if (room == nullptr || room->finished) return;

  const Room& lobby_room = zone_.room(room->id);
  if (!lobby_room.started) {
    publish(*room, player, {ControlMessage(Opcode::LEAVE, {player, room->id})});
    std::erase(room->members, player);
    if (zone_.leave_room(room->id, player) == LeaveOutcome::RoomDeleted) {
      cancel_room_timers(*room);
      rooms_.erase(room->id);
      return;
    }
    maybe_autostart(*room);
    return;
  }
  remove_from_started_room(*room, {player});
}

void GameServer::remove_from_started_room(RoomRuntime& room, const std::vector<std::string>& players) {
  for (const auto& p : players) std::erase(room.members, p);
  if (room.paused || room.finished) return;
  Broadcasts out;
  try {
    if (room.miboard) {
      for (const auto& p : players) {
        if (room.miboard->finished()) break;
        auto step = room.miboard->remove_player(p);
        out.insert(out.end(), step.begin(), step.end());
      }
    } else if (room.showdown) {
      out = room.showdown->remove_players(players);
    }
  } catch (const GameError&) {
    return;
  }
  publish(room, players.size() == 1 ? players.front() : std::string(kSystemActor), out);
  after_engine_step(room, out);
}

void GameServer::disconnect(SessionId sid) {
  disconnect_all({sid});
}

void GameServer::disconnect_all(const std::vector<SessionId>& sids) {
  std::map<std::string, std::vector<std::string>> started_departures;
  for (const auto sid : sids) {
    const auto it = sessions_.find(sid);
    if (it == sessions_.end()) continue;
    Session& s = it->second;
    if (s.room && s.player) {
      auto* room = runtime(*s.room);
      const Room* lr = room ? zone_.find_room(room->id) : nullptr;
      if (room && !room->finished && lr && lr->started) {
        started_departures[room->id].push_back(*s.player);
        s.room.reset();
      } else {
        handle_leave(sid, s);
      }
    }
    sessions_.erase(it);
  }
  for (auto& [room_id, players] : started_departures) {
    if (auto* room = runtime(room_id)) remove_from_started_room(*room, players);
  }
}

}  // namespace sxgame
