#include "sxgame/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "sxgame/miboard.hpp"
#include "sxgame/protocol.hpp"
#include "sxgame/rng.hpp"
#include "sxgame/scheduler.hpp"
#include "sxgame/server.hpp"
#include "sxgame/showdown.hpp"

namespace sxgame {

std::string_view to_string(HarnessError::Code code) noexcept {
  switch (code) {
    case HarnessError::Code::ScenarioTimeout: return "ScenarioTimeout";
    case HarnessError::Code::ProtocolViolation: return "ProtocolViolation";
    case HarnessError::Code::InvalidScenario: return "InvalidScenario";
  }
  return "?";
}

std::string_view to_string(IdentPolicy policy) noexcept {
  switch (policy) {
    case IdentPolicy::ALWAYS_MATCH: return "ALWAYS_MATCH";
    case IdentPolicy::ALWAYS_MISS: return "ALWAYS_MISS";
    case IdentPolicy::RANDOM: return "RANDOM";
  }
  return "?";
}

std::optional<IdentPolicy> parse_ident_policy(std::string_view name) noexcept {
  for (auto p : {IdentPolicy::ALWAYS_MATCH, IdentPolicy::ALWAYS_MISS, IdentPolicy::RANDOM}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

namespace {

std::int64_t to_ms(double seconds) { return std::llround(seconds * 1000.0); }

double to_s(double ms) { return ms / 1000.0; }

}  // namespace

ThinkTime ThinkTime::fixed(double seconds) { return ThinkTime{to_ms(seconds), to_ms(seconds)}; }

ThinkTime ThinkTime::uniform(double lo_seconds, double hi_seconds) {
  return ThinkTime{to_ms(lo_seconds), to_ms(hi_seconds)};
}

void BotScript::validate() const {
  if (think.min_ms <= 0 || think.max_ms < think.min_ms) {
    throw HarnessError(HarnessError::Code::InvalidScenario, "think times must be positive with min <= max");
  }
  if (!player.empty() && !is_valid_player_id(player)) {
    throw HarnessError(HarnessError::Code::InvalidScenario, "invalid bot id '" + player + "'");
  }
  if (depart_phase && !depart_at) {
    throw HarnessError(HarnessError::Code::InvalidScenario, "depart_phase requires depart_at");
  }
}

// ---------------------------------------------------------------------------
// Aggregates

std::int64_t PlayerLull::max_ms() const noexcept {
  std::int64_t m = 0;
  for (const auto& [a, b] : intervals) m = std::max(m, b - a);
  return m;
}

std::int64_t PlayerLull::total_ms() const noexcept {
  std::int64_t t = 0;
  for (const auto& [a, b] : intervals) t += b - a;
  return t;
}

double PlayerLull::mean_ms() const noexcept {
  return intervals.empty() ? 0.0 : static_cast<double>(total_ms()) / static_cast<double>(intervals.size());
}

std::int64_t LullReport::max_ms() const noexcept {
  std::int64_t m = 0;
  for (const auto& p : players) m = std::max(m, p.max_ms());
  return m;
}

std::int64_t LullReport::total_ms() const noexcept {
  std::int64_t t = 0;
  for (const auto& p : players) t += p.total_ms();
  return t;
}

std::size_t LullReport::interval_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : players) n += p.intervals.size();
  return n;
}

double LullReport::mean_ms() const noexcept {
  const auto n = interval_count();
  return n == 0 ? 0.0 : static_cast<double>(total_ms()) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Idle analysis

namespace {

bool miboard_has_action(const MiBoardState& s, const MiBoardPlayer& p) {
  const bool reader = s.reader() == p.id;
  switch (s.phase) {
    case MiBoardPhase::AWAITING_SE:
    case MiBoardPhase::VERIFICATION:
    case MiBoardPhase::ROLL_MOVE:
    case MiBoardPhase::EVENT: return reader;
    case MiBoardPhase::IDENTIFICATION: return !reader && !s.pending_idents.contains(p.id);
    case MiBoardPhase::DISCUSSION: return true;
    case MiBoardPhase::FINISHED: return true;
  }
  return true;
}

bool showdown_has_action(const ShowdownState& s, const ShowdownPlayer& p) {
  switch (s.phase) {
    case ShowdownPhase::READING:
    case ShowdownPhase::ROUND_RESULT: return true;
    case ShowdownPhase::COMPOSING: return !p.submitted;
    case ShowdownPhase::SCORING: return false;
    case ShowdownPhase::FINISHED: return true;
  }
  return true;
}

struct IdleTracker {
  std::map<std::string, PlayerLull> lulls;
  std::map<std::string, bool> open;
  std::vector<std::string> order;

  void add_player(const std::string& id) {
    order.push_back(id);
    lulls[id].player = id;
    open[id] = false;
  }

  void idle(const std::string& id, std::int64_t from, std::int64_t to, std::uint64_t unit) {
    auto& l = lulls[id];
    if (open[id] && !l.intervals.empty() && l.intervals.back().second == from) {
      l.intervals.back().second = to;
    } else {
      l.intervals.emplace_back(from, to);
      open[id] = true;
    }
    for (auto& u : l.per_unit) {
      if (u.unit == unit) u.idle_ms += to - from;
    }
  }

  void busy(const std::string& id) { open[id] = false; }

  void open_unit(const std::string& id, std::uint64_t unit) { lulls[id].per_unit.push_back(UnitIdle{unit, 0}); }

  std::vector<PlayerLull> take() {
    std::vector<PlayerLull> out;
    for (const auto& id : order) out.push_back(std::move(lulls[id]));
    return out;
  }
};

}  // namespace

LullReport analyze_lulls(GameType game, std::span<const LogRecord> records) {
  LullReport report;
  report.game = game;
  IdleTracker tracker;
  MiBoardReplica mb;
  ShowdownReplica sd;
  bool started = false;
  std::int64_t start_ms = 0;
  std::int64_t prev_ms = 0;
  std::int64_t end_ms = 0;

  for (const auto& rec : records) {
    const auto op = parse_opcode(rec.opcode);
    if (!op) continue;
    if (!started && *op != Opcode::START) continue;
    const ControlMessage msg(*op, rec.fields);

    if (!started) {
      started = true;
      start_ms = prev_ms = rec.time_ms;
    } else if (rec.time_ms > prev_ms) {
      if (game == GameType::MIBOARD) {
        const auto& s = mb.state();
        for (const auto& p : s.players) {
          if (p.active && !miboard_has_action(s, p)) tracker.idle(p.id, prev_ms, rec.time_ms, s.turn_no);
        }
      } else {
        const auto& s = sd.state();
        for (const auto& p : s.players) {
          if (p.active && !showdown_has_action(s, p)) tracker.idle(p.id, prev_ms, rec.time_ms, s.round_no);
        }
      }
      prev_ms = rec.time_ms;
    }
    end_ms = rec.time_ms;

    bool done = false;
    if (game == GameType::MIBOARD) {
      mb.apply(msg);
      const auto& s = mb.state();
      if (*op == Opcode::START) {
        for (const auto& p : s.players) tracker.add_player(p.id);
      } else if (*op == Opcode::TURN_BEGIN) {
        for (const auto& p : s.players) {
          if (p.active && p.id != s.reader()) tracker.open_unit(p.id, s.turn_no);
        }
      } else if (*op == Opcode::EVENT_CARD) {
        ++report.turns_completed;
        std::size_t last_active = 0;
        for (std::size_t i = 0; i < s.players.size(); ++i) {
          if (s.players[i].active) last_active = i;
        }
        if (s.reader_index == last_active) ++report.rounds_completed;
      }
      for (const auto& p : s.players) {
        if (miboard_has_action(s, p)) tracker.busy(p.id);
      }
      done = s.phase == MiBoardPhase::FINISHED;
    } else {
      sd.apply(msg);
      const auto& s = sd.state();
      if (*op == Opcode::START) {
        for (const auto& p : s.players) tracker.add_player(p.id);
      } else if (*op == Opcode::ROUND_BEGIN) {
        for (const auto& p : s.players) tracker.open_unit(p.id, s.round_no);
      } else if (*op == Opcode::ROUND_RESULT) {
        ++report.rounds_completed;
      }
      for (const auto& p : s.players) {
        if (showdown_has_action(s, p)) tracker.busy(p.id);
      }
      done = s.phase == ShowdownPhase::FINISHED;
    }
    if (done) break;
  }
  report.duration_ms = started ? end_ms - start_ms : 0;
  report.players = tracker.take();
  return report;
}

LullComparison compare_lulls(const LullReport& a, const LullReport& b) {
  LullComparison c;
  c.max_diff_s = to_s(static_cast<double>(b.max_ms() - a.max_ms()));
  c.mean_diff_s = to_s(b.mean_ms() - a.mean_ms());
  c.total_diff_s = to_s(static_cast<double>(b.total_ms() - a.total_ms()));
  if (a.game != b.game) {
    const auto& sd = a.game == GameType::SHOWDOWN ? a : b;
    const auto& mb = a.game == GameType::SHOWDOWN ? b : a;
    c.showdown_max_lower = sd.max_ms() < mb.max_ms();
    c.showdown_mean_lower = sd.mean_ms() < mb.mean_ms();
  }
  return c;
}

// ---------------------------------------------------------------------------
// Report text format

void write_report(std::ostream& out, const LullReport& r) {
  const auto secs = [](double ms) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << ms / 1000.0;
    return s.str();
  };
  out << "sxgame-lull-report 1\n";
  out << "game " << to_string(r.game) << "\n";
  out << "duration_ms " << r.duration_ms << "\n";
  out << "rounds_completed " << r.rounds_completed << "\n";
  out << "turns_completed " << r.turns_completed << "\n";
  out << "# max_idle_s " << secs(static_cast<double>(r.max_ms())) << "\n";
  out << "# mean_idle_s " << secs(r.mean_ms()) << "\n";
  out << "# total_idle_s " << secs(static_cast<double>(r.total_ms())) << "\n";
  for (const auto& p : r.players) {
    out << "player " << p.player << "\n";
    out << "# " << p.player << " intervals=" << p.intervals.size() << " max_s=" << secs(static_cast<double>(p.max_ms()))
        << " mean_s=" << secs(p.mean_ms()) << " total_s=" << secs(static_cast<double>(p.total_ms())) << "\n";
    for (const auto& [a, b] : p.intervals) out << "interval " << a << " " << b << "\n";
    for (const auto& u : p.per_unit) out << "unit " << u.unit << " " << u.idle_ms << "\n";
  }
  out << "end\n";
}

LullReport read_report(std::istream& in) {
  const auto fail = [](std::size_t line, const std::string& why) {
    return std::invalid_argument("report line " + std::to_string(line) + ": " + why);
  };
  LullReport r;
  std::string line;
  std::size_t n = 0;
  bool header = false;
  bool ended = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (!header) {
      int version = 0;
      if (key != "sxgame-lull-report" || !(ls >> version) || version != 1) throw fail(n, "bad header");
      header = true;
      continue;
    }
    if (key == "game") {
      std::string g;
      ls >> g;
      const auto t = parse_game_type(g);
      if (!t) throw fail(n, "unknown game '" + g + "'");
      r.game = *t;
    } else if (key == "duration_ms") {
      ls >> r.duration_ms;
    } else if (key == "rounds_completed") {
      ls >> r.rounds_completed;
    } else if (key == "turns_completed") {
      ls >> r.turns_completed;
    } else if (key == "player") {
      PlayerLull p;
      ls >> p.player;
      r.players.push_back(std::move(p));
    } else if (key == "interval" || key == "unit") {
      if (r.players.empty()) throw fail(n, key + " before any player");
      if (key == "interval") {
        std::int64_t a = 0, b = 0;
        ls >> a >> b;
        if (b < a) throw fail(n, "interval ends before it starts");
        r.players.back().intervals.emplace_back(a, b);
      } else {
        UnitIdle u;
        ls >> u.unit >> u.idle_ms;
        r.players.back().per_unit.push_back(u);
      }
    } else if (key == "end") {
      ended = true;
      break;
    } else {
      throw fail(n, "unknown key '" + key + "'");
    }
    if (ls.fail()) throw fail(n, "bad value");
  }
  if (!header || !ended) throw std::invalid_argument("report truncated");
  return r;
}

// ---------------------------------------------------------------------------
// Diff

std::string diff_text(std::string_view expected, std::string_view actual) {
  std::size_t i = 0;
  while (i < expected.size() && i < actual.size() && expected[i] == actual[i]) ++i;
  if (i == expected.size() && i == actual.size()) return "(identical)";
  const std::size_t from = i > 20 ? i - 20 : 0;
  std::ostringstream out;
  out << "first difference at byte " << i << "\n"
      << "- " << expected.substr(from, 60) << "\n"
      << "+ " << actual.substr(from, 60) << "\n"
      << "  " << std::string(i - from, ' ') << "^";
  return out.str();
}

// ---------------------------------------------------------------------------
// Scenario

namespace {

constexpr std::string_view kDefaultSe =
    "The membrane works like a gate because its proteins choose which molecules pass, so the cell keeps "
    "nutrients in and waste out, linking back to why cells need energy";

class Run;

class Bot {
 public:
  Bot(Run& run, BotScript script, GameType game, std::uint64_t seed)
      : run_(run), script_(std::move(script)), game_(game), rng_(seed) {}

  const std::string& id() const noexcept { return script_.player; }
  SessionId session() const noexcept { return sid_; }
  bool departed() const noexcept { return departed_; }
  bool started() const noexcept { return started_; }
  std::string snapshot() const { return game_ == GameType::MIBOARD ? serialize(mb_.state()) : serialize(sd_.state()); }

  void connect();
  void on_frame(const std::string& line);

 private:
  void consider();
  void consider_miboard();
  void consider_showdown();
  void send(ControlMessage msg);
  void depart();
  bool first_time(const std::string& key) { return done_.insert(key).second; }
  std::int64_t think_ms() { return rng_.uniform(script_.think.min_ms, script_.think.max_ms); }
  std::string next_se() {
    if (script_.se_corpus.empty()) return std::string(kDefaultSe);
    return script_.se_corpus[se_cursor_++ % script_.se_corpus.size()];
  }

  Run& run_;
  BotScript script_;
  GameType game_;
  Rng rng_;
  SessionId sid_ = 0;
  MiBoardReplica mb_;
  ShowdownReplica sd_;
  bool started_ = false;
  bool departed_ = false;
  bool consider_pending_ = false;
  std::size_t se_cursor_ = 0;
  std::set<std::string> done_;
};

class Run {
 public:
  Run(const Scenario& sc)
      : scenario(sc), log(std::make_unique<MemoryLogStorage>()), server(make_config(sc), sc.content, scheduler, log) {}

  static ServerConfig make_config(const Scenario& sc) {
    ServerConfig c = sc.config;
    c.seed = sc.seed;
    return c;
  }

  void violate(std::string what) {
    if (!violation) violation = std::move(what);
  }

  const Scenario& scenario;
  SimScheduler scheduler;
  EventLog log;
  GameServer server;
  std::vector<std::unique_ptr<Bot>> bots;
  std::optional<std::string> violation;
  std::optional<std::string> room_id;
  std::size_t frames = 0;
};

void Bot::connect() {
  sid_ = run_.server.connect([this](const std::string& line) { on_frame(line); });
  send(ControlMessage(Opcode::JOIN, {id(), std::string(to_string(game_))}));
}

void Bot::on_frame(const std::string& line) {
  ++run_.frames;
  Message msg;
  try {
    msg = decode_frame(line);
  } catch (const ProtocolError& e) {
    run_.violate(id() + " received an undecodable frame (" + e.what() + "): " + line);
    return;
  }
  const std::string reencoded = encode(msg).str();
  if (reencoded != line) {
    run_.violate(id() + " received a frame that does not re-encode identically\n" + diff_text(line, reencoded));
    return;
  }
  const auto* c = std::get_if<ControlMessage>(&msg);
  if (c == nullptr) return;
  if (c->opcode == Opcode::ERROR) {
    const std::string code = c->fields.empty() ? "" : c->fields[0];
    if (code != "TURN_TIMEOUT" && code != "EVALUATOR_FAILURE") {
      run_.violate(id() + " got an error reply: " + line);
      return;
    }
  }
  if (c->opcode == Opcode::JOIN && c->fields.size() >= 2 && c->fields[0] == id()) run_.room_id = c->fields[1];
  if (!started_ && c->opcode == Opcode::START) started_ = true;
  if (!started_) return;
  try {
    if (game_ == GameType::MIBOARD) {
      mb_.apply(*c);
    } else {
      sd_.apply(*c);
    }
  } catch (const std::exception& e) {
    run_.violate(id() + " replica rejected " + line + ": " + e.what());
    return;
  }
  if (!consider_pending_ && !departed_) {
    consider_pending_ = true;
    run_.scheduler.schedule_after(0, [this] { consider(); });
  }
}

void Bot::send(ControlMessage msg) {
  if (departed_) return;
  run_.server.receive(sid_, encode_control(msg).str());
}

void Bot::depart() {
  departed_ = true;
  run_.server.disconnect(sid_);
}

void Bot::consider() {
  consider_pending_ = false;
  if (departed_ || run_.violation) return;
  if (game_ == GameType::MIBOARD) {
    consider_miboard();
  } else {
    consider_showdown();
  }
}

void Bot::consider_miboard() {
  const auto& s = mb_.state();
  if (!mb_.started() || s.phase == MiBoardPhase::FINISHED) return;
  const std::string phase(to_string(s.phase));
  if (script_.depart_at && (s.turn_no > *script_.depart_at ||
                            (s.turn_no == *script_.depart_at && (!script_.depart_phase || *script_.depart_phase == phase)))) {
    depart();
    return;
  }
  const auto* me = s.find(id());
  if (me == nullptr || !me->active) return;
  const bool reader = s.reader() == id();
  const auto turn = s.turn_no;
  const std::string key = "T" + std::to_string(turn) + ":" + phase;

  switch (s.phase) {
    case MiBoardPhase::AWAITING_SE:
      if (reader && first_time(key)) {
        run_.scheduler.schedule_after(think_ms(), [this, turn] {
          const auto& now = mb_.state();
          if (departed_ || now.turn_no != turn || now.phase != MiBoardPhase::AWAITING_SE || now.reader() != id()) return;
          send(ControlMessage(Opcode::SE_SUBMIT, {id(), next_se()}));
        });
      }
      break;
    case MiBoardPhase::IDENTIFICATION:
      if (!reader && !s.pending_idents.contains(id()) && first_time(key)) {
        const auto& strategies = run_.scenario.content->strategies();
        const std::string card = s.current_card.value_or(strategies.front().id);
        std::string pick = card;
        if (script_.ident_policy == IdentPolicy::ALWAYS_MISS) {
          for (const auto& st : strategies) {
            if (st.id != card) {
              pick = st.id;
              break;
            }
          }
        } else if (script_.ident_policy == IdentPolicy::RANDOM) {
          pick = strategies[static_cast<std::size_t>(rng_.uniform(0, static_cast<std::int64_t>(strategies.size()) - 1))].id;
        }
        const auto* def = run_.scenario.content->find_strategy(pick);
        const auto len = utf8_length(s.current_se.value_or(""));
        send(ControlMessage(Opcode::IDENT_SUBMIT,
                            {id(), pick, def->reasons.front().id, "0", std::to_string(std::max<std::size_t>(len, 1))}));
      }
      break;
    case MiBoardPhase::VERIFICATION:
      if (reader && first_time(key)) send(ControlMessage(Opcode::VERIFY, {id(), s.current_card.value_or("")}));
      break;
    case MiBoardPhase::DISCUSSION:
      if (first_time(key)) send(ControlMessage(Opcode::DISCUSS_END, {id()}));
      break;
    case MiBoardPhase::ROLL_MOVE:
      if (reader && first_time(key)) send(ControlMessage(Opcode::ROLL, {id()}));
      break;
    case MiBoardPhase::EVENT:
      if (reader && first_time(key)) send(ControlMessage(Opcode::EVENT_CARD, {id()}));
      break;
    case MiBoardPhase::FINISHED: break;
  }
}

void Bot::consider_showdown() {
  const auto& s = sd_.state();
  if (!sd_.started() || s.phase == ShowdownPhase::FINISHED || s.round_no == 0) return;
  const std::string phase(to_string(s.phase));
  if (script_.depart_at && (s.round_no > *script_.depart_at ||
                            (s.round_no == *script_.depart_at && (!script_.depart_phase || *script_.depart_phase == phase)))) {
    depart();
    return;
  }
  const int idx = s.index_of(id());
  if (idx < 0) return;
  const auto round = s.round_no;
  const std::string key = "R" + std::to_string(round) + ":" + std::to_string(s.bonus_rounds) + ":" + phase;
  switch (s.phase) {
    case ShowdownPhase::READING:
    case ShowdownPhase::ROUND_RESULT:
      if (first_time(key)) send(ControlMessage(Opcode::TIMER_TICK, {id(), "READY"}));
      break;
    case ShowdownPhase::COMPOSING:
      if (!s.players[static_cast<std::size_t>(idx)].submitted && first_time(key)) {
        run_.scheduler.schedule_after(think_ms(), [this, round, idx] {
          const auto& now = sd_.state();
          if (departed_ || now.round_no != round || now.phase != ShowdownPhase::COMPOSING ||
              now.players[static_cast<std::size_t>(idx)].submitted) {
            return;
          }
          send(ControlMessage(Opcode::SE_SUBMIT, {id(), next_se()}));
        });
      }
      break;
    case ShowdownPhase::SCORING:
    case ShowdownPhase::FINISHED: break;
  }
}

std::string authoritative_snapshot(const GameServer& server, const std::string& room) {
  if (const auto* g = server.miboard(room)) return serialize(g->state());
  if (const auto* m = server.showdown(room)) return serialize(m->state());
  return {};
}

}  // namespace

ScenarioResult run_scenario(const Scenario& scenario) {
  if (!scenario.content) throw HarnessError(HarnessError::Code::InvalidScenario, "scenario has no content");
  const auto cap = capacity_for(scenario.game);
  const auto n = scenario.scripts.size();
  if (n < cap.min_players || n > cap.max_players) {
    throw HarnessError(HarnessError::Code::InvalidScenario, std::to_string(n) + " bots is not a legal " +
                                                                std::string(to_string(scenario.game)) + " table");
  }
  std::vector<BotScript> scripts = scenario.scripts;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (scripts[i].player.empty()) scripts[i].player = "bot" + std::to_string(i + 1);
    scripts[i].validate();
    if (!ids.insert(scripts[i].player).second) {
      throw HarnessError(HarnessError::Code::InvalidScenario, "duplicate bot id " + scripts[i].player);
    }
  }

  Run run(scenario);
  for (std::size_t i = 0; i < n; ++i) {
    run.bots.push_back(
        std::make_unique<Bot>(run, scripts[i], scenario.game, scenario.seed * 0x9E3779B97F4A7C15ULL + i + 1));
  }
  for (auto& bot : run.bots) bot->connect();
  if (run.violation) throw HarnessError(HarnessError::Code::ProtocolViolation, *run.violation);
  if (!run.room_id) throw HarnessError(HarnessError::Code::ProtocolViolation, "bots were not placed in a room");
  const std::string room = *run.room_id;

  const auto finished = [&] {
    const auto& f = run.server.finished_rooms();
    return std::find(f.begin(), f.end(), room) != f.end();
  };
  while (!finished()) {
    if (run.violation) throw HarnessError(HarnessError::Code::ProtocolViolation, *run.violation);
    if (run.scheduler.now_ms() > scenario.cap_ms) {
      throw HarnessError(HarnessError::Code::ScenarioTimeout,
                         "room " + room + " unfinished after " + std::to_string(scenario.cap_ms / 1000) + " s");
    }
    if (!run.scheduler.step()) {
      throw HarnessError(HarnessError::Code::ScenarioTimeout, "room " + room + " stalled with nothing scheduled");
    }
  }
  run.scheduler.run_until(run.scheduler.now_ms());
  if (run.violation) throw HarnessError(HarnessError::Code::ProtocolViolation, *run.violation);

  ScenarioResult result;
  result.room_id = room;
  result.final_snapshot = authoritative_snapshot(run.server, room);
  for (const auto& bot : run.bots) {
    if (bot->departed() || !bot->started()) continue;
    const auto replica = bot->snapshot();
    if (replica != result.final_snapshot) {
      throw HarnessError(HarnessError::Code::ProtocolViolation,
                         bot->id() + " replica diverged from the server\n" + diff_text(result.final_snapshot, replica));
    }
  }
  result.log = run.log.query(room);
  result.report = analyze_lulls(scenario.game, result.log);
  result.rounds_completed = result.report.rounds_completed;
  result.frames_observed = run.frames;
  return result;
}

}  // namespace sxgame
