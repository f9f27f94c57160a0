#include "sxgame/miboard.hpp"

#include <algorithm>
#include <array>

#include <nlohmann/json.hpp>

namespace sxgame {

namespace {

constexpr std::array<std::string_view, 7> kPhaseNames = {
    "AWAITING_SE", "IDENTIFICATION", "VERIFICATION", "DISCUSSION", "ROLL_MOVE", "EVENT", "FINISHED",
};

[[noreturn]] void reject(GameError::Code code, const std::string& what) {
  throw GameError(code, what);
}

std::string itos(long long v) { return std::to_string(v); }

nlohmann::ordered_json opt_json(const std::optional<std::string>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

std::string_view to_string(GameError::Code code) noexcept {
  switch (code) {
    case GameError::Code::GameFinished: return "GameFinished";
    case GameError::Code::WrongPhase: return "WrongPhase";
    case GameError::Code::NotReader: return "NotReader";
    case GameError::Code::NotGuesser: return "NotGuesser";
    case GameError::Code::NotActive: return "NotActive";
    case GameError::Code::UnknownPlayer: return "UnknownPlayer";
    case GameError::Code::EmptySE: return "EmptySE";
    case GameError::Code::DuplicateIdent: return "DuplicateIdent";
    case GameError::Code::InvalidStrategy: return "InvalidStrategy";
    case GameError::Code::InvalidReason: return "InvalidReason";
    case GameError::Code::InvalidHighlight: return "InvalidHighlight";
    case GameError::Code::WrongPlayerCount: return "WrongPlayerCount";
    case GameError::Code::EmptyText: return "EmptyText";
    case GameError::Code::DuplicateSubmission: return "DuplicateSubmission";
  }
  return "Unknown";
}

std::string_view to_string(MiBoardPhase phase) noexcept {
  return kPhaseNames[static_cast<std::size_t>(phase)];
}

std::optional<MiBoardPhase> parse_miboard_phase(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (kPhaseNames[i] == name) return static_cast<MiBoardPhase>(i);
  }
  return std::nullopt;
}

std::size_t utf8_length(std::string_view text) noexcept {
  return static_cast<std::size_t>(
      std::count_if(text.begin(), text.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::size_t MiBoardState::active_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(players.begin(), players.end(), [](const auto& p) { return p.active; }));
}

const MiBoardPlayer* MiBoardState::find(std::string_view id) const noexcept {
  const auto it = std::find_if(players.begin(), players.end(), [&](const auto& p) { return p.id == id; });
  return it == players.end() ? nullptr : &*it;
}

bool MiBoardState::is_guesser(std::string_view id) const noexcept {
  const auto* p = find(id);
  return p != nullptr && p->active && reader_index < players.size() && players[reader_index].id != id;
}

std::vector<std::string> MiBoardState::guessers() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < players.size(); ++i) {
    if (i != reader_index && players[i].active) out.push_back(players[i].id);
  }
  return out;
}

std::string serialize(const MiBoardState& s) {
  nlohmann::ordered_json j;
  auto& players = j["players"] = nlohmann::ordered_json::array();
  for (const auto& p : s.players) {
    players.push_back({{"id", p.id}, {"position", p.position}, {"points", p.points}, {"active", p.active}});
  }
  j["reader_index"] = s.reader_index;
  j["phase"] = to_string(s.phase);
  j["turn_no"] = s.turn_no;
  j["current_card"] = opt_json(s.current_card);
  j["current_se"] = opt_json(s.current_se);
  auto& idents = j["pending_idents"] = nlohmann::ordered_json::object();
  for (const auto& [id, a] : s.pending_idents) {
    idents[id] = {{"strategy", a.strategy}, {"reason", a.reason}, {"start", a.start}, {"end", a.end}};
  }
  j["board_length"] = s.board_length;
  j["rng_seed"] = s.rng_seed;
  j["winner"] = opt_json(s.winner);
  j["end_reason"] = s.end_reason;
  return j.dump();
}

std::size_t next_active_index(std::span<const MiBoardPlayer> players, std::size_t from) {
  for (std::size_t step = 1; step <= players.size(); ++step) {
    const auto i = (from + step) % players.size();
    if (players[i].active) return i;
  }
  return from;
}

MiBoardGame::MiBoardGame(std::vector<std::string> players, const ContentBundle& content, MiBoardConfig config,
                         std::uint64_t seed)
    : config_(config), strategies_(content.strategies()), rng_(seed) {
  if (players.size() < 3 || players.size() > 4) {
    reject(GameError::Code::WrongPlayerCount, "MiBoard needs 3 or 4 players, got " + itos(static_cast<long long>(players.size())));
  }
  if (config_.board_length < 1 || config_.die_sides < 1 || config_.strategy_copies < 1) {
    throw std::invalid_argument("invalid MiBoard configuration");
  }
  state_.board_length = config_.board_length;
  state_.rng_seed = seed;
  for (auto& id : players) state_.players.push_back(MiBoardPlayer{std::move(id)});

  std::vector<std::string> cards;
  for (int c = 0; c < config_.strategy_copies; ++c) {
    for (const auto& s : strategies_) cards.push_back(s.id);
  }
  if (cards.empty()) throw std::invalid_argument("MiBoard needs at least one strategy");
  if (content.event_cards().empty()) throw std::invalid_argument("MiBoard needs an event deck");
  strategy_deck_ = Deck<std::string>(std::move(cards), rng_);
  event_deck_ = Deck<EventCard>(content.event_cards(), rng_);
}

Broadcasts MiBoardGame::start() {
  if (started_) reject(GameError::Code::WrongPhase, "game already started");
  started_ = true;
  Broadcasts out;
  std::vector<std::string> fields{"MIBOARD", std::to_string(state_.rng_seed), itos(state_.board_length)};
  for (const auto& p : state_.players) fields.push_back(p.id);
  out.emplace_back(Opcode::START, std::move(fields));
  state_.reader_index = 0;
  open_turn(out);
  return out;
}

void MiBoardGame::require_live() const {
  if (state_.phase == MiBoardPhase::FINISHED) reject(GameError::Code::GameFinished, "game is over");
}

void MiBoardGame::require_phase(MiBoardPhase phase) const {
  require_live();
  if (state_.phase != phase) {
    reject(GameError::Code::WrongPhase,
           "expected " + std::string(to_string(phase)) + ", game is in " + std::string(to_string(state_.phase)));
  }
}

void MiBoardGame::require_reader(const std::string& player) const {
  if (state_.reader() != player) reject(GameError::Code::NotReader, player + " is not the Reader");
}

Broadcasts MiBoardGame::begin_turn() {
  require_live();
  if (started_ && state_.current_card) reject(GameError::Code::WrongPhase, "a turn is already in progress");
  Broadcasts out;
  started_ = true;
  open_turn(out);
  return out;
}

void MiBoardGame::open_turn(Broadcasts& out) {
  ++state_.turn_no;
  state_.phase = MiBoardPhase::AWAITING_SE;
  state_.current_card = strategy_deck_.draw(rng_);
  state_.current_se.reset();
  state_.pending_idents.clear();
  discussion_votes_.clear();
  out.emplace_back(Opcode::TURN_BEGIN, std::vector<std::string>{state_.reader(), std::to_string(state_.turn_no)});
  out.emplace_back(Opcode::STRAT_CARD, std::vector<std::string>{state_.reader(), *state_.current_card});
}

void MiBoardGame::close_turn() {
  if (state_.current_card) strategy_deck_.discard(*state_.current_card);
  state_.current_card.reset();
  state_.current_se.reset();
  state_.pending_idents.clear();
  discussion_votes_.clear();
}

void MiBoardGame::pass_control(Broadcasts& out) {
  close_turn();
  state_.reader_index = next_active_index(state_.players, state_.reader_index);
  out.emplace_back(Opcode::CONTROL_PASS, std::vector<std::string>{state_.reader()});
  open_turn(out);
}

void MiBoardGame::finish(Broadcasts& out, std::optional<std::string> winner, std::string reason) {
  close_turn();
  state_.phase = MiBoardPhase::FINISHED;
  state_.winner = std::move(winner);
  state_.end_reason = reason;
  out.emplace_back(Opcode::GAME_OVER, std::vector<std::string>{state_.winner.value_or(""), std::move(reason)});
}

Broadcasts MiBoardGame::submit_se(const std::string& reader, const std::string& text) {
  require_phase(MiBoardPhase::AWAITING_SE);
  require_reader(reader);
  if (blank(text)) reject(GameError::Code::EmptySE, "self-explanation is empty");
  state_.current_se = text;
  state_.phase = MiBoardPhase::IDENTIFICATION;
  return {ControlMessage(Opcode::SE_SUBMIT, {reader, text})};
}

void MiBoardGame::maybe_complete_identification() {
  if (state_.phase != MiBoardPhase::IDENTIFICATION) return;
  for (const auto& g : state_.guessers()) {
    if (!state_.pending_idents.contains(g)) return;
  }
  state_.phase = MiBoardPhase::VERIFICATION;
}

Broadcasts MiBoardGame::submit_identification(const std::string& guesser, const CmbArgument& arg) {
  require_phase(MiBoardPhase::IDENTIFICATION);
  if (!state_.is_guesser(guesser)) reject(GameError::Code::NotGuesser, guesser + " is not a Guesser this turn");
  if (state_.pending_idents.contains(guesser)) {
    reject(GameError::Code::DuplicateIdent, guesser + " already identified a strategy this turn");
  }
  const auto it = std::find_if(strategies_.begin(), strategies_.end(), [&](const auto& s) { return s.id == arg.strategy; });
  if (it == strategies_.end()) reject(GameError::Code::InvalidStrategy, "unknown strategy '" + arg.strategy + "'");
  if (!it->has_reason(arg.reason)) {
    reject(GameError::Code::InvalidReason, "reason '" + arg.reason + "' does not belong to " + arg.strategy);
  }
  const auto len = utf8_length(*state_.current_se);
  if (!(arg.start < arg.end && arg.end <= len)) {
    reject(GameError::Code::InvalidHighlight, "highlight [" + std::to_string(arg.start) + "," + std::to_string(arg.end) +
                                                  ") outside self-explanation of length " + std::to_string(len));
  }
  state_.pending_idents.emplace(guesser, arg);
  maybe_complete_identification();
  return {ControlMessage(Opcode::IDENT_SUBMIT, {guesser, arg.strategy, arg.reason, std::to_string(arg.start),
                                               std::to_string(arg.end)})};
}

Broadcasts MiBoardGame::verify_and_resolve(const std::string& reader, const std::string& confirmed_strategy) {
  require_phase(MiBoardPhase::VERIFICATION);
  require_reader(reader);
  if (confirmed_strategy != state_.current_card) {
    reject(GameError::Code::InvalidStrategy, "verified strategy must be the drawn card");
  }
  Broadcasts out;
  out.emplace_back(Opcode::VERIFY, std::vector<std::string>{reader, confirmed_strategy});
  bool all_matched = true;
  for (const auto& [guesser, arg] : state_.pending_idents) {
    const bool matched = arg.strategy == confirmed_strategy;
    auto& p = *std::find_if(state_.players.begin(), state_.players.end(), [&](auto& x) { return x.id == guesser; });
    if (matched) ++p.points;
    all_matched = all_matched && matched;
    out.emplace_back(Opcode::IDENT_RESULT, std::vector<std::string>{guesser, matched ? "1" : "0", itos(p.points)});
  }
  if (all_matched) {
    state_.phase = MiBoardPhase::ROLL_MOVE;
  } else {
    state_.phase = MiBoardPhase::DISCUSSION;
    discussion_votes_.clear();
    out.emplace_back(Opcode::DISCUSS_BEGIN, std::vector<std::string>{itos(config_.discussion_seconds)});
  }
  return out;
}

Broadcasts MiBoardGame::vote_end_discussion(const std::string& player) {
  require_phase(MiBoardPhase::DISCUSSION);
  const auto* p = state_.find(player);
  if (p == nullptr) reject(GameError::Code::UnknownPlayer, player + " is not in this game");
  if (!p->active) reject(GameError::Code::NotActive, player + " has left the game");
  if (std::find(discussion_votes_.begin(), discussion_votes_.end(), player) == discussion_votes_.end()) {
    discussion_votes_.push_back(player);
  }
  for (const auto& q : state_.players) {
    if (q.active && std::find(discussion_votes_.begin(), discussion_votes_.end(), q.id) == discussion_votes_.end()) {
      return {};
    }
  }
  return end_discussion();
}

Broadcasts MiBoardGame::end_discussion() {
  require_phase(MiBoardPhase::DISCUSSION);
  discussion_votes_.clear();
  state_.phase = MiBoardPhase::ROLL_MOVE;
  return {ControlMessage(Opcode::DISCUSS_END)};
}

Broadcasts MiBoardGame::roll_and_move(const std::string& reader) {
  require_phase(MiBoardPhase::ROLL_MOVE);
  require_reader(reader);
  const auto roll = static_cast<int>(rng_.uniform(1, config_.die_sides));
  auto& p = state_.players[state_.reader_index];
  const int from = p.position;
  p.position = std::min(p.position + roll, state_.board_length);
  state_.phase = MiBoardPhase::EVENT;
  return {ControlMessage(Opcode::ROLL, {reader, itos(roll)}),
          ControlMessage(Opcode::MOVE, {reader, itos(from), itos(p.position)})};
}

Broadcasts MiBoardGame::draw_event(const std::string& reader) {
  require_phase(MiBoardPhase::EVENT);
  require_reader(reader);
  Broadcasts out;
  EventCard card = event_deck_.draw(rng_);
  auto& p = state_.players[state_.reader_index];
  const int from = p.position;
  p.position = std::clamp(p.position + card.delta, 0, state_.board_length);
  out.emplace_back(Opcode::EVENT_CARD, std::vector<std::string>{reader, card.label, itos(card.delta)});
  out.emplace_back(Opcode::MOVE, std::vector<std::string>{reader, itos(from), itos(p.position)});
  event_deck_.discard(std::move(card));

  const auto winner = std::find_if(state_.players.begin(), state_.players.end(),
                                   [&](const auto& q) { return q.active && q.position == state_.board_length; });
  if (winner != state_.players.end()) {
    finish(out, winner->id, "board");
  } else {
    pass_control(out);
  }
  return out;
}

Broadcasts MiBoardGame::remove_player(const std::string& player) {
  require_live();
  const auto it = std::find_if(state_.players.begin(), state_.players.end(), [&](const auto& p) { return p.id == player; });
  if (it == state_.players.end()) reject(GameError::Code::UnknownPlayer, player + " is not in this game");
  if (!it->active) reject(GameError::Code::NotActive, player + " already left");

  Broadcasts out;
  it->active = false;
  out.emplace_back(Opcode::LEAVE, std::vector<std::string>{player});
  const bool was_reader = state_.players[state_.reader_index].id == player;

  if (state_.active_count() < 2) {
    const auto last = std::find_if(state_.players.begin(), state_.players.end(), [](const auto& p) { return p.active; });
    finish(out, last == state_.players.end() ? std::nullopt : std::optional<std::string>(last->id), "attrition");
    return out;
  }
  if (was_reader) {
    pass_control(out);
    return out;
  }
  state_.pending_idents.erase(player);
  std::erase(discussion_votes_, player);
  maybe_complete_identification();
  if (state_.phase == MiBoardPhase::DISCUSSION) {
    bool all_voted = !discussion_votes_.empty();
    for (const auto& q : state_.players) {
      if (q.active && std::find(discussion_votes_.begin(), discussion_votes_.end(), q.id) == discussion_votes_.end()) {
        all_voted = false;
      }
    }
    if (all_voted) {
      auto end = end_discussion();
      out.insert(out.end(), end.begin(), end.end());
    }
  }
  return out;
}

Broadcasts MiBoardGame::abandon_turn() {
  require_live();
  Broadcasts out;
  out.emplace_back(Opcode::ERROR, std::vector<std::string>{"TURN_TIMEOUT", state_.reader()});
  pass_control(out);
  return out;
}

MiBoardGame MiBoardGame::compacted() const {
  MiBoardGame copy = *this;
  const std::string reader = state_.reader();
  std::erase_if(copy.state_.players, [](const auto& p) { return !p.active; });
  const auto it = std::find_if(copy.state_.players.begin(), copy.state_.players.end(),
                               [&](const auto& p) { return p.id == reader; });
  copy.state_.reader_index =
      it == copy.state_.players.end() ? 0 : static_cast<std::size_t>(it - copy.state_.players.begin());
  return copy;
}

// ---------------------------------------------------------------------------

void MiBoardReplica::complete_identification_if_ready() {
  if (state_.phase != MiBoardPhase::IDENTIFICATION) return;
  for (const auto& g : state_.guessers()) {
    if (!state_.pending_idents.contains(g)) return;
  }
  state_.phase = MiBoardPhase::VERIFICATION;
}

void MiBoardReplica::apply(const ControlMessage& m) {
  const auto player = [&](std::size_t i) -> MiBoardPlayer& {
    const auto& id = m.field(i);
    auto it = std::find_if(state_.players.begin(), state_.players.end(), [&](const auto& p) { return p.id == id; });
    if (it == state_.players.end()) {
      throw ProtocolError(ProtocolError::Code::MalformedControl, "replica: unknown player " + id);
    }
    return *it;
  };
  const auto index_of = [&](const std::string& id) {
    const auto it = std::find_if(state_.players.begin(), state_.players.end(), [&](const auto& p) { return p.id == id; });
    return static_cast<std::size_t>(it - state_.players.begin());
  };
  const auto integer = [&](std::size_t i) { return std::stoll(m.field(i)); };

  switch (m.opcode) {
    case Opcode::START:
      state_ = MiBoardState{};
      state_.rng_seed = std::stoull(m.field(1));
      state_.board_length = static_cast<int>(integer(2));
      for (std::size_t i = 3; i < m.fields.size(); ++i) state_.players.push_back(MiBoardPlayer{m.fields[i]});
      started_ = true;
      break;
    case Opcode::TURN_BEGIN:
      state_.reader_index = index_of(m.field(0));
      state_.turn_no = static_cast<std::uint64_t>(integer(1));
      state_.phase = MiBoardPhase::AWAITING_SE;
      state_.current_se.reset();
      state_.pending_idents.clear();
      break;
    case Opcode::STRAT_CARD:
      state_.current_card = m.field(1);
      break;
    case Opcode::SE_SUBMIT:
      state_.current_se = m.field(1);
      state_.phase = MiBoardPhase::IDENTIFICATION;
      break;
    case Opcode::IDENT_SUBMIT:
      state_.pending_idents[m.field(0)] = CmbArgument{m.field(1), m.field(2), static_cast<std::size_t>(integer(3)),
                                                      static_cast<std::size_t>(integer(4))};
      complete_identification_if_ready();
      break;
    case Opcode::VERIFY: {
      const bool all = std::all_of(state_.pending_idents.begin(), state_.pending_idents.end(),
                                   [&](const auto& kv) { return kv.second.strategy == m.field(1); });
      state_.phase = all ? MiBoardPhase::ROLL_MOVE : MiBoardPhase::DISCUSSION;
      break;
    }
    case Opcode::IDENT_RESULT:
      player(0).points = static_cast<int>(integer(2));
      break;
    case Opcode::DISCUSS_BEGIN:
      state_.phase = MiBoardPhase::DISCUSSION;
      break;
    case Opcode::DISCUSS_END:
      state_.phase = MiBoardPhase::ROLL_MOVE;
      break;
    case Opcode::ROLL:
      state_.phase = MiBoardPhase::EVENT;
      break;
    case Opcode::MOVE:
      player(0).position = static_cast<int>(integer(2));
      break;
    case Opcode::EVENT_CARD:
      break;
    case Opcode::CONTROL_PASS:
      state_.reader_index = index_of(m.field(0));
      state_.current_card.reset();
      state_.current_se.reset();
      state_.pending_idents.clear();
      break;
    case Opcode::LEAVE: {
      auto& p = player(0);
      p.active = false;
      state_.pending_idents.erase(p.id);
      complete_identification_if_ready();
      break;
    }
    case Opcode::GAME_OVER:
      state_.phase = MiBoardPhase::FINISHED;
      state_.winner = m.field(0).empty() ? std::nullopt : std::optional<std::string>(m.field(0));
      state_.end_reason = m.field(1);
      state_.current_card.reset();
      state_.current_se.reset();
      state_.pending_idents.clear();
      break;
    default:
      // ERROR, TIMER_TICK, JOIN and friends carry no MiBoard state.
      break;
  }
}

}  // namespace sxgame
