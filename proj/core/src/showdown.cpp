#include "sxgame/showdown.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace sxgame {

namespace {

constexpr std::array<std::string_view, 5> kPhaseNames = {"READING", "COMPOSING", "SCORING", "ROUND_RESULT", "FINISHED"};

std::string itos(long long v) { return std::to_string(v); }

nlohmann::ordered_json opt_json(const std::optional<std::string>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string_view to_string(ShowdownPhase phase) noexcept {
  return kPhaseNames[static_cast<std::size_t>(phase)];
}

std::optional<ShowdownPhase> parse_showdown_phase(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (kPhaseNames[i] == name) return static_cast<ShowdownPhase>(i);
  }
  return std::nullopt;
}

TimerSpec::TimerSpec(ShowdownPhase p, int s) : phase(p), seconds(s) {
  if (!valid_timer_seconds(s)) {
    throw std::invalid_argument("timer for " + std::string(to_string(p)) + " must be a positive multiple of " +
                                std::to_string(kTimerGranularitySeconds) + " s, got " + std::to_string(s));
  }
}

void ShowdownConfig::validate() const {
  // Constructing the specs runs the granularity check.
  (void)TimerSpec(ShowdownPhase::READING, timers.reading_seconds);
  (void)TimerSpec(ShowdownPhase::COMPOSING, timers.composing_seconds);
  (void)TimerSpec(ShowdownPhase::ROUND_RESULT, timers.round_result_seconds);
  if (rounds && *rounds == 0) throw std::invalid_argument("showdown round count must be positive");
  if (max_bonus_rounds < 0) throw std::invalid_argument("max_bonus_rounds must be >= 0");
}

int ShowdownState::index_of(std::string_view id) const noexcept {
  for (int i = 0; i < 2; ++i) {
    if (players[static_cast<std::size_t>(i)].id == id) return i;
  }
  return -1;
}

std::string serialize(const ShowdownState& s) {
  nlohmann::ordered_json j;
  auto& players = j["players"] = nlohmann::ordered_json::array();
  for (const auto& p : s.players) {
    players.push_back({{"id", p.id}, {"score", p.score}, {"active", p.active}, {"submitted", p.submitted}});
  }
  j["text_id"] = s.text_id;
  j["round_no"] = s.round_no;
  j["target_index"] = s.target_index;
  j["sentence_index"] = s.sentence_index;
  j["target_sentence"] = s.target_sentence;
  j["prior"] = s.prior;
  j["stake"] = s.stake;
  j["bonus_rounds"] = s.bonus_rounds;
  j["phase"] = to_string(s.phase);
  if (s.last_round) {
    const auto& r = *s.last_round;
    j["last_round"] = {{"round_no", r.round_no}, {"stake", r.stake}, {"ses", r.ses}, {"scores", r.scores},
                       {"winner", r.winner}};
  } else {
    j["last_round"] = nullptr;
  }
  j["outcome"] = s.outcome;
  j["winner"] = opt_json(s.winner);
  return j.dump();
}

ShowdownMatch::ShowdownMatch(std::vector<std::string> players, PracticeText text, ShowdownConfig config, EvalFn eval)
    : text_(std::move(text)), config_(config), eval_(std::move(eval)) {
  if (players.size() != 2) {
    throw GameError(GameError::Code::WrongPlayerCount,
                    "Showdown is a two-player game, got " + std::to_string(players.size()));
  }
  if (text_.target_indices.empty()) throw GameError(GameError::Code::EmptyText, text_.id + " has no target sentence");
  config_.validate();
  state_.players[0].id = std::move(players[0]);
  state_.players[1].id = std::move(players[1]);
  state_.text_id = text_.id;
  regular_rounds_ = config_.rounds.value_or(text_.target_indices.size());
}

void ShowdownMatch::require_live() const {
  if (finished()) throw GameError(GameError::Code::GameFinished, "match is over");
}

std::optional<TimerSpec> ShowdownMatch::current_timer() const {
  switch (state_.phase) {
    case ShowdownPhase::READING: return TimerSpec(ShowdownPhase::READING, config_.timers.reading_seconds);
    case ShowdownPhase::COMPOSING: return TimerSpec(ShowdownPhase::COMPOSING, config_.timers.composing_seconds);
    case ShowdownPhase::ROUND_RESULT:
      return TimerSpec(ShowdownPhase::ROUND_RESULT, config_.timers.round_result_seconds);
    default: return std::nullopt;
  }
}

void ShowdownMatch::enter_phase(ShowdownPhase phase, Broadcasts& out) {
  state_.phase = phase;
  acks_ = {};
  if (const auto timer = current_timer()) {
    ++timer_epoch_;
    out.emplace_back(Opcode::TIMER_TICK, std::vector<std::string>{std::string(to_string(phase)), itos(timer->seconds)});
  }
}

Broadcasts ShowdownMatch::start() {
  require_live();
  if (started_) throw GameError(GameError::Code::WrongPhase, "match already started");
  started_ = true;
  Broadcasts out;
  out.emplace_back(Opcode::START,
                   std::vector<std::string>{"SHOWDOWN", text_.id, state_.players[0].id, state_.players[1].id});
  state_.stake = 1;
  begin_round(out);
  return out;
}

void ShowdownMatch::begin_round(Broadcasts& out) {
  ++state_.round_no;
  const bool bonus = state_.round_no > regular_rounds_;
  if (bonus) {
    ++state_.bonus_rounds;
    state_.stake = 2;
    state_.sentence_index = text_.bonus_target_index.value_or(text_.target_indices.back());
  } else {
    state_.target_index = (state_.round_no - 1) % text_.target_indices.size();
    state_.sentence_index = text_.target_indices[state_.target_index];
  }
  state_.target_sentence = text_.sentences[state_.sentence_index];
  state_.prior = prior_text(text_, state_.sentence_index);
  submissions_ = {};
  for (auto& p : state_.players) p.submitted = false;
  out.emplace_back(Opcode::ROUND_BEGIN,
                   std::vector<std::string>{itos(state_.round_no), itos(state_.stake), itos(static_cast<long long>(state_.target_index)),
                                            itos(static_cast<long long>(state_.sentence_index)), state_.target_sentence,
                                            state_.prior, itos(bonus ? state_.bonus_rounds : 0)});
  enter_phase(ShowdownPhase::READING, out);
}

Broadcasts ShowdownMatch::acknowledge(const std::string& player) {
  require_live();
  const int idx = state_.index_of(player);
  if (idx < 0) throw GameError(GameError::Code::UnknownPlayer, player + " is not in this match");
  if (state_.phase != ShowdownPhase::READING && state_.phase != ShowdownPhase::ROUND_RESULT) {
    throw GameError(GameError::Code::WrongPhase, "nothing to acknowledge in " + std::string(to_string(state_.phase)));
  }
  acks_[static_cast<std::size_t>(idx)] = true;
  if (acks_[0] && acks_[1]) return advance();
  return {};
}

Broadcasts ShowdownMatch::submit_se(const std::string& player, const std::string& text) {
  require_live();
  if (state_.phase != ShowdownPhase::COMPOSING) {
    throw GameError(GameError::Code::WrongPhase, "submissions are closed in " + std::string(to_string(state_.phase)));
  }
  const int idx = state_.index_of(player);
  if (idx < 0) throw GameError(GameError::Code::UnknownPlayer, player + " is not in this match");
  const auto i = static_cast<std::size_t>(idx);
  if (submissions_[i]) throw GameError(GameError::Code::DuplicateSubmission, player + " already submitted this round");
  submissions_[i] = text;
  state_.players[i].submitted = true;
  Broadcasts out{ControlMessage(Opcode::SE_SUBMIT, {player})};
  if (submissions_[0] && submissions_[1]) {
    state_.phase = ShowdownPhase::SCORING;
    auto scored = score_round();
    out.insert(out.end(), scored.begin(), scored.end());
  }
  return out;
}

Broadcasts ShowdownMatch::timer_expired() {
  if (finished()) return {};
  switch (state_.phase) {
    case ShowdownPhase::READING:
    case ShowdownPhase::ROUND_RESULT: return advance();
    case ShowdownPhase::COMPOSING:
      // Missing submissions score as empty strings through the evaluator.
      state_.phase = ShowdownPhase::SCORING;
      return score_round();
    default: return {};
  }
}

Broadcasts ShowdownMatch::advance() {
  require_live();
  Broadcasts out;
  switch (state_.phase) {
    case ShowdownPhase::READING: enter_phase(ShowdownPhase::COMPOSING, out); break;
    case ShowdownPhase::ROUND_RESULT: decide_after_result(out); break;
    default:
      throw GameError(GameError::Code::WrongPhase, "cannot advance from " + std::string(to_string(state_.phase)));
  }
  return out;
}

Broadcasts ShowdownMatch::score_round() {
  require_live();
  if (state_.phase != ShowdownPhase::SCORING) {
    throw GameError(GameError::Code::WrongPhase, "scoring requires SCORING, match is in " + std::string(to_string(state_.phase)));
  }
  Broadcasts out;
  RoundRecord rec;
  rec.round_no = state_.round_no;
  rec.stake = state_.stake;
  try {
    for (std::size_t i = 0; i < 2; ++i) {
      rec.ses[i] = submissions_[i].value_or("");
      rec.scores[i] = eval_(rec.ses[i], state_.target_sentence, state_.prior).score;
    }
  } catch (const std::exception& e) {
    // Voided: same round number, same target, same stake.
    out.emplace_back(Opcode::ERROR, std::vector<std::string>{"EVALUATOR_FAILURE", e.what()});
    --state_.round_no;
    if (state_.round_no >= regular_rounds_) --state_.bonus_rounds;
    begin_round(out);
    return out;
  }

  if (rec.scores[0] != rec.scores[1]) {
    rec.winner = rec.scores[0] > rec.scores[1] ? 0 : 1;
    state_.players[static_cast<std::size_t>(rec.winner)].score += rec.stake;
    awarded_ += rec.stake;
    state_.stake = 1;
  } else {
    state_.stake = 2;
  }
  state_.last_round = rec;
  const auto& p = state_.players;
  out.emplace_back(Opcode::ROUND_RESULT,
                   std::vector<std::string>{itos(rec.round_no), itos(rec.stake), p[0].id, itos(rec.scores[0]), rec.ses[0],
                                            p[1].id, itos(rec.scores[1]), rec.ses[1],
                                            rec.winner < 0 ? "TIE" : p[static_cast<std::size_t>(rec.winner)].id,
                                            itos(p[0].score), itos(p[1].score), itos(state_.stake)});
  enter_phase(ShowdownPhase::ROUND_RESULT, out);
  return out;
}

void ShowdownMatch::decide_after_result(Broadcasts& out) {
  if (state_.round_no < regular_rounds_) {
    begin_round(out);
    return;
  }
  const auto& p = state_.players;
  if (p[0].score != p[1].score) {
    finish(out, "win", p[0].score > p[1].score ? 0 : 1);
  } else if (state_.bonus_rounds < config_.max_bonus_rounds) {
    begin_round(out);
  } else {
    finish(out, "draw", std::nullopt);
  }
}

void ShowdownMatch::finish(Broadcasts& out, std::string outcome, std::optional<std::size_t> winner) {
  state_.phase = ShowdownPhase::FINISHED;
  state_.outcome = outcome;
  if (winner) state_.winner = state_.players[*winner].id;
  out.emplace_back(Opcode::MATCH_RESULT,
                   std::vector<std::string>{std::move(outcome), state_.winner.value_or(""), itos(state_.players[0].score),
                                            itos(state_.players[1].score)});
}

Broadcasts ShowdownMatch::remove_player(const std::string& player) {
  const std::string one[] = {player};
  return remove_players(one);
}

Broadcasts ShowdownMatch::remove_players(std::span<const std::string> players) {
  require_live();
  std::array<bool, 2> leaving{};
  for (const auto& id : players) {
    const int idx = state_.index_of(id);
    if (idx < 0) throw GameError(GameError::Code::UnknownPlayer, id + " is not in this match");
    leaving[static_cast<std::size_t>(idx)] = true;
  }
  Broadcasts out;
  for (std::size_t i = 0; i < 2; ++i) {
    if (!leaving[i]) continue;
    state_.players[i].active = false;
    out.emplace_back(Opcode::LEAVE, std::vector<std::string>{state_.players[i].id});
  }
  if (leaving[0] && leaving[1]) {
    finish(out, "abandoned", std::nullopt);
  } else if (leaving[0] || leaving[1]) {
    finish(out, "forfeit", leaving[0] ? 1 : 0);
  }
  return out;
}

// ---------------------------------------------------------------------------

void ShowdownReplica::apply(const ControlMessage& m) {
  const auto integer = [&](std::size_t i) { return std::stoll(m.field(i)); };
  const auto player_index = [&](std::size_t i) {
    const int idx = state_.index_of(m.field(i));
    if (idx < 0) throw ProtocolError(ProtocolError::Code::MalformedControl, "replica: unknown player " + m.field(i));
    return static_cast<std::size_t>(idx);
  };

  switch (m.opcode) {
    case Opcode::START:
      state_ = ShowdownState{};
      state_.text_id = m.field(1);
      state_.players[0].id = m.field(2);
      state_.players[1].id = m.field(3);
      started_ = true;
      break;
    case Opcode::ROUND_BEGIN:
      state_.round_no = static_cast<std::uint32_t>(integer(0));
      state_.stake = static_cast<int>(integer(1));
      state_.target_index = static_cast<std::size_t>(integer(2));
      state_.sentence_index = static_cast<std::size_t>(integer(3));
      state_.target_sentence = m.field(4);
      state_.prior = m.field(5);
      if (integer(6) > 0) state_.bonus_rounds = static_cast<int>(integer(6));
      for (auto& p : state_.players) p.submitted = false;
      break;
    case Opcode::TIMER_TICK:
      if (const auto phase = parse_showdown_phase(m.field(0))) state_.phase = *phase;
      break;
    case Opcode::SE_SUBMIT:
      state_.players[player_index(0)].submitted = true;
      break;
    case Opcode::ROUND_RESULT: {
      RoundRecord rec;
      rec.round_no = static_cast<std::uint32_t>(integer(0));
      rec.stake = static_cast<int>(integer(1));
      rec.scores = {static_cast<int>(integer(3)), static_cast<int>(integer(6))};
      rec.ses = {m.field(4), m.field(7)};
      rec.winner = m.field(8) == "TIE" ? -1 : static_cast<int>(player_index(8));
      state_.players[0].score = static_cast<int>(integer(9));
      state_.players[1].score = static_cast<int>(integer(10));
      state_.stake = static_cast<int>(integer(11));
      state_.last_round = rec;
      state_.phase = ShowdownPhase::ROUND_RESULT;
      break;
    }
    case Opcode::MATCH_RESULT:
      state_.phase = ShowdownPhase::FINISHED;
      state_.outcome = m.field(0);
      state_.winner = m.field(1).empty() ? std::nullopt : std::optional<std::string>(m.field(1));
      break;
    case Opcode::LEAVE:
      state_.players[player_index(0)].active = false;
      break;
    default:
      break;
  }
}

}  // namespace sxgame
