#pragma once

// Authoritative Self-Explanation Showdown match between two players. Both
// write a self-explanation of the same target sentence at once; the evaluator
// scores both and the higher score takes the round's stake. A tied round puts
// 2 points on the next round. Every phase is bounded by a timer whose length
// is a positive multiple of two seconds; both players acknowledging ends a
// reading or result phase early.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sxgame/content.hpp"
#include "sxgame/evaluator.hpp"
#include "sxgame/game_error.hpp"
#include "sxgame/protocol.hpp"

namespace sxgame {

using Broadcasts = std::vector<ControlMessage>;

enum class ShowdownPhase { READING, COMPOSING, SCORING, ROUND_RESULT, FINISHED };

std::string_view to_string(ShowdownPhase phase) noexcept;
std::optional<ShowdownPhase> parse_showdown_phase(std::string_view name) noexcept;

inline constexpr int kTimerGranularitySeconds = 2;

constexpr bool valid_timer_seconds(int seconds) noexcept {
  return seconds > 0 && seconds % kTimerGranularitySeconds == 0;
}

struct TimerSpec {
  ShowdownPhase phase;
  int seconds;

  // Throws std::invalid_argument unless seconds is a positive multiple of 2.
  TimerSpec(ShowdownPhase p, int s);
};

struct ShowdownTimers {
  int reading_seconds = 60;
  int composing_seconds = 120;
  int round_result_seconds = 10;
};

inline constexpr ShowdownTimers kDefaultShowdownTimers{};
static_assert(valid_timer_seconds(kDefaultShowdownTimers.reading_seconds));
static_assert(valid_timer_seconds(kDefaultShowdownTimers.composing_seconds));
static_assert(valid_timer_seconds(kDefaultShowdownTimers.round_result_seconds));

struct ShowdownConfig {
  ShowdownTimers timers;
  std::optional<std::size_t> rounds;  // default: one per target sentence
  int max_bonus_rounds = 3;

  void validate() const;
};

struct ShowdownPlayer {
  std::string id;
  int score = 0;
  bool active = true;
  bool submitted = false;

  friend bool operator==(const ShowdownPlayer&, const ShowdownPlayer&) = default;
};

struct RoundRecord {
  std::uint32_t round_no = 0;
  int stake = 0;
  std::array<std::string, 2> ses;
  std::array<int, 2> scores{};
  int winner = -1;  // player index, -1 on a tie

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct ShowdownState {
  std::array<ShowdownPlayer, 2> players;
  std::string text_id;
  std::uint32_t round_no = 0;
  std::size_t target_index = 0;  // position in the text's target list; bonus rounds keep the last one
  std::size_t sentence_index = 0;
  std::string target_sentence;
  std::string prior;
  int stake = 1;
  int bonus_rounds = 0;
  ShowdownPhase phase = ShowdownPhase::READING;
  std::optional<RoundRecord> last_round;
  std::string outcome;  // win | draw | forfeit | abandoned once FINISHED
  std::optional<std::string> winner;

  int index_of(std::string_view id) const noexcept;

  friend bool operator==(const ShowdownState&, const ShowdownState&) = default;
};

std::string serialize(const ShowdownState& state);

using EvalFn = std::function<Evaluation(std::string_view se, std::string_view target, std::string_view prior)>;

class ShowdownMatch {
 public:
  // Throws GameError{WrongPlayerCount} unless exactly two players, and
  // GameError{EmptyText} if the text has no target sentence.
  ShowdownMatch(std::vector<std::string> players, PracticeText text, ShowdownConfig config, EvalFn eval);

  Broadcasts start();
  Broadcasts acknowledge(const std::string& player);
  Broadcasts submit_se(const std::string& player, const std::string& text);
  Broadcasts timer_expired();
  Broadcasts advance();
  Broadcasts score_round();
  Broadcasts remove_player(const std::string& player);
  // Departure of both players in the same instant.
  Broadcasts remove_players(std::span<const std::string> players);

  const ShowdownState& state() const noexcept { return state_; }
  bool finished() const noexcept { return state_.phase == ShowdownPhase::FINISHED; }

  // Timer for the current phase; none in SCORING and FINISHED.
  std::optional<TimerSpec> current_timer() const;
  // Bumped every time a new phase timer starts; stale expiries compare unequal.
  std::uint64_t timer_epoch() const noexcept { return timer_epoch_; }

  // Sum of stakes of all decided rounds so far.
  int awarded_points() const noexcept { return awarded_; }
  std::size_t regular_rounds() const noexcept { return regular_rounds_; }

 private:
  void require_live() const;
  void begin_round(Broadcasts& out);
  void enter_phase(ShowdownPhase phase, Broadcasts& out);
  void finish(Broadcasts& out, std::string outcome, std::optional<std::size_t> winner);
  void decide_after_result(Broadcasts& out);

  PracticeText text_;
  ShowdownConfig config_;
  EvalFn eval_;
  ShowdownState state_;
  std::array<std::optional<std::string>, 2> submissions_;
  std::array<bool, 2> acks_{};
  std::size_t regular_rounds_;
  std::uint64_t timer_epoch_ = 0;
  int awarded_ = 0;
  bool started_ = false;
};

class ShowdownReplica {
 public:
  void apply(const ControlMessage& msg);
  void apply(std::span<const ControlMessage> msgs) {
    for (const auto& m : msgs) apply(m);
  }
  const ShowdownState& state() const noexcept { return state_; }
  bool started() const noexcept { return started_; }

 private:
  ShowdownState state_;
  bool started_ = false;
};

}  // namespace sxgame
