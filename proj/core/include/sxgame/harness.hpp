#pragma once

// Scripted-bot harness. Bots connect to a real GameServer, exchange encoded
// frames with it, keep broadcast replicas, and act on them after scripted
// think times. Everything runs on a SimScheduler, so a scenario is a pure
// function of its seed and scripts. Idle time is measured afterwards from the
// room's event log.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sxgame/config.hpp"
#include "sxgame/content.hpp"
#include "sxgame/event_log.hpp"
#include "sxgame/lobby.hpp"

namespace sxgame {

class HarnessError : public std::runtime_error {
 public:
  enum class Code { ScenarioTimeout, ProtocolViolation, InvalidScenario };

  HarnessError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

std::string_view to_string(HarnessError::Code code) noexcept;

struct ThinkTime {
  std::int64_t min_ms = 30'000;
  std::int64_t max_ms = 30'000;  // equal to min_ms for a fixed think time

  static ThinkTime fixed(double seconds);
  static ThinkTime uniform(double lo_seconds, double hi_seconds);
  bool is_fixed() const noexcept { return min_ms == max_ms; }
};

enum class IdentPolicy { ALWAYS_MATCH, ALWAYS_MISS, RANDOM };

std::string_view to_string(IdentPolicy policy) noexcept;
std::optional<IdentPolicy> parse_ident_policy(std::string_view name) noexcept;

struct BotScript {
  std::string player;  // defaults to bot<N>
  ThinkTime think;
  std::vector<std::string> se_corpus;  // cycled; a built-in line is used when empty
  IdentPolicy ident_policy = IdentPolicy::ALWAYS_MATCH;
  // Turn (MiBoard) or round (Showdown) at which the bot disconnects.
  std::optional<std::uint64_t> depart_at;
  // With depart_at: leave on first reaching this phase of that turn or round.
  std::optional<std::string> depart_phase;

  void validate() const;
};

struct UnitIdle {
  std::uint64_t unit = 0;  // MiBoard turn or Showdown round
  std::int64_t idle_ms = 0;
};

struct PlayerLull {
  std::string player;
  std::vector<std::pair<std::int64_t, std::int64_t>> intervals;  // [start_ms, end_ms)
  // MiBoard: one entry per turn the player spent as a Guesser. Showdown: one per round.
  std::vector<UnitIdle> per_unit;

  std::int64_t max_ms() const noexcept;
  std::int64_t total_ms() const noexcept;
  double mean_ms() const noexcept;
};

struct LullReport {
  GameType game = GameType::MIBOARD;
  std::int64_t duration_ms = 0;
  std::uint64_t rounds_completed = 0;
  std::uint64_t turns_completed = 0;  // MiBoard only
  std::vector<PlayerLull> players;

  std::int64_t max_ms() const noexcept;
  std::int64_t total_ms() const noexcept;
  // Mean length of an idle interval across all players; 0 without intervals.
  double mean_ms() const noexcept;
  std::size_t interval_count() const noexcept;
};

// Idle analysis of one room's log. A player is idle while active in a started
// game and without an available action.
LullReport analyze_lulls(GameType game, std::span<const LogRecord> records);

struct LullComparison {
  double max_diff_s = 0;  // b - a
  double mean_diff_s = 0;
  double total_diff_s = 0;
  // Set only when one report is Showdown and the other MiBoard.
  bool showdown_max_lower = false;
  bool showdown_mean_lower = false;
};

LullComparison compare_lulls(const LullReport& a, const LullReport& b);

void write_report(std::ostream& out, const LullReport& report);
LullReport read_report(std::istream& in);

struct Scenario {
  GameType game = GameType::MIBOARD;
  std::vector<BotScript> scripts;  // one per bot
  std::uint64_t seed = 1;
  ServerConfig config;
  std::shared_ptr<const ContentBundle> content;
  std::int64_t cap_ms = 24LL * 3600 * 1000;  // simulated time
};

struct ScenarioResult {
  std::string room_id;
  std::vector<LogRecord> log;
  LullReport report;
  std::uint64_t rounds_completed = 0;
  std::string final_snapshot;
  std::size_t frames_observed = 0;
};

// Throws HarnessError{ScenarioTimeout} if the game has not finished by
// cap_ms, HarnessError{ProtocolViolation} on any frame that fails to decode
// or re-encode identically, on an error reply to a bot, or when a bot replica
// diverges from the server.
ScenarioResult run_scenario(const Scenario& scenario);

// Line diff marking the first divergence, for violation messages.
std::string diff_text(std::string_view expected, std::string_view actual);

}  // namespace sxgame
