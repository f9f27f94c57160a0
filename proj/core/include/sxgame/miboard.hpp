#pragma once

// Authoritative MiBoard game: a Reader writes a self-explanation using a drawn
// strategy card, Guessers identify the strategy with a structured argument,
// the Reader verifies, disagreements go to a timed discussion, then the Reader
// rolls and draws an event card. Control rotates round-robin in join order and
// the game survives departures down to two players.
//
// Every state change is reported as a list of control messages. Applying those
// messages to a MiBoardReplica reproduces state() exactly.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sxgame/content.hpp"
#include "sxgame/game_error.hpp"
#include "sxgame/protocol.hpp"
#include "sxgame/rng.hpp"

namespace sxgame {

using Broadcasts = std::vector<ControlMessage>;

struct MiBoardConfig {
  int board_length = 30;
  int die_sides = 6;
  int discussion_seconds = 60;
  int turn_timeout_seconds = 300;
  int strategy_copies = 1;
};

enum class MiBoardPhase { AWAITING_SE, IDENTIFICATION, VERIFICATION, DISCUSSION, ROLL_MOVE, EVENT, FINISHED };

std::string_view to_string(MiBoardPhase phase) noexcept;
std::optional<MiBoardPhase> parse_miboard_phase(std::string_view name) noexcept;

// Guesser argument built in the cascading menu: strategy, a reason from that
// strategy's list, and a highlighted span [start, end) of the SE in code points.
struct CmbArgument {
  std::string strategy;
  std::string reason;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const CmbArgument&, const CmbArgument&) = default;
};

struct MiBoardPlayer {
  std::string id;
  int position = 0;
  int points = 0;
  bool active = true;

  friend bool operator==(const MiBoardPlayer&, const MiBoardPlayer&) = default;
};

struct MiBoardState {
  std::vector<MiBoardPlayer> players;  // join order; departed players stay with active=false
  std::size_t reader_index = 0;
  MiBoardPhase phase = MiBoardPhase::AWAITING_SE;
  std::uint64_t turn_no = 0;
  std::optional<std::string> current_card;
  std::optional<std::string> current_se;
  std::map<std::string, CmbArgument> pending_idents;
  int board_length = 0;
  std::uint64_t rng_seed = 0;
  std::optional<std::string> winner;
  std::string end_reason;

  std::size_t active_count() const noexcept;
  const MiBoardPlayer* find(std::string_view id) const noexcept;
  const std::string& reader() const { return players.at(reader_index).id; }
  bool is_guesser(std::string_view id) const noexcept;
  std::vector<std::string> guessers() const;

  friend bool operator==(const MiBoardState&, const MiBoardState&) = default;
};

// Canonical single-line serialisation, used for bit-identical comparisons.
std::string serialize(const MiBoardState& state);

// Index of the next active player after `from` in join order, wrapping.
std::size_t next_active_index(std::span<const MiBoardPlayer> players, std::size_t from);

// Length of a UTF-8 string in code points.
std::size_t utf8_length(std::string_view text) noexcept;

template <typename T>
class Deck {
 public:
  Deck() = default;
  Deck(std::vector<T> cards, Rng& rng) : draw_pile_(std::move(cards)) { rng.shuffle(std::span<T>(draw_pile_)); }

  // Reshuffles the discards into the draw pile when it runs out.
  T draw(Rng& rng) {
    if (draw_pile_.empty()) {
      draw_pile_.swap(discards_);
      rng.shuffle(std::span<T>(draw_pile_));
    }
    T card = std::move(draw_pile_.back());
    draw_pile_.pop_back();
    return card;
  }
  void discard(T card) { discards_.push_back(std::move(card)); }

  std::size_t remaining() const noexcept { return draw_pile_.size(); }
  std::size_t discarded() const noexcept { return discards_.size(); }

  friend bool operator==(const Deck&, const Deck&) = default;

 private:
  std::vector<T> draw_pile_;
  std::vector<T> discards_;
};

class MiBoardGame {
 public:
  MiBoardGame(std::vector<std::string> players, const ContentBundle& content, MiBoardConfig config, std::uint64_t seed);

  // Emits START and opens the first turn.
  Broadcasts start();

  Broadcasts begin_turn();
  Broadcasts submit_se(const std::string& reader, const std::string& text);
  Broadcasts submit_identification(const std::string& guesser, const CmbArgument& arg);
  Broadcasts verify_and_resolve(const std::string& reader, const std::string& confirmed_strategy);
  // One vote per active player; the round closes when all have voted.
  Broadcasts vote_end_discussion(const std::string& player);
  Broadcasts end_discussion();
  Broadcasts roll_and_move(const std::string& reader);
  Broadcasts draw_event(const std::string& reader);
  Broadcasts remove_player(const std::string& player);
  // Turn timeout: the Reader's turn is dropped and control moves on.
  Broadcasts abandon_turn();

  const MiBoardState& state() const noexcept { return state_; }
  const MiBoardConfig& config() const noexcept { return config_; }
  bool finished() const noexcept { return state_.phase == MiBoardPhase::FINISHED; }

  // Copy of this game with departed players dropped from the roster. Play from
  // the copy is indistinguishable from a game that started without them.
  MiBoardGame compacted() const;

  const Deck<std::string>& strategy_deck() const noexcept { return strategy_deck_; }
  const Deck<EventCard>& event_deck() const noexcept { return event_deck_; }

 private:
  void require_live() const;
  void require_phase(MiBoardPhase phase) const;
  void require_reader(const std::string& player) const;
  void pass_control(Broadcasts& out);
  void open_turn(Broadcasts& out);
  void close_turn();
  void finish(Broadcasts& out, std::optional<std::string> winner, std::string reason);
  void maybe_complete_identification();

  MiBoardConfig config_;
  std::vector<StrategyDef> strategies_;
  MiBoardState state_;
  Rng rng_;
  Deck<std::string> strategy_deck_;
  Deck<EventCard> event_deck_;
  std::vector<std::string> discussion_votes_;
  bool started_ = false;
};

// Rebuilds MiBoardState purely from broadcast control messages.
class MiBoardReplica {
 public:
  void apply(const ControlMessage& msg);
  void apply(std::span<const ControlMessage> msgs) {
    for (const auto& m : msgs) apply(m);
  }
  const MiBoardState& state() const noexcept { return state_; }
  bool started() const noexcept { return started_; }

 private:
  void complete_identification_if_ready();

  MiBoardState state_;
  bool started_ = false;
};

}  // namespace sxgame
