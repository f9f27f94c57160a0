#pragma once

// Practice texts, strategy definitions, event cards and the stopword list,
// loaded from a content directory:
//
//   <dir>/texts/*.json       one practice text per file
//   <dir>/strategies.json    strategy set with per-strategy reason lists
//   <dir>/event_cards.json   MiBoard event deck
//   <dir>/stopwords.txt      one word per line, '#' comments
//
// The bundle is immutable after load and may be shared freely.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sxgame {

struct PracticeText {
  std::string id;
  std::string title;
  std::vector<std::string> sentences;
  std::vector<std::size_t> target_indices;  // strictly increasing
  std::optional<std::size_t> bonus_target_index;

  friend bool operator==(const PracticeText&, const PracticeText&) = default;
};

struct Reason {
  std::string id;
  std::string text;

  friend bool operator==(const Reason&, const Reason&) = default;
};

struct StrategyDef {
  std::string id;
  std::string name;
  std::string description;
  std::vector<Reason> reasons;

  bool has_reason(std::string_view reason_id) const noexcept;

  friend bool operator==(const StrategyDef&, const StrategyDef&) = default;
};

struct EventCard {
  std::string label;
  int delta = 0;

  friend bool operator==(const EventCard&, const EventCard&) = default;
};

struct EventDeltaBounds {
  int min_delta = -3;
  int max_delta = 3;
};

class ContentError : public std::runtime_error {
 public:
  enum class Code { ParseError, ValidationError, IndexOutOfRange, MissingFile };

  ContentError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

class ContentBundle {
 public:
  ContentBundle() = default;
  ContentBundle(std::vector<PracticeText> texts, std::vector<StrategyDef> strategies, std::vector<EventCard> event_cards,
                std::vector<std::string> stopwords);

  const std::vector<PracticeText>& texts() const noexcept { return texts_; }
  const std::vector<StrategyDef>& strategies() const noexcept { return strategies_; }
  const std::vector<EventCard>& event_cards() const noexcept { return event_cards_; }
  const std::vector<std::string>& stopwords() const noexcept { return stopwords_; }

  const PracticeText* find_text(std::string_view id) const noexcept;
  const StrategyDef* find_strategy(std::string_view id) const noexcept;
  std::vector<std::string> strategy_ids() const;

  // FNV-1a over a canonical serialisation; stable across reloads.
  std::uint64_t text_hash(const PracticeText& text) const;
  std::uint64_t bundle_hash() const;

 private:
  std::vector<PracticeText> texts_;  // sorted by id
  std::vector<StrategyDef> strategies_;
  std::vector<EventCard> event_cards_;
  std::vector<std::string> stopwords_;
};

ContentBundle load_content(const std::filesystem::path& dir, EventDeltaBounds bounds = {});

// Individual parsers, exposed for tests and tools. `origin` names the file in errors.
PracticeText parse_practice_text(std::string_view json, const std::string& origin);
std::vector<StrategyDef> parse_strategies(std::string_view json, const std::string& origin);
std::vector<EventCard> parse_event_cards(std::string_view json, const std::string& origin, EventDeltaBounds bounds = {});
std::vector<std::string> parse_stopwords(std::string_view text);

void validate(const PracticeText& text);
void validate(const StrategyDef& strategy);

// Sentences strictly before `sentence_index`, joined by single spaces.
std::string prior_text(const PracticeText& text, std::size_t sentence_index);

}  // namespace sxgame
