#pragma once

// Server configuration, loadable from an INI file:
//
//   [server]    zone, seed, text_id, vector_space
//   [lobby]     fill_timeout_seconds
//   [miboard]   board_length, die_sides, discussion_seconds, turn_timeout_seconds, strategy_copies
//   [showdown]  reading_seconds, composing_seconds, round_result_seconds, rounds, max_bonus_rounds
//   [scoring]   min_content_words, sim_ceiling, relevance_floor, prior_bonus_floor,
//               excellent_novel_floor, stopword_list
//
// Unknown keys are rejected so typos do not silently fall back to defaults.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sxgame/evaluator.hpp"
#include "sxgame/miboard.hpp"
#include "sxgame/showdown.hpp"

namespace sxgame {

struct ServerConfig {
  std::string zone = "default";
  std::uint64_t seed = 1;
  std::optional<std::string> text_id;  // Showdown text; otherwise rotated by room
  bool vector_space = false;
  int fill_timeout_seconds = 30;
  MiBoardConfig miboard;
  ShowdownConfig showdown;
  ScoringConfig scoring;

  void validate() const;
};

ServerConfig load_config(const std::filesystem::path& path);
ServerConfig parse_config(const std::string& ini_text);

}  // namespace sxgame
