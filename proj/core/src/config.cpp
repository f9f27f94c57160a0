#include "sxgame/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace sxgame {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "server.zone",
      "server.seed",
      "server.text_id",
      "server.vector_space",
      "lobby.fill_timeout_seconds",
      "miboard.board_length",
      "miboard.die_sides",
      "miboard.discussion_seconds",
      "miboard.turn_timeout_seconds",
      "miboard.strategy_copies",
      "showdown.reading_seconds",
      "showdown.composing_seconds",
      "showdown.round_result_seconds",
      "showdown.rounds",
      "showdown.max_bonus_rounds",
      "scoring.min_content_words",
      "scoring.sim_ceiling",
      "scoring.relevance_floor",
      "scoring.prior_bonus_floor",
      "scoring.excellent_novel_floor",
      "scoring.stopword_list",
  };
  return keys;
}

template <typename T>
void read(const pt::ptree& tree, const char* key, T& into) {
  if (tree.get_child_optional(key)) into = tree.get<T>(key);
}

}  // namespace

void ServerConfig::validate() const {
  if (fill_timeout_seconds <= 0) throw std::invalid_argument("lobby.fill_timeout_seconds must be positive");
  if (miboard.board_length < 1) throw std::invalid_argument("miboard.board_length must be positive");
  if (miboard.die_sides < 1) throw std::invalid_argument("miboard.die_sides must be positive");
  if (miboard.discussion_seconds <= 0) throw std::invalid_argument("miboard.discussion_seconds must be positive");
  if (miboard.turn_timeout_seconds <= 0) throw std::invalid_argument("miboard.turn_timeout_seconds must be positive");
  if (miboard.strategy_copies < 1) throw std::invalid_argument("miboard.strategy_copies must be positive");
  showdown.validate();
  scoring.validate();
}

ServerConfig parse_config(const std::string& ini_text) {
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    for (const auto& [key, _] : body) {
      if (!known_keys().contains(section + "." + key)) {
        throw std::invalid_argument("config: unknown key [" + section + "] " + key);
      }
    }
  }

  ServerConfig c;
  try {
    read(tree, "server.zone", c.zone);
    read(tree, "server.seed", c.seed);
    if (const auto t = tree.get_optional<std::string>("server.text_id")) c.text_id = *t;
    read(tree, "server.vector_space", c.vector_space);
    read(tree, "lobby.fill_timeout_seconds", c.fill_timeout_seconds);
    read(tree, "miboard.board_length", c.miboard.board_length);
    read(tree, "miboard.die_sides", c.miboard.die_sides);
    read(tree, "miboard.discussion_seconds", c.miboard.discussion_seconds);
    read(tree, "miboard.turn_timeout_seconds", c.miboard.turn_timeout_seconds);
    read(tree, "miboard.strategy_copies", c.miboard.strategy_copies);
    read(tree, "showdown.reading_seconds", c.showdown.timers.reading_seconds);
    read(tree, "showdown.composing_seconds", c.showdown.timers.composing_seconds);
    read(tree, "showdown.round_result_seconds", c.showdown.timers.round_result_seconds);
    if (const auto r = tree.get_optional<std::size_t>("showdown.rounds")) c.showdown.rounds = *r;
    read(tree, "showdown.max_bonus_rounds", c.showdown.max_bonus_rounds);
    read(tree, "scoring.min_content_words", c.scoring.min_content_words);
    read(tree, "scoring.sim_ceiling", c.scoring.sim_ceiling);
    read(tree, "scoring.relevance_floor", c.scoring.relevance_floor);
    read(tree, "scoring.prior_bonus_floor", c.scoring.prior_bonus_floor);
    read(tree, "scoring.excellent_novel_floor", c.scoring.excellent_novel_floor);
    read(tree, "scoring.stopword_list", c.scoring.stopword_list);
  } catch (const pt::ptree_bad_data& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ServerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace sxgame
