#include "sxgame/content.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sxgame {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& invariant, const std::string& detail) {
  throw ContentError(ContentError::Code::ValidationError, invariant + ": " + detail);
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

json parse_json(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ContentError(ContentError::Code::ParseError,
                       origin + ":" + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
}

// Wraps nlohmann type errors so malformed documents surface as ParseError with the origin.
template <typename F>
auto with_origin(const std::string& origin, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ContentError(ContentError::Code::ParseError, origin + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContentError(ContentError::Code::MissingFile, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

json to_json(const PracticeText& t) {
  json j{{"id", t.id}, {"title", t.title}, {"sentences", t.sentences}, {"targets", t.target_indices}};
  if (t.bonus_target_index) j["bonus_target"] = *t.bonus_target_index;
  return j;
}

}  // namespace

bool StrategyDef::has_reason(std::string_view reason_id) const noexcept {
  return std::any_of(reasons.begin(), reasons.end(), [&](const Reason& r) { return r.id == reason_id; });
}

void validate(const PracticeText& text) {
  if (text.id.empty()) invalid("text.id non-empty", "text without id");
  if (text.sentences.empty()) invalid("text.sentences non-empty", text.id);
  if (text.target_indices.empty()) invalid("at least one target sentence", text.id);
  for (std::size_t i = 0; i < text.target_indices.size(); ++i) {
    const auto t = text.target_indices[i];
    if (t >= text.sentences.size()) {
      invalid("target index within sentence count",
              text.id + " target " + std::to_string(t) + " >= " + std::to_string(text.sentences.size()));
    }
    if (i > 0 && t <= text.target_indices[i - 1]) {
      invalid("target indices strictly increasing", text.id + " at position " + std::to_string(i));
    }
  }
  if (text.bonus_target_index && *text.bonus_target_index >= text.sentences.size()) {
    invalid("bonus target index within sentence count", text.id);
  }
  for (std::size_t i = 0; i < text.sentences.size(); ++i) {
    if (text.sentences[i].find_first_not_of(" \t") == std::string::npos) {
      invalid("sentences non-empty", text.id + " sentence " + std::to_string(i));
    }
  }
}

void validate(const StrategyDef& strategy) {
  if (strategy.id.empty()) invalid("strategy.id non-empty", "strategy without id");
  if (strategy.reasons.empty()) invalid("at least one reason per strategy", strategy.id);
  std::set<std::string> seen;
  for (const auto& r : strategy.reasons) {
    if (r.id.empty()) invalid("reason.id non-empty", strategy.id);
    if (!seen.insert(r.id).second) invalid("reason ids unique within strategy", strategy.id + "/" + r.id);
  }
}

PracticeText parse_practice_text(std::string_view text, const std::string& origin) {
  const json j = parse_json(text, origin);
  PracticeText t = with_origin(origin, [&] {
    PracticeText p;
    p.id = j.at("id").get<std::string>();
    p.title = j.value("title", std::string{});
    p.sentences = j.at("sentences").get<std::vector<std::string>>();
    p.target_indices = j.at("targets").get<std::vector<std::size_t>>();
    if (j.contains("bonus_target") && !j.at("bonus_target").is_null()) {
      p.bonus_target_index = j.at("bonus_target").get<std::size_t>();
    }
    return p;
  });
  try {
    validate(t);
  } catch (const ContentError& e) {
    throw ContentError(e.code(), origin + ": " + e.what());
  }
  return t;
}

std::vector<StrategyDef> parse_strategies(std::string_view text, const std::string& origin) {
  const json j = parse_json(text, origin);
  auto strategies = with_origin(origin, [&] {
    std::vector<StrategyDef> out;
    for (const auto& s : j.at("strategies")) {
      StrategyDef d;
      d.id = s.at("id").get<std::string>();
      d.name = s.value("name", d.id);
      d.description = s.value("description", std::string{});
      for (const auto& r : s.at("reasons")) {
        d.reasons.push_back(Reason{r.at("id").get<std::string>(), r.at("text").get<std::string>()});
      }
      out.push_back(std::move(d));
    }
    return out;
  });
  std::set<std::string> ids;
  for (const auto& s : strategies) {
    try {
      validate(s);
    } catch (const ContentError& e) {
      throw ContentError(e.code(), origin + ": " + e.what());
    }
    if (!ids.insert(s.id).second) invalid("strategy ids unique", origin + ": " + s.id);
  }
  if (strategies.empty()) invalid("at least one strategy", origin);
  return strategies;
}

std::vector<EventCard> parse_event_cards(std::string_view text, const std::string& origin, EventDeltaBounds bounds) {
  const json j = parse_json(text, origin);
  auto cards = with_origin(origin, [&] {
    std::vector<EventCard> out;
    for (const auto& c : j.at("cards")) out.push_back(EventCard{c.at("label").get<std::string>(), c.at("delta").get<int>()});
    return out;
  });
  if (cards.empty()) invalid("event deck non-empty", origin);
  for (const auto& c : cards) {
    if (c.delta == 0 || c.delta < bounds.min_delta || c.delta > bounds.max_delta) {
      invalid("event delta within bounds and non-zero", origin + ": '" + c.label + "' delta " + std::to_string(c.delta));
    }
  }
  return cards;
}

std::vector<std::string> parse_stopwords(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ws(line);
    std::string w;
    while (ws >> w) {
      std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      words.push_back(std::move(w));
    }
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

ContentBundle::ContentBundle(std::vector<PracticeText> texts, std::vector<StrategyDef> strategies,
                             std::vector<EventCard> event_cards, std::vector<std::string> stopwords)
    : texts_(std::move(texts)),
      strategies_(std::move(strategies)),
      event_cards_(std::move(event_cards)),
      stopwords_(std::move(stopwords)) {
  std::sort(texts_.begin(), texts_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < texts_.size(); ++i) {
    if (texts_[i].id == texts_[i - 1].id) invalid("text ids unique", texts_[i].id);
  }
}

const PracticeText* ContentBundle::find_text(std::string_view id) const noexcept {
  const auto it = std::find_if(texts_.begin(), texts_.end(), [&](const auto& t) { return t.id == id; });
  return it == texts_.end() ? nullptr : &*it;
}

const StrategyDef* ContentBundle::find_strategy(std::string_view id) const noexcept {
  const auto it = std::find_if(strategies_.begin(), strategies_.end(), [&](const auto& s) { return s.id == id; });
  return it == strategies_.end() ? nullptr : &*it;
}

std::vector<std::string> ContentBundle::strategy_ids() const {
  std::vector<std::string> ids;
  ids.reserve(strategies_.size());
  for (const auto& s : strategies_) ids.push_back(s.id);
  return ids;
}

std::uint64_t ContentBundle::text_hash(const PracticeText& text) const {
  return fnv1a(to_json(text).dump());
}

std::uint64_t ContentBundle::bundle_hash() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& t : texts_) h = fnv1a(to_json(t).dump(), h);
  for (const auto& s : strategies_) {
    h = fnv1a(s.id, h);
    for (const auto& r : s.reasons) h = fnv1a(r.id + "\x1f" + r.text, h);
  }
  for (const auto& c : event_cards_) h = fnv1a(c.label + "\x1f" + std::to_string(c.delta), h);
  for (const auto& w : stopwords_) h = fnv1a(w, h);
  return h;
}

ContentBundle load_content(const std::filesystem::path& dir, EventDeltaBounds bounds) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw ContentError(ContentError::Code::MissingFile, "not a directory: " + dir.string());

  std::vector<fs::path> text_files;
  if (fs::is_directory(dir / "texts")) {
    for (const auto& entry : fs::directory_iterator(dir / "texts")) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") text_files.push_back(entry.path());
    }
  }
  std::sort(text_files.begin(), text_files.end());

  std::vector<PracticeText> texts;
  for (const auto& p : text_files) texts.push_back(parse_practice_text(read_file(p), p.string()));
  if (texts.empty()) invalid("at least one practice text", (dir / "texts").string());

  const auto strategies_path = dir / "strategies.json";
  const auto cards_path = dir / "event_cards.json";
  const auto stop_path = dir / "stopwords.txt";
  auto strategies = parse_strategies(read_file(strategies_path), strategies_path.string());
  auto cards = parse_event_cards(read_file(cards_path), cards_path.string(), bounds);
  auto stopwords = parse_stopwords(read_file(stop_path));

  return ContentBundle(std::move(texts), std::move(strategies), std::move(cards), std::move(stopwords));
}

std::string prior_text(const PracticeText& text, std::size_t sentence_index) {
  if (sentence_index >= text.sentences.size()) {
    throw ContentError(ContentError::Code::IndexOutOfRange,
                       text.id + ": sentence " + std::to_string(sentence_index) + " out of range");
  }
  std::string out;
  for (std::size_t i = 0; i < sentence_index; ++i) {
    if (i > 0) out += ' ';
    out += text.sentences[i];
  }
  return out;
}

}  // namespace sxgame
