#pragma once

// Straight-line reference scorer written from the scoring formula alone. It
// shares no code with the library: its own tokenizer, std::set bookkeeping,
// and a literal if-chain for the 0-3 ladder.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct RefConfig {
  std::size_t min_content_words = 5;
  double sim_ceiling = 0.8;
  double relevance_floor = 0.1;
  double prior_bonus_floor = 0.15;
  std::size_t excellent_novel_floor = 8;
};

struct RefResult {
  int score = 0;
  bool too_short = false;
  bool too_similar = false;
  bool irrelevant = false;
  std::size_t content_len = 0;
  double sim_target = 0;
  double sim_prior = 0;
  std::size_t novel_count = 0;
};

inline std::vector<std::string> ref_words(const std::string& text, const std::set<std::string>& stop) {
  std::vector<std::string> words;
  std::string w;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const unsigned char c = i < text.size() ? static_cast<unsigned char>(text[i]) : ' ';
    const bool word = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
    if (word) {
      w.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c));
    } else if (!w.empty()) {
      if (stop.find(w) == stop.end()) words.push_back(w);
      w.clear();
    }
  }
  return words;
}

inline double ref_overlap(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& w : sa) {
    if (sb.count(w)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(sa.size());
}

inline RefResult ref_evaluate(const std::string& se, const std::string& target, const std::string& prior,
                              const std::set<std::string>& stop, const RefConfig& cfg = {}) {
  RefResult r;
  const auto s = ref_words(se, stop);
  const auto t = ref_words(target, stop);
  const auto p = ref_words(prior, stop);
  r.content_len = s.size();
  r.sim_target = ref_overlap(s, t);
  r.sim_prior = ref_overlap(s, p);
  const std::set<std::string> st(t.begin(), t.end());
  const std::set<std::string> sp(p.begin(), p.end());
  const std::set<std::string> ss(s.begin(), s.end());
  for (const auto& w : ss) {
    if (!st.count(w) && !sp.count(w)) ++r.novel_count;
  }
  r.too_short = r.content_len < cfg.min_content_words;
  r.too_similar = r.sim_target >= cfg.sim_ceiling;
  const double best = r.sim_target > r.sim_prior ? r.sim_target : r.sim_prior;
  r.irrelevant = best < cfg.relevance_floor;
  if (r.too_short || r.too_similar || r.irrelevant) {
    r.score = 0;
  } else if (r.sim_prior < cfg.prior_bonus_floor) {
    r.score = 1;
  } else if (r.novel_count >= cfg.excellent_novel_floor) {
    r.score = 3;
  } else {
    r.score = 2;
  }
  return r;
}

}  // namespace oracle
