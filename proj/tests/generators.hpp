#pragma once

// Random inputs shared by unit tests and the acceptance run.

#include <random>
#include <string>
#include <vector>

namespace testing_support {

// Text built from separators, escapes, control prefixes and multi-byte code points.
inline std::string random_text(std::mt19937_64& rng, std::size_t max_len, bool allow_newlines) {
  static const std::vector<std::string> atoms = {"a", "Z", "0", " ", "|", "\\", "#", "!", ">", "p", "n", "#!",
                                                 "\\p", "é", "水", "😀", "\t", "\n", "\r"};
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - (allow_newlines ? 1 : 3));
  std::string s;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s += atoms[pick(rng)];
  return s;
}

// Arbitrary bytes, biased toward the frame syntax.
inline std::string random_bytes(std::mt19937_64& rng, std::size_t max_len) {
  static const std::string syntax = "#!|>\\pnr \n\r";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::string s;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    s += rng() % 2 ? syntax[rng() % syntax.size()] : static_cast<char>(rng() & 0xFF);
  }
  return s;
}

inline std::string join_words(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) {
    if (!s.empty()) s += ' ';
    s += w;
  }
  return s;
}

struct Triple {
  std::string se, target, prior;
};

inline Triple random_triple(std::mt19937_64& rng) {
  static const std::vector<std::string> vocab = {
      "cell",  "membrane", "lipid", "water", "protein", "pump",  "ion",  "energy", "the",   "of",   "and",   "is",
      "Cloud", "RAIN",     "sun",   "ocean", "vapor",   "river", "salt", "sugar",  "a1",    "b2",   "café",  "naïve",
      "it's",  "co-op",    "x",     "y",     "z",       "gate",  "wall", "flow",   "heat",  "cold", "light", "dark"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  const auto make = [&](std::size_t lo, std::size_t hi) {
    std::uniform_int_distribution<std::size_t> len(lo, hi);
    std::vector<std::string> words;
    const auto n = len(rng);
    for (std::size_t i = 0; i < n; ++i) words.push_back(vocab[pick(rng)]);
    std::string s = join_words(words);
    if (!s.empty() && rng() % 3 == 0) s += ".";
    return s;
  };
  return {make(0, 20), "cell " + make(1, 10), make(0, 25)};
}

}  // namespace testing_support
