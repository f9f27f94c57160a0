#pragma once

// 0-3 quality scoring of a self-explanation against its target sentence and
// the text preceding it.
//
//   0  flagged: too short, too similar to the target, or irrelevant
//   1  engages the target sentence only
//   2  also bridges to the prior text
//   3  bridges and adds enough new content words (elaboration)
//
// The word-overlap path is normative. A vector-space plugin may be supplied;
// its cosine against the text can rescue an SE from the irrelevance flag.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sxgame/content.hpp"

namespace sxgame {

struct ScoringConfig {
  std::size_t min_content_words = 5;
  double sim_ceiling = 0.8;         // too_similar when sim_target >= this
  double relevance_floor = 0.1;     // irrelevant when best similarity < this
  double prior_bonus_floor = 0.15;  // bridging when sim_prior >= this
  std::size_t excellent_novel_floor = 8;
  std::string stopword_list = "default";

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct EvaluationFlags {
  bool too_short = false;
  bool too_similar = false;
  bool irrelevant = false;

  bool any() const noexcept { return too_short || too_similar || irrelevant; }
  friend bool operator==(const EvaluationFlags&, const EvaluationFlags&) = default;
};

struct EvaluationFeatures {
  std::size_t content_len = 0;
  double sim_target = 0.0;
  double sim_prior = 0.0;
  std::size_t novel_count = 0;
  std::optional<double> cos_target;
  std::optional<double> cos_text;

  friend bool operator==(const EvaluationFeatures&, const EvaluationFeatures&) = default;
};

struct Evaluation {
  int score = 0;
  EvaluationFlags flags;
  EvaluationFeatures features;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

class EvaluatorError : public std::runtime_error {
 public:
  enum class Code { EmptyTarget, EmptyCorpus, EvaluatorFailure };

  EvaluatorError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

using SparseVector = std::vector<std::pair<std::string, double>>;  // sorted by term

class VectorSpacePlugin {
 public:
  virtual ~VectorSpacePlugin() = default;
  virtual SparseVector embed(std::string_view text) const = 0;
  // In [0, 1]; negative cosines clamp to 0, zero vectors give 0.
  virtual double cosine(const SparseVector& a, const SparseVector& b) const;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::vector<std::string> stopwords = {});

  // Lowercased alphanumeric runs minus stopwords, duplicates retained.
  std::vector<std::string> content_words(std::string_view text) const;
  bool is_stopword(std::string_view word) const;
  std::size_t stopword_count() const noexcept { return stopwords_.size(); }

 private:
  std::unordered_set<std::string> stopwords_;
};

// |distinct(a) ∩ b| / |distinct(a)|, 0 when a is empty.
double overlap(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Term-frequency × smoothed inverse-document-frequency over sentence documents.
class TfIdfSpace : public VectorSpacePlugin {
 public:
  TfIdfSpace(const std::vector<std::string>& documents, Tokenizer tokenizer);

  SparseVector embed(std::string_view text) const override;
  double idf(const std::string& term) const;
  std::size_t document_count() const noexcept { return doc_count_; }

 private:
  Tokenizer tokenizer_;
  std::map<std::string, std::size_t> doc_freq_;
  std::size_t doc_count_ = 0;
};

// Builds the default space from every sentence in the bundle.
std::unique_ptr<TfIdfSpace> default_vector_space(const ContentBundle& content);

class Evaluator {
 public:
  Evaluator(Tokenizer tokenizer, ScoringConfig config, std::shared_ptr<const VectorSpacePlugin> plugin = nullptr);

  Evaluation evaluate(std::string_view se, std::string_view target, std::string_view prior) const;

  const ScoringConfig& config() const noexcept { return config_; }
  const Tokenizer& tokenizer() const noexcept { return tokenizer_; }
  bool has_plugin() const noexcept { return plugin_ != nullptr; }

 private:
  Tokenizer tokenizer_;
  ScoringConfig config_;
  std::shared_ptr<const VectorSpacePlugin> plugin_;
};

}  // namespace sxgame
