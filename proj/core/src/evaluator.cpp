#include "sxgame/evaluator.hpp"

#include <algorithm>
#include <cmath>

namespace sxgame {

namespace {

bool is_word_byte(unsigned char c) noexcept {
  // Non-ASCII bytes stay inside words so UTF-8 sequences are never split.
  return std::isalnum(c) != 0 || c >= 0x80;
}

std::vector<std::string> distinct(std::vector<std::string> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

bool contains_sorted(const std::vector<std::string>& sorted, const std::string& w) {
  return std::binary_search(sorted.begin(), sorted.end(), w);
}

}  // namespace

void ScoringConfig::validate() const {
  const auto ratio = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
  };
  ratio(sim_ceiling, "sim_ceiling");
  ratio(relevance_floor, "relevance_floor");
  ratio(prior_bonus_floor, "prior_bonus_floor");
  if (min_content_words < 1) throw std::invalid_argument("min_content_words must be >= 1");
  if (excellent_novel_floor < 1) throw std::invalid_argument("excellent_novel_floor must be >= 1");
}

double VectorSpacePlugin::cosine(const SparseVector& a, const SparseVector& b) const {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [_, w] : a) na += w * w;
  for (const auto& [_, w] : b) nb += w * w;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  // sqrt(fl(x*x)) == x, so cosine(v, v) is exactly 1.
  const double c = dot / std::sqrt(na * nb);
  return std::clamp(c, 0.0, 1.0);
}

Tokenizer::Tokenizer(std::vector<std::string> stopwords) : stopwords_(stopwords.begin(), stopwords.end()) {}

bool Tokenizer::is_stopword(std::string_view word) const {
  return stopwords_.count(std::string(word)) != 0;
}

std::vector<std::string> Tokenizer::content_words(std::string_view text) const {
  std::vector<std::string> out;
  std::string cur;
  const auto flush = [&] {
    if (!cur.empty() && stopwords_.count(cur) == 0) out.push_back(cur);
    cur.clear();
  };
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      cur += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

double overlap(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const auto da = distinct(a);
  if (da.empty()) return 0.0;
  const auto db = distinct(b);
  const auto hits = std::count_if(da.begin(), da.end(), [&](const auto& w) { return contains_sorted(db, w); });
  return static_cast<double>(hits) / static_cast<double>(da.size());
}

TfIdfSpace::TfIdfSpace(const std::vector<std::string>& documents, Tokenizer tokenizer)
    : tokenizer_(std::move(tokenizer)), doc_count_(documents.size()) {
  if (documents.empty()) throw EvaluatorError(EvaluatorError::Code::EmptyCorpus, "vector space corpus is empty");
  for (const auto& doc : documents) {
    for (const auto& term : distinct(tokenizer_.content_words(doc))) ++doc_freq_[term];
  }
}

double TfIdfSpace::idf(const std::string& term) const {
  const auto it = doc_freq_.find(term);
  const double df = it == doc_freq_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(doc_count_)) / (1.0 + df)) + 1.0;
}

SparseVector TfIdfSpace::embed(std::string_view text) const {
  std::map<std::string, double> tf;
  for (auto& w : tokenizer_.content_words(text)) tf[w] += 1.0;
  SparseVector v;
  v.reserve(tf.size());
  for (const auto& [term, count] : tf) v.emplace_back(term, count * idf(term));
  return v;
}

std::unique_ptr<TfIdfSpace> default_vector_space(const ContentBundle& content) {
  std::vector<std::string> docs;
  for (const auto& t : content.texts()) docs.insert(docs.end(), t.sentences.begin(), t.sentences.end());
  return std::make_unique<TfIdfSpace>(docs, Tokenizer(content.stopwords()));
}

Evaluator::Evaluator(Tokenizer tokenizer, ScoringConfig config, std::shared_ptr<const VectorSpacePlugin> plugin)
    : tokenizer_(std::move(tokenizer)), config_(std::move(config)), plugin_(std::move(plugin)) {
  config_.validate();
}

Evaluation Evaluator::evaluate(std::string_view se, std::string_view target, std::string_view prior) const {
  if (target.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw EvaluatorError(EvaluatorError::Code::EmptyTarget, "target sentence is empty");
  }
  const auto se_words = tokenizer_.content_words(se);
  const auto target_words = distinct(tokenizer_.content_words(target));
  const auto prior_words = distinct(tokenizer_.content_words(prior));

  Evaluation ev;
  auto& f = ev.features;
  f.content_len = se_words.size();
  f.sim_target = overlap(se_words, target_words);
  f.sim_prior = overlap(se_words, prior_words);
  for (const auto& w : distinct(se_words)) {
    if (!contains_sorted(target_words, w) && !contains_sorted(prior_words, w)) ++f.novel_count;
  }

  double relevance = std::max(f.sim_target, f.sim_prior);
  if (plugin_) {
    const auto se_vec = plugin_->embed(se);
    std::string text(prior);
    if (!text.empty()) text += ' ';
    text += target;
    f.cos_target = plugin_->cosine(se_vec, plugin_->embed(target));
    f.cos_text = plugin_->cosine(se_vec, plugin_->embed(text));
    relevance = std::max(relevance, *f.cos_text);
  }

  ev.flags.too_short = f.content_len < config_.min_content_words;
  ev.flags.too_similar = f.sim_target >= config_.sim_ceiling;
  ev.flags.irrelevant = relevance < config_.relevance_floor;

  if (ev.flags.any()) {
    ev.score = 0;
  } else if (f.sim_prior < config_.prior_bonus_floor) {
    ev.score = 1;
  } else {
    ev.score = f.novel_count >= config_.excellent_novel_floor ? 3 : 2;
  }
  return ev;
}

}  // namespace sxgame
