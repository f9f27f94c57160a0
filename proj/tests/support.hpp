#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "sxgame/content.hpp"
#include "sxgame/evaluator.hpp"
#include "sxgame/showdown.hpp"

namespace testing_support {

inline const sxgame::ContentBundle& default_content() {
  static const sxgame::ContentBundle bundle = sxgame::load_content(SXGAME_TEST_CONTENT_DIR);
  return bundle;
}

inline std::shared_ptr<const sxgame::ContentBundle> shared_content() {
  static const auto ptr = std::make_shared<const sxgame::ContentBundle>(default_content());
  return ptr;
}

// Text with `targets` target sentences and a bonus target.
inline sxgame::PracticeText make_text(std::size_t targets, std::string id = "t") {
  sxgame::PracticeText t;
  t.id = std::move(id);
  t.title = "Test text";
  for (std::size_t i = 0; i < targets + 2; ++i) {
    t.sentences.push_back("Sentence " + std::to_string(i) + " about cells and membranes number " + std::to_string(i) + ".");
  }
  for (std::size_t i = 1; i <= targets; ++i) t.target_indices.push_back(i);
  t.bonus_target_index = targets + 1;
  return t;
}

// Evaluation with only the score set.
inline sxgame::Evaluation scored(int s) {
  sxgame::Evaluation e;
  e.score = s;
  if (s == 0) e.flags.too_short = true;
  return e;
}

// Scores the SE text itself: "3" scores 3, anything else scores its length capped at 3.
inline sxgame::EvalFn digit_eval() {
  return [](std::string_view se, std::string_view, std::string_view) {
    if (se.size() == 1 && se[0] >= '0' && se[0] <= '3') return scored(se[0] - '0');
    return scored(static_cast<int>(std::min<std::size_t>(se.size(), 3)));
  };
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("sxgame-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support

#include "sxgame/event_log.hpp"

namespace testing_support {

// Storage that fails every append once `fail` is set, like a full disk.
class FlakyStorage : public sxgame::LogStorage {
 public:
  explicit FlakyStorage(std::shared_ptr<bool> fail) : fail_(std::move(fail)) {}

  void append_line(std::string_view day, std::string_view line) override {
    if (*fail_) throw sxgame::LogError(sxgame::LogError::Code::IoError, "no space left on device");
    inner_.append_line(day, line);
  }
  std::vector<std::string> read_lines() const override { return inner_.read_lines(); }

 private:
  std::shared_ptr<bool> fail_;
  sxgame::MemoryLogStorage inner_;
};

}  // namespace testing_support
