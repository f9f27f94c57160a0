#include <gtest/gtest.h>

#include <random>

#include "showdown_driver.hpp"
#include "support.hpp"
#include "sxgame/showdown.hpp"

using namespace sxgame;
using testing_support::digit_eval;
using testing_support::make_text;

namespace {

GameError::Code error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const GameError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no GameError";
  return GameError::Code::GameFinished;
}

ShowdownMatch make(std::size_t targets = 3, ShowdownConfig cfg = {}) {
  return ShowdownMatch({"a", "b"}, make_text(targets), cfg, digit_eval());
}

// Plays one round from READING with the given digit scores.
Broadcasts play_round(ShowdownMatch& m, int a, int b) {
  EXPECT_EQ(m.state().phase, ShowdownPhase::READING);
  m.timer_expired();
  m.submit_se("a", std::to_string(a));
  return m.submit_se("b", std::to_string(b));
}

void next_round(ShowdownMatch& m) {
  ASSERT_EQ(m.state().phase, ShowdownPhase::ROUND_RESULT);
  m.timer_expired();
}

}  // namespace

TEST(Showdown, StartMatch) {
  auto m = make(5);
  const auto out = m.start();
  EXPECT_EQ(out[0].opcode, Opcode::START);
  EXPECT_EQ(out[1].opcode, Opcode::ROUND_BEGIN);
  EXPECT_EQ(out[2].opcode, Opcode::TIMER_TICK);
  EXPECT_EQ(out[2].fields, (std::vector<std::string>{"READING", "60"}));
  EXPECT_EQ(m.state().phase, ShowdownPhase::READING);
  EXPECT_EQ(m.state().round_no, 1u);
  EXPECT_EQ(m.state().stake, 1);
  EXPECT_EQ(m.state().players[0].score + m.state().players[1].score, 0);
  EXPECT_EQ(m.regular_rounds(), 5u);
}

TEST(Showdown, ConstructionErrors) {
  EXPECT_EQ(error_of([] { ShowdownMatch({"a", "b", "c"}, make_text(2), {}, digit_eval()); }),
            GameError::Code::WrongPlayerCount);
  auto empty = make_text(1);
  empty.target_indices.clear();
  EXPECT_EQ(error_of([&] { ShowdownMatch({"a", "b"}, empty, {}, digit_eval()); }), GameError::Code::EmptyText);
}

TEST(Showdown, SubmissionRules) {
  auto m = make();
  m.start();
  EXPECT_EQ(error_of([&] { m.submit_se("a", "1"); }), GameError::Code::WrongPhase);
  m.timer_expired();
  EXPECT_EQ(m.state().phase, ShowdownPhase::COMPOSING);
  const auto first = m.submit_se("a", "1");
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(first[0], ControlMessage(Opcode::SE_SUBMIT, {"a"}));
  EXPECT_EQ(m.state().phase, ShowdownPhase::COMPOSING);
  EXPECT_TRUE(m.state().players[0].submitted);
  EXPECT_EQ(error_of([&] { m.submit_se("a", "2"); }), GameError::Code::DuplicateSubmission);
  EXPECT_EQ(error_of([&] { m.submit_se("z", "2"); }), GameError::Code::UnknownPlayer);
  m.submit_se("b", "2");
  EXPECT_EQ(m.state().phase, ShowdownPhase::ROUND_RESULT);
}

TEST(Showdown, SecondSubmissionDoesNotLeakFirstText) {
  auto m = make();
  m.start();
  m.timer_expired();
  const auto out = m.submit_se("a", "secret");
  for (const auto& f : out[0].fields) EXPECT_NE(f, "secret");
}

TEST(Showdown, ExpiryScoresMissingAsEmpty) {
  ShowdownMatch m({"a", "b"}, make_text(2), {},
                  [](std::string_view se, std::string_view, std::string_view) { return testing_support::scored(se.empty() ? 0 : 2); });
  m.start();
  m.timer_expired();
  m.submit_se("a", "something");
  m.timer_expired();
  const auto& r = *m.state().last_round;
  EXPECT_EQ(r.ses[1], "");
  EXPECT_EQ(r.scores, (std::array<int, 2>{2, 0}));
  EXPECT_EQ(r.winner, 0);
}

TEST(Showdown, ScoringExamples) {
  auto m = make(5);
  m.start();
  play_round(m, 3, 1);
  EXPECT_EQ(m.state().players[0].score, 1);
  EXPECT_EQ(m.state().stake, 1);
  next_round(m);
  play_round(m, 2, 2);
  EXPECT_EQ(m.state().players[0].score, 1);
  EXPECT_EQ(m.state().players[1].score, 0);
  EXPECT_EQ(m.state().stake, 2);
  next_round(m);
  EXPECT_EQ(m.state().stake, 2);
  play_round(m, 0, 1);
  EXPECT_EQ(m.state().players[1].score, 2);
  EXPECT_EQ(m.state().stake, 1);
}

TEST(Showdown, ForcedTiesHoldStakeAtTwo) {
  ShowdownConfig cfg;
  cfg.rounds = 6;
  auto m = make(3, cfg);
  m.start();
  std::vector<int> stakes;
  for (int r = 0; r < 4; ++r) {
    stakes.push_back(m.state().stake);
    if (r < 3) {
      play_round(m, 2, 2);
    } else {
      play_round(m, 3, 2);
    }
    next_round(m);
  }
  stakes.push_back(m.state().stake);
  EXPECT_EQ(stakes, (std::vector<int>{1, 2, 2, 2, 1}));
  EXPECT_EQ(m.state().players[0].score, 2);
}

TEST(Showdown, MatchWinAfterLastTarget) {
  auto m = make(3);
  m.start();
  play_round(m, 3, 0);
  next_round(m);
  play_round(m, 3, 0);
  next_round(m);
  const auto out = play_round(m, 0, 3);
  EXPECT_EQ(m.state().phase, ShowdownPhase::ROUND_RESULT);
  const auto end = m.timer_expired();
  EXPECT_TRUE(m.finished());
  EXPECT_EQ(m.state().outcome, "win");
  EXPECT_EQ(m.state().winner, "a");
  ASSERT_EQ(end.back().opcode, Opcode::MATCH_RESULT);
  EXPECT_EQ(end.back().fields, (std::vector<std::string>{"win", "a", "2", "1"}));
}

TEST(Showdown, MatchTieGoesToBonusRound) {
  auto text = make_text(2);
  ShowdownMatch m({"a", "b"}, text, {}, digit_eval());
  m.start();
  play_round(m, 3, 1);
  next_round(m);
  play_round(m, 0, 1);
  next_round(m);
  EXPECT_FALSE(m.finished());
  EXPECT_EQ(m.state().round_no, 3u);
  EXPECT_EQ(m.state().stake, 2);
  EXPECT_EQ(m.state().bonus_rounds, 1);
  EXPECT_EQ(m.state().sentence_index, *text.bonus_target_index);
  play_round(m, 2, 1);
  next_round(m);
  EXPECT_TRUE(m.finished());
  EXPECT_EQ(m.state().winner, "a");
  EXPECT_EQ(m.state().players[0].score, 3);
}

TEST(Showdown, BonusRoundsCapThenDraw) {
  auto m = make(1);
  m.start();
  for (int r = 0; r < 4; ++r) {
    play_round(m, 1, 1);
    next_round(m);
  }
  EXPECT_TRUE(m.finished());
  EXPECT_EQ(m.state().outcome, "draw");
  EXPECT_FALSE(m.state().winner);
  EXPECT_EQ(m.state().bonus_rounds, 3);
}

TEST(Showdown, BonusFallsBackToLastTarget) {
  auto text = make_text(2);
  text.bonus_target_index.reset();
  ShowdownMatch m({"a", "b"}, text, {}, digit_eval());
  m.start();
  play_round(m, 1, 1);
  next_round(m);
  play_round(m, 1, 1);
  next_round(m);
  EXPECT_EQ(m.state().sentence_index, text.target_indices.back());
}

TEST(Showdown, TargetsAdvanceWithPrior) {
  auto text = make_text(3);
  ShowdownMatch m({"a", "b"}, text, {}, digit_eval());
  m.start();
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(m.state().target_index, r);
    EXPECT_EQ(m.state().sentence_index, text.target_indices[r]);
    EXPECT_EQ(m.state().target_sentence, text.sentences[text.target_indices[r]]);
    EXPECT_EQ(m.state().prior, prior_text(text, text.target_indices[r]));
    play_round(m, 1, 0);
    next_round(m);
  }
}

TEST(Showdown, AcknowledgementsEndPhasesEarly) {
  auto m = make();
  m.start();
  EXPECT_TRUE(m.acknowledge("a").empty());
  EXPECT_TRUE(m.acknowledge("a").empty());
  const auto out = m.acknowledge("b");
  EXPECT_EQ(m.state().phase, ShowdownPhase::COMPOSING);
  EXPECT_EQ(out.back().fields, (std::vector<std::string>{"COMPOSING", "120"}));
  EXPECT_EQ(error_of([&] { m.acknowledge("a"); }), GameError::Code::WrongPhase);
  m.submit_se("a", "1");
  m.submit_se("b", "1");
  m.acknowledge("b");
  m.acknowledge("a");
  EXPECT_EQ(m.state().phase, ShowdownPhase::READING);
  EXPECT_EQ(m.state().round_no, 2u);
}

TEST(Showdown, StaleAcknowledgementDoesNotCarryOver) {
  auto m = make();
  m.start();
  m.acknowledge("a");
  m.timer_expired();
  m.submit_se("a", "1");
  m.submit_se("b", "0");
  EXPECT_TRUE(m.acknowledge("b").empty());
  EXPECT_EQ(m.state().phase, ShowdownPhase::ROUND_RESULT);
}

TEST(Showdown, TimerEpochAdvancesPerPhase) {
  auto m = make();
  m.start();
  const auto e1 = m.timer_epoch();
  m.timer_expired();
  EXPECT_GT(m.timer_epoch(), e1);
  EXPECT_EQ(m.current_timer()->phase, ShowdownPhase::COMPOSING);
}

TEST(Showdown, TimerDurationsAreEvenSeconds) {
  static_assert(valid_timer_seconds(2));
  static_assert(!valid_timer_seconds(3));
  static_assert(!valid_timer_seconds(0));
  static_assert(!valid_timer_seconds(-2));
  EXPECT_THROW(TimerSpec(ShowdownPhase::READING, 5), std::invalid_argument);
  EXPECT_THROW(TimerSpec(ShowdownPhase::READING, 0), std::invalid_argument);
  EXPECT_NO_THROW(TimerSpec(ShowdownPhase::READING, 4));
  ShowdownConfig cfg;
  cfg.timers.composing_seconds = 45;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(make(3, cfg), std::invalid_argument);
}

TEST(Showdown, EveryScheduledTimerIsEven) {
  std::mt19937_64 rng(3);
  for (int run = 0; run < 50; ++run) {
    ShowdownConfig cfg;
    cfg.timers = {2 * (1 + static_cast<int>(rng() % 40)), 2 * (1 + static_cast<int>(rng() % 90)),
                  2 * (1 + static_cast<int>(rng() % 10))};
    auto m = make(3, cfg);
    for (const auto& b : m.start()) {
      if (b.opcode == Opcode::TIMER_TICK) EXPECT_EQ(std::stoi(b.fields[1]) % 2, 0);
    }
    while (!m.finished()) {
      ASSERT_TRUE(m.current_timer());
      EXPECT_TRUE(valid_timer_seconds(m.current_timer()->seconds));
      for (const auto& b : m.timer_expired()) {
        if (b.opcode == Opcode::TIMER_TICK) EXPECT_EQ(std::stoi(b.fields[1]) % 2, 0);
      }
    }
  }
}

TEST(Showdown, SilenceFinishesByTimers) {
  for (std::size_t targets = 1; targets <= 6; ++targets) {
    auto m = make(targets);
    m.start();
    int seconds = 0;
    int expiries = 0;
    while (!m.finished() && expiries < 1000) {
      seconds += m.current_timer()->seconds;
      m.timer_expired();
      ++expiries;
    }
    EXPECT_TRUE(m.finished());
    // Every round is an empty-vs-empty tie, so the match ends in a draw after the bonus cap.
    EXPECT_EQ(m.state().outcome, "draw");
    EXPECT_EQ(seconds, static_cast<int>(targets + 3) * (60 + 120 + 10));
  }
}

TEST(Showdown, ForfeitAndAbandon) {
  auto m = make();
  m.start();
  m.timer_expired();
  const auto out = m.remove_player("a");
  EXPECT_TRUE(m.finished());
  EXPECT_EQ(m.state().outcome, "forfeit");
  EXPECT_EQ(m.state().winner, "b");
  EXPECT_EQ(out.back().fields, (std::vector<std::string>{"forfeit", "b", "0", "0"}));

  auto r1 = make();
  r1.start();
  r1.remove_player("b");
  EXPECT_EQ(r1.state().winner, "a");

  auto both = make();
  both.start();
  const std::string ids[] = {"a", "b"};
  both.remove_players(ids);
  EXPECT_EQ(both.state().outcome, "abandoned");
  EXPECT_FALSE(both.state().winner);
  EXPECT_EQ(error_of([&] { both.remove_player("a"); }), GameError::Code::GameFinished);
}

TEST(Showdown, EvaluatorFailureVoidsRound) {
  int calls = 0;
  ShowdownMatch m({"a", "b"}, make_text(2), {}, [&](std::string_view se, std::string_view, std::string_view) {
    if (++calls == 2) throw EvaluatorError(EvaluatorError::Code::EvaluatorFailure, "backend down");
    return testing_support::scored(se.size() == 1 ? se[0] - '0' : 0);
  });
  m.start();
  const auto sentence = m.state().sentence_index;
  m.timer_expired();
  m.submit_se("a", "3");
  const auto out = m.submit_se("b", "1");
  ASSERT_GE(out.size(), 2u);
  EXPECT_EQ(out[1].opcode, Opcode::ERROR);
  EXPECT_EQ(out[1].fields[0], "EVALUATOR_FAILURE");
  EXPECT_EQ(m.state().phase, ShowdownPhase::READING);
  EXPECT_EQ(m.state().round_no, 1u);
  EXPECT_EQ(m.state().sentence_index, sentence);
  EXPECT_EQ(m.awarded_points(), 0);
  play_round(m, 3, 1);
  EXPECT_EQ(m.state().players[0].score, 1);
}

TEST(Showdown, EvaluatorFailureInBonusRoundKeepsCount) {
  int calls = 0;
  ShowdownMatch m({"a", "b"}, make_text(1), {}, [&](std::string_view se, std::string_view, std::string_view) {
    if (++calls == 3) throw std::runtime_error("boom");
    return testing_support::scored(se.size() == 1 ? se[0] - '0' : 0);
  });
  m.start();
  play_round(m, 1, 1);
  next_round(m);
  EXPECT_EQ(m.state().bonus_rounds, 1);
  play_round(m, 2, 1);
  EXPECT_EQ(m.state().bonus_rounds, 1);
  EXPECT_EQ(m.state().round_no, 2u);
  EXPECT_EQ(m.state().stake, 2);
}

TEST(Showdown, ReplicaTracksMatches) {
  std::mt19937_64 rng(77);
  for (int run = 0; run < 100; ++run) {
    auto m = make(1 + rng() % 4);
    ShowdownReplica r;
    r.apply(m.start());
    for (int i = 0; i < 200 && !m.finished(); ++i) {
      Broadcasts out;
      try {
        switch (rng() % 6) {
          case 0: out = m.timer_expired(); break;
          case 1: out = m.acknowledge(rng() % 2 ? "a" : "b"); break;
          case 2:
          case 3: out = m.submit_se(rng() % 2 ? "a" : "b", std::to_string(rng() % 4)); break;
          case 4: out = m.timer_expired(); break;
          default:
            if (rng() % 20 == 0) out = m.remove_player(rng() % 2 ? "a" : "b");
            break;
        }
      } catch (const GameError&) {
        continue;
      }
      r.apply(out);
      ASSERT_EQ(serialize(r.state()), serialize(m.state()));
    }
  }
}

TEST(Showdown, StakeLawAndConservation) {
  const auto sum = testing_support::stake_law(500, 2718);
  EXPECT_EQ(sum.failure, "");
  EXPECT_EQ(sum.matches, 500u);
}
