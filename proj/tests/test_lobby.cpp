#include <gtest/gtest.h>

#include "lobby_property.hpp"
#include "sxgame/lobby.hpp"

using namespace sxgame;

TEST(Lobby, CapacityTable) {
  EXPECT_EQ(capacity_for(GameType::MIBOARD).min_players, 3u);
  EXPECT_EQ(capacity_for(GameType::MIBOARD).max_players, 4u);
  EXPECT_EQ(capacity_for(GameType::SHOWDOWN).min_players, 2u);
  EXPECT_EQ(capacity_for(GameType::SHOWDOWN).max_players, 2u);
}

TEST(Lobby, EmptyZoneCreatesRoom) {
  Zone z;
  EXPECT_EQ(z.find_or_create_room(GameType::MIBOARD, "a"), "R1");
  EXPECT_EQ(z.rooms().size(), 1u);
}

TEST(Lobby, FirstFitPicksEarliestOpenRoom) {
  Zone z;
  for (const auto* p : {"a", "b", "c", "d"}) z.find_or_create_room(GameType::MIBOARD, p);
  EXPECT_EQ(z.find_or_create_room(GameType::MIBOARD, "e"), "R2");
  EXPECT_EQ(z.find_or_create_room(GameType::MIBOARD, "f"), "R2");
  z.leave_room("R1", "a");
  EXPECT_EQ(z.find_or_create_room(GameType::MIBOARD, "g"), "R1");
}

TEST(Lobby, TypesDoNotMix) {
  Zone z;
  z.find_or_create_room(GameType::MIBOARD, "a");
  EXPECT_EQ(z.find_or_create_room(GameType::SHOWDOWN, "b"), "R2");
  EXPECT_EQ(z.find_or_create_room(GameType::SHOWDOWN, "c"), "R2");
  EXPECT_EQ(z.find_or_create_room(GameType::SHOWDOWN, "d"), "R3");
}

TEST(Lobby, StartThresholds) {
  Zone z;
  z.find_or_create_room(GameType::MIBOARD, "a");
  z.find_or_create_room(GameType::MIBOARD, "b");
  EXPECT_FALSE(z.try_start("R1"));
  z.find_or_create_room(GameType::MIBOARD, "c");
  EXPECT_TRUE(z.try_start("R1"));
  EXPECT_EQ(z.find_or_create_room(GameType::MIBOARD, "d"), "R2");
  EXPECT_THROW(z.try_start("R1"), LobbyError);

  z.find_or_create_room(GameType::SHOWDOWN, "s1");
  z.find_or_create_room(GameType::SHOWDOWN, "s2");
  EXPECT_TRUE(z.try_start("R3"));
}

TEST(Lobby, LeaveOutcomes) {
  Zone z;
  z.find_or_create_room(GameType::MIBOARD, "a");
  EXPECT_EQ(z.leave_room("R1", "a"), LeaveOutcome::RoomDeleted);
  EXPECT_TRUE(z.rooms().empty());

  for (const auto* p : {"a", "b", "c"}) z.find_or_create_room(GameType::MIBOARD, p);
  EXPECT_EQ(z.leave_room("R2", "b"), LeaveOutcome::Removed);
  EXPECT_EQ(z.room("R2").players, (std::vector<std::string>{"a", "c"}));

  z.find_or_create_room(GameType::MIBOARD, "d");
  ASSERT_TRUE(z.try_start("R2"));
  EXPECT_EQ(z.leave_room("R2", "a"), LeaveOutcome::EngineHandles);
  EXPECT_EQ(z.room("R2").players.size(), 3u);

  try {
    z.leave_room("R2", "zz");
    FAIL();
  } catch (const LobbyError& e) {
    EXPECT_EQ(e.code(), LobbyError::Code::NotInRoom);
  }
}

TEST(Lobby, CloseRoomFreesPlayers) {
  Zone z;
  z.find_or_create_room(GameType::SHOWDOWN, "a");
  z.find_or_create_room(GameType::SHOWDOWN, "b");
  z.try_start("R1");
  z.close_room("R1");
  EXPECT_EQ(z.room_of("a"), nullptr);
  EXPECT_EQ(z.find_or_create_room(GameType::SHOWDOWN, "a"), "R2");
  EXPECT_THROW(z.close_room("R1"), LobbyError);
}

TEST(Lobby, RoomIds) {
  EXPECT_EQ(format_room_id(12), "R12");
  EXPECT_EQ(parse_room_number("R12"), 12u);
  EXPECT_FALSE(parse_room_number("R"));
  EXPECT_FALSE(parse_room_number("X1"));
  EXPECT_FALSE(parse_room_number("R1x"));
  Zone z("main", 40);
  EXPECT_EQ(z.find_or_create_room(GameType::MIBOARD, "a"), "R40");
}

TEST(Lobby, RandomSequencesMatchModel) {
  EXPECT_EQ(testing_support::check_lobby_sequences(1500, 4242), "");
}
