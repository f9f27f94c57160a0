#include <gtest/gtest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "sxgame/protocol.hpp"

using namespace sxgame;

namespace {

nlohmann::json vectors() {
  std::ifstream in(SXGAME_CONFORMANCE_FILE);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Conformance, ControlVectors) {
  const auto v = vectors();
  ASSERT_FALSE(v.at("control").empty());
  for (const auto& c : v.at("control")) {
    const auto op = parse_opcode(c.at("opcode").get<std::string>());
    ASSERT_TRUE(op);
    const ControlMessage m(*op, c.at("fields").get<std::vector<std::string>>());
    const auto frame = c.at("frame").get<std::string>();
    EXPECT_EQ(encode_control(m).str(), frame);
    EXPECT_EQ(std::get<ControlMessage>(decode_frame(std::string_view(frame))), m) << frame;
  }
}

TEST(Conformance, ChatVectors) {
  const auto v = vectors();
  for (const auto& c : v.at("chat")) {
    const ChatMessage m{c.at("sender").get<std::string>(), c.at("text").get<std::string>()};
    const auto frame = c.at("frame").get<std::string>();
    EXPECT_EQ(encode_chat(m).str(), frame);
    EXPECT_EQ(std::get<ChatMessage>(decode_frame(std::string_view(frame))), m) << frame;
  }
}

TEST(Conformance, ErrorVectors) {
  const auto v = vectors();
  for (const auto& c : v.at("decode_errors")) {
    const auto frame = c.at("frame").get<std::string>();
    try {
      decode_frame(std::string_view(frame));
      ADD_FAILURE() << "accepted " << frame;
    } catch (const ProtocolError& e) {
      EXPECT_EQ(to_string(e.code()), c.at("error").get<std::string>()) << frame;
    }
  }
}
