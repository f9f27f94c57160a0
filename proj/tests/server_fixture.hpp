#pragma once

// In-process server with recording clients on a simulated clock.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "support.hpp"
#include "sxgame/scheduler.hpp"
#include "sxgame/server.hpp"

namespace testing_support {

struct Client {
  sxgame::SessionId sid = 0;
  std::shared_ptr<std::vector<std::string>> frames = std::make_shared<std::vector<std::string>>();

  std::vector<sxgame::ControlMessage> controls(std::optional<sxgame::Opcode> op = std::nullopt) const {
    std::vector<sxgame::ControlMessage> out;
    for (const auto& f : *frames) {
      const auto m = sxgame::decode_frame(std::string_view(f));
      if (const auto* c = std::get_if<sxgame::ControlMessage>(&m)) {
        if (!op || c->opcode == *op) out.push_back(*c);
      }
    }
    return out;
  }
  std::vector<std::string> errors() const {
    std::vector<std::string> out;
    for (const auto& c : controls(sxgame::Opcode::ERROR)) out.push_back(c.fields.at(0));
    return out;
  }
  std::string last() const { return frames->empty() ? "" : frames->back(); }
};

struct ServerRig {
  sxgame::SimScheduler clock{1'700'000'000'000};
  std::shared_ptr<bool> log_fails = std::make_shared<bool>(false);
  sxgame::EventLog log;
  std::unique_ptr<sxgame::GameServer> server;

  explicit ServerRig(sxgame::ServerConfig config = {}, std::unique_ptr<sxgame::LogStorage> storage = nullptr)
      : log(storage ? std::move(storage) : std::make_unique<FlakyStorage>(log_fails)) {
    server = std::make_unique<sxgame::GameServer>(std::move(config), shared_content(), clock, log);
  }

  Client connect() {
    Client c;
    auto frames = c.frames;
    c.sid = server->connect([frames](const std::string& f) { frames->push_back(f); });
    return c;
  }

  void send(const Client& c, const sxgame::ControlMessage& m) { server->receive(c.sid, sxgame::encode_control(m).str()); }
  void send_raw(const Client& c, const std::string& line) { server->receive(c.sid, line); }

  Client join(const std::string& player, const std::string& type) {
    auto c = connect();
    send(c, sxgame::ControlMessage(sxgame::Opcode::JOIN, {player, type}));
    return c;
  }

  void advance_s(double seconds) { clock.run_until(clock.now_ms() + std::llround(seconds * 1000)); }
};

}  // namespace testing_support
