#pragma once

// Live transport for GameServer. Two listeners share one io_context thread:
//
//   raw TCP     one frame per line, "\n"-terminated in both directions
//   WebSocket   upgrade on path /play; each text message carries one or more
//               "\n"-terminated frames, and the server sends one frame per message
//
// All callbacks, including game timers, run on the io_context thread, which
// keeps the single-threaded GameServer contract.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>

#include "sxgame/scheduler.hpp"
#include "sxgame/server.hpp"

namespace sxgame {

inline constexpr std::string_view kPlayPath = "/play";

// Wall-clock scheduler over asio timers. now_ms() is milliseconds since the epoch.
class AsioScheduler : public Scheduler {
 public:
  explicit AsioScheduler(boost::asio::io_context& io) : io_(io) {}
  ~AsioScheduler() override;

  std::int64_t now_ms() const override;
  TimerId schedule_after(std::int64_t delay_ms, std::function<void()> fn) override;
  void cancel(TimerId id) override;

 private:
  boost::asio::io_context& io_;
  TimerId next_id_ = 1;
  std::map<TimerId, std::shared_ptr<boost::asio::steady_timer>> timers_;
};

struct NetOptions {
  std::string address = "0.0.0.0";
  std::uint16_t tcp_port = 7400;             // 0 picks a free port
  std::optional<std::uint16_t> ws_port = 7401;
  std::size_t max_frame_bytes = 64 * 1024;  // longer lines close the connection
};

class Connection;

class NetServer {
 public:
  NetServer(boost::asio::io_context& io, GameServer& game, NetOptions options);
  ~NetServer();

  // Binds and starts accepting. Throws boost::system::system_error on bind failure.
  void start();
  void stop();

  std::uint16_t tcp_port() const;
  std::optional<std::uint16_t> ws_port() const;

 private:
  friend class Connection;

  void accept_tcp();
  void accept_ws();
  void closed(Connection* conn);

  boost::asio::io_context& io_;
  GameServer& game_;
  NetOptions options_;
  boost::asio::ip::tcp::acceptor tcp_acceptor_;
  std::optional<boost::asio::ip::tcp::acceptor> ws_acceptor_;
  std::set<std::shared_ptr<Connection>> connections_;
  bool stopped_ = false;
};

}  // namespace sxgame
