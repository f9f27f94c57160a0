#include <gtest/gtest.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/read_until.hpp>
#include <boost/asio/streambuf.hpp>
#include <boost/asio/write.hpp>
#include <boost/beast/core/buffers_to_string.hpp>
#include <boost/beast/core/flat_buffer.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <istream>
#include <thread>

#include "support.hpp"
#include "sxgame/net.hpp"

using namespace sxgame;
namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

// Server on its own io_context thread, bound to loopback on free ports.
class LiveServer {
 public:
  LiveServer()
      : scheduler_(io_),
        log_(std::make_unique<MemoryLogStorage>()),
        game_(ServerConfig{}, testing_support::shared_content(), scheduler_, log_),
        net_(io_, game_, NetOptions{"127.0.0.1", 0, std::uint16_t{0}, 64 * 1024}) {
    net_.start();
    tcp_port_ = net_.tcp_port();
    ws_port_ = *net_.ws_port();
    thread_ = std::thread([this] { io_.run(); });
  }
  ~LiveServer() {
    asio::post(io_, [this] {
      net_.stop();
      io_.stop();
    });
    thread_.join();
  }

  std::uint16_t tcp_port() const { return tcp_port_; }
  std::uint16_t ws_port() const { return ws_port_; }

 private:
  asio::io_context io_;
  AsioScheduler scheduler_;
  EventLog log_;
  GameServer game_;
  NetServer net_;
  std::uint16_t tcp_port_ = 0;
  std::uint16_t ws_port_ = 0;
  std::thread thread_;
};

tcp::endpoint loopback(std::uint16_t port) { return {asio::ip::make_address("127.0.0.1"), port}; }

std::string read_line(tcp::socket& s, asio::streambuf& buf) {
  asio::read_until(s, buf, '\n');
  std::istream in(&buf);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST(Net, TcpJoinIsBroadcast) {
  LiveServer server;
  asio::io_context io;
  tcp::socket a(io);
  a.connect(loopback(server.tcp_port()));
  asio::write(a, asio::buffer(std::string("#!JOIN|alice|SHOWDOWN\n")));
  asio::streambuf buf;
  EXPECT_EQ(read_line(a, buf), "#!JOIN|alice|R1|SHOWDOWN|1");

  tcp::socket b(io);
  b.connect(loopback(server.tcp_port()));
  asio::write(b, asio::buffer(std::string("#!JOIN|bob|SHOWDOWN\r\n")));
  EXPECT_EQ(read_line(a, buf), "#!JOIN|bob|R1|SHOWDOWN|2");
  EXPECT_EQ(read_line(a, buf).rfind("#!START|SHOWDOWN|", 0), 0u);
}

TEST(Net, TcpMalformedFrameGetsError) {
  LiveServer server;
  asio::io_context io;
  tcp::socket a(io);
  a.connect(loopback(server.tcp_port()));
  asio::write(a, asio::buffer(std::string("#!BOGUS|x\n")));
  asio::streambuf buf;
  const auto line = read_line(a, buf);
  EXPECT_EQ(line.rfind("#!ERROR|MalformedControl|", 0), 0u) << line;
}

TEST(Net, WebSocketPlayEndpoint) {
  LiveServer server;
  asio::io_context io;
  websocket::stream<tcp::socket> ws(io);
  ws.next_layer().connect(loopback(server.ws_port()));
  ws.handshake("127.0.0.1", std::string(kPlayPath));
  ws.text(true);
  ws.write(asio::buffer(std::string("#!JOIN|carol|MIBOARD\n")));
  beast::flat_buffer buf;
  ws.read(buf);
  EXPECT_EQ(beast::buffers_to_string(buf.data()), "#!JOIN|carol|R1|MIBOARD|1\n");
  ws.close(websocket::close_code::normal);
}

TEST(Net, OtherPathsAreNotFound) {
  LiveServer server;
  asio::io_context io;
  tcp::socket s(io);
  s.connect(loopback(server.ws_port()));
  http::request<http::empty_body> req(http::verb::get, "/elsewhere", 11);
  req.set(http::field::host, "127.0.0.1");
  http::write(s, req);
  beast::flat_buffer buf;
  http::response<http::string_body> res;
  http::read(s, buf, res);
  EXPECT_EQ(res.result(), http::status::not_found);
}
