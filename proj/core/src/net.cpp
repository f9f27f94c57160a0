#include "sxgame/net.hpp"

#include <array>
#include <chrono>
#include <deque>

#include <boost/asio/post.hpp>
#include <boost/asio/streambuf.hpp>
#include <boost/asio/write.hpp>
#include <boost/beast/core/buffers_to_string.hpp>
#include <boost/beast/core/flat_buffer.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace sxgame {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;
using boost::system::error_code;

// ---------------------------------------------------------------------------
// AsioScheduler

AsioScheduler::~AsioScheduler() {
  for (auto& [_, t] : timers_) t->cancel();
}

std::int64_t AsioScheduler::now_ms() const {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

TimerId AsioScheduler::schedule_after(std::int64_t delay_ms, std::function<void()> fn) {
  const TimerId id = next_id_++;
  auto timer = std::make_shared<asio::steady_timer>(io_, std::chrono::milliseconds(delay_ms));
  timers_.emplace(id, timer);
  timer->async_wait([this, id, fn = std::move(fn)](const error_code& ec) {
    if (ec) return;
    if (timers_.erase(id) == 0) return;
    fn();
  });
  return id;
}

void AsioScheduler::cancel(TimerId id) {
  const auto it = timers_.find(id);
  if (it == timers_.end()) return;
  it->second->cancel();
  timers_.erase(it);
}

// ---------------------------------------------------------------------------
// Connections

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  explicit Connection(NetServer& owner) : owner_(owner) {}
  virtual ~Connection() = default;

  virtual void start() = 0;
  virtual void close() = 0;

 protected:
  void attach() {
    std::weak_ptr<Connection> weak = shared_from_this();
    sid_ = owner_.game_.connect([weak](const std::string& frame) {
      if (auto self = weak.lock()) self->deliver(frame);
    });
    attached_ = true;
  }

  void detach() {
    if (attached_) {
      attached_ = false;
      owner_.game_.disconnect(sid_);
    }
    owner_.closed(this);
  }

  // Splits on "\n" and hands each complete frame to the game.
  void feed(std::string_view chunk) {
    pending_.append(chunk);
    std::size_t pos;
    while ((pos = pending_.find('\n')) != std::string::npos) {
      std::string line = pending_.substr(0, pos);
      pending_.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && attached_) owner_.game_.receive(sid_, line);
    }
    if (pending_.size() > owner_.options_.max_frame_bytes) close();
  }

  virtual void deliver(const std::string& frame) = 0;

  const NetOptions& options() const noexcept { return owner_.options_; }

  NetServer& owner_;
  SessionId sid_ = 0;
  bool attached_ = false;
  std::string pending_;
};

namespace {

class TcpConnection final : public Connection {
 public:
  TcpConnection(NetServer& owner, tcp::socket socket) : Connection(owner), socket_(std::move(socket)) {}

  void start() override {
    attach();
    read();
  }

  void close() override {
    if (closed_) return;
    closed_ = true;
    error_code ignored;
    socket_.shutdown(tcp::socket::shutdown_both, ignored);
    socket_.close(ignored);
    detach();
  }

 private:
  void read() {
    socket_.async_read_some(asio::buffer(buf_), [self = shared_from_this(), this](const error_code& ec, std::size_t n) {
      if (ec) {
        close();
        return;
      }
      feed(std::string_view(buf_.data(), n));
      if (!closed_) read();
    });
  }

  void deliver(const std::string& frame) override {
    if (closed_) return;
    outbox_.push_back(frame + "\n");
    if (outbox_.size() == 1) write();
  }

  void write() {
    asio::async_write(socket_, asio::buffer(outbox_.front()), [self = shared_from_this(), this](const error_code& ec, std::size_t) {
      if (ec) {
        close();
        return;
      }
      outbox_.pop_front();
      if (!outbox_.empty()) write();
    });
  }

  tcp::socket socket_;
  std::array<char, 4096> buf_{};
  std::deque<std::string> outbox_;
  bool closed_ = false;
};

class WsConnection final : public Connection {
 public:
  WsConnection(NetServer& owner, tcp::socket socket) : Connection(owner), ws_(std::move(socket)) {}

  void start() override {
    http::async_read(ws_.next_layer(), buffer_, request_, [self = shared_from_this(), this](const error_code& ec, std::size_t) {
      if (ec) {
        close();
        return;
      }
      const auto target = request_.target();
      if (std::string_view(target.data(), target.size()) != kPlayPath || !websocket::is_upgrade(request_)) {
        reject();
        return;
      }
      ws_.text(true);
      ws_.read_message_max(options().max_frame_bytes);
      ws_.async_accept(request_, [self, this](const error_code& aec) {
        if (aec) {
          close();
          return;
        }
        open_ = true;
        attach();
        read();
      });
    });
  }

  void close() override {
    if (closed_) return;
    closed_ = true;
    error_code ignored;
    ws_.next_layer().shutdown(tcp::socket::shutdown_both, ignored);
    ws_.next_layer().close(ignored);
    detach();
  }

 private:
  void reject() {
    auto res = std::make_shared<http::response<http::string_body>>(http::status::not_found, request_.version());
    res->set(http::field::content_type, "text/plain");
    res->body() = "websocket endpoint is " + std::string(kPlayPath) + "\n";
    res->prepare_payload();
    http::async_write(ws_.next_layer(), *res, [self = shared_from_this(), res, this](const error_code&, std::size_t) {
      close();
    });
  }

  void read() {
    ws_.async_read(buffer_, [self = shared_from_this(), this](const error_code& ec, std::size_t) {
      if (ec) {
        close();
        return;
      }
      std::string data = beast::buffers_to_string(buffer_.data());
      buffer_.consume(buffer_.size());
      if (data.empty() || data.back() != '\n') data.push_back('\n');
      feed(data);
      if (!closed_) read();
    });
  }

  void deliver(const std::string& frame) override {
    if (closed_ || !open_) return;
    outbox_.push_back(frame + "\n");
    if (outbox_.size() == 1) write();
  }

  void write() {
    ws_.async_write(asio::buffer(outbox_.front()), [self = shared_from_this(), this](const error_code& ec, std::size_t) {
      if (ec) {
        close();
        return;
      }
      outbox_.pop_front();
      if (!outbox_.empty()) write();
    });
  }

  websocket::stream<tcp::socket> ws_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  std::deque<std::string> outbox_;
  bool open_ = false;
  bool closed_ = false;
};

tcp::acceptor open_acceptor(asio::io_context& io, const std::string& address, std::uint16_t port) {
  tcp::acceptor acceptor(io);
  const tcp::endpoint ep(asio::ip::make_address(address), port);
  acceptor.open(ep.protocol());
  acceptor.set_option(asio::socket_base::reuse_address(true));
  acceptor.bind(ep);
  acceptor.listen();
  return acceptor;
}

}  // namespace

// ---------------------------------------------------------------------------
// NetServer

NetServer::NetServer(asio::io_context& io, GameServer& game, NetOptions options)
    : io_(io), game_(game), options_(std::move(options)), tcp_acceptor_(io) {}

NetServer::~NetServer() { stop(); }

void NetServer::start() {
  tcp_acceptor_ = open_acceptor(io_, options_.address, options_.tcp_port);
  if (options_.ws_port) ws_acceptor_.emplace(open_acceptor(io_, options_.address, *options_.ws_port));
  accept_tcp();
  if (ws_acceptor_) accept_ws();
}

void NetServer::stop() {
  if (stopped_) return;
  stopped_ = true;
  error_code ignored;
  tcp_acceptor_.close(ignored);
  if (ws_acceptor_) ws_acceptor_->close(ignored);
  const auto conns = connections_;
  for (const auto& c : conns) c->close();
  connections_.clear();
}

std::uint16_t NetServer::tcp_port() const { return tcp_acceptor_.local_endpoint().port(); }

std::optional<std::uint16_t> NetServer::ws_port() const {
  if (!ws_acceptor_) return std::nullopt;
  return ws_acceptor_->local_endpoint().port();
}

void NetServer::accept_tcp() {
  tcp_acceptor_.async_accept([this](const error_code& ec, tcp::socket socket) {
    if (ec) return;
    auto conn = std::make_shared<TcpConnection>(*this, std::move(socket));
    connections_.insert(conn);
    conn->start();
    accept_tcp();
  });
}

void NetServer::accept_ws() {
  ws_acceptor_->async_accept([this](const error_code& ec, tcp::socket socket) {
    if (ec) return;
    auto conn = std::make_shared<WsConnection>(*this, std::move(socket));
    connections_.insert(conn);
    conn->start();
    accept_ws();
  });
}

void NetServer::closed(Connection* conn) {
  for (auto it = connections_.begin(); it != connections_.end(); ++it) {
    if (it->get() == conn) {
      // Defer the release so the connection outlives its own handler.
      asio::post(io_, [keep = *it] {});
      connections_.erase(it);
      return;
    }
  }
}

}  // namespace sxgame
