// sxserver: live game server plus offline log and scoring utilities.
//
//   sxserver serve  --port 7400 --ws-port 7401 --content-dir content --log-path logs [--config server.ini]
//   sxserver export --log-path logs --room R1 [--out R1.csv]
//   sxserver replay --log-path logs [--room R1]
//   sxserver score  --content-dir content --in records.jsonl [--out results.jsonl] [--config server.ini]

#include <csignal>
#include <fstream>
#include <iostream>

#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>
#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "sxgame/config.hpp"
#include "sxgame/content.hpp"
#include "sxgame/evaluator.hpp"
#include "sxgame/event_log.hpp"
#include "sxgame/net.hpp"
#include "sxgame/replay.hpp"
#include "sxgame/server.hpp"

namespace {

using nlohmann::ordered_json;

sxgame::ServerConfig config_from(const std::string& path) {
  return path.empty() ? sxgame::ServerConfig{} : sxgame::load_config(path);
}

int serve(const std::string& content_dir, const std::string& config_path, const std::string& log_path,
          const std::string& address, std::uint16_t port, int ws_port) {
  const auto config = config_from(config_path);
  auto content = std::make_shared<const sxgame::ContentBundle>(sxgame::load_content(content_dir));
  sxgame::EventLog log(std::make_unique<sxgame::FileLogStorage>(log_path));
  if (log.skipped_on_load() > 0) {
    std::cerr << "sxserver: skipped " << log.skipped_on_load() << " unreadable log line(s)\n";
  }

  boost::asio::io_context io;
  sxgame::AsioScheduler scheduler(io);
  sxgame::GameServer game(config, content, scheduler, log);
  sxgame::NetOptions options;
  options.address = address;
  options.tcp_port = port;
  options.ws_port = ws_port < 0 ? std::nullopt : std::optional<std::uint16_t>(static_cast<std::uint16_t>(ws_port));
  sxgame::NetServer net(io, game, options);
  net.start();

  std::cerr << "sxserver: zone '" << config.zone << "', " << content->texts().size() << " text(s), tcp port "
            << net.tcp_port();
  if (const auto ws = net.ws_port()) std::cerr << ", websocket ws://" << address << ":" << *ws << sxgame::kPlayPath;
  std::cerr << "\n";

  boost::asio::signal_set signals(io, SIGINT, SIGTERM);
  signals.async_wait([&](const boost::system::error_code&, int) {
    net.stop();
    io.stop();
  });
  io.run();
  return 0;
}

int export_room(const std::string& log_path, const std::string& room, const std::string& out_path) {
  const sxgame::EventLog log(std::make_unique<sxgame::FileLogStorage>(log_path));
  if (out_path.empty() || out_path == "-") {
    log.export_csv(room, std::cout);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "export: cannot write " << out_path << "\n";
    return 1;
  }
  log.export_csv(room, out);
  return 0;
}

int replay(const std::string& log_path, const std::string& room) {
  const sxgame::EventLog log(std::make_unique<sxgame::FileLogStorage>(log_path));
  std::vector<std::string> rooms = room.empty() ? log.rooms() : std::vector<std::string>{room};
  int status = 0;
  for (const auto& id : rooms) {
    const auto records = log.query(id);
    const auto result = sxgame::replay_room(records);
    if (!result) {
      std::cout << id << "\tnot started\n";
      continue;
    }
    try {
      std::cout << id << "\t" << sxgame::to_string(result->type) << "\t"
                << (result->finished() ? "finished" : "unfinished") << "\t" << result->snapshot() << "\n";
    } catch (const std::exception& e) {
      std::cout << id << "\terror\t" << e.what() << "\n";
      status = 1;
    }
  }
  return status;
}

ordered_json to_json(const sxgame::Evaluation& e) {
  ordered_json features{{"content_len", e.features.content_len},
                        {"sim_target", e.features.sim_target},
                        {"sim_prior", e.features.sim_prior},
                        {"novel_count", e.features.novel_count}};
  if (e.features.cos_target) features["cos_target"] = *e.features.cos_target;
  if (e.features.cos_text) features["cos_text"] = *e.features.cos_text;
  return ordered_json{{"score", e.score},
                      {"flags",
                       {{"too_short", e.flags.too_short},
                        {"too_similar", e.flags.too_similar},
                        {"irrelevant", e.flags.irrelevant}}},
                      {"features", features}};
}

// Input: one JSON object per line with se, text_id, sentence_index.
int score(const std::string& content_dir, const std::string& config_path, const std::string& in_path,
          const std::string& out_path) {
  const auto config = config_from(config_path);
  const auto content = sxgame::load_content(content_dir);
  const auto evaluator = sxgame::make_evaluator(config, content);

  std::ifstream in(in_path);
  if (!in) {
    std::cerr << "score: cannot read " << in_path << "\n";
    return 1;
  }
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) {
      std::cerr << "score: cannot write " << out_path << "\n";
      return 1;
    }
    out = &file;
  }
  std::string line;
  std::size_t n = 0;
  int status = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json row;
    try {
      const auto rec = nlohmann::json::parse(line);
      const auto text_id = rec.at("text_id").get<std::string>();
      const auto index = rec.at("sentence_index").get<std::size_t>();
      const auto* text = content.find_text(text_id);
      if (text == nullptr) throw std::invalid_argument("unknown text_id " + text_id);
      if (index >= text->sentences.size()) throw std::invalid_argument("sentence_index out of range");
      row = ordered_json{{"line", n}, {"text_id", text_id}, {"sentence_index", index}};
      row.update(to_json(evaluator->evaluate(rec.at("se").get<std::string>(), text->sentences[index],
                                             sxgame::prior_text(*text, index))));
    } catch (const std::exception& e) {
      row = ordered_json{{"line", n}, {"error", e.what()}};
      status = 1;
    }
    *out << row.dump() << "\n";
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-explanation game server"};
  app.require_subcommand(1);

  std::string content_dir = SXGAME_DEFAULT_CONTENT_DIR;
  std::string config_path;
  std::string log_path = "logs";
  std::string address = "0.0.0.0";
  std::uint16_t port = 7400;
  int ws_port = 7401;
  auto* serve_cmd = app.add_subcommand("serve", "Run the game server");
  serve_cmd->add_option("--port", port, "TCP port for newline-delimited frames");
  serve_cmd->add_option("--ws-port", ws_port, "WebSocket port for /play (-1 disables)");
  serve_cmd->add_option("--address", address, "Listen address");
  serve_cmd->add_option("--content-dir", content_dir, "Content bundle directory");
  serve_cmd->add_option("--config", config_path, "INI configuration file");
  serve_cmd->add_option("--log-path", log_path, "Event log directory");

  std::string room;
  std::string out_path;
  auto* export_cmd = app.add_subcommand("export", "Write one room's log records as CSV");
  export_cmd->add_option("--log-path", log_path, "Event log directory");
  export_cmd->add_option("--room", room, "Room id")->required();
  export_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* replay_cmd = app.add_subcommand("replay", "Rebuild game state from the log");
  replay_cmd->add_option("--log-path", log_path, "Event log directory");
  replay_cmd->add_option("--room", room, "Room id (default all rooms)");

  std::string in_path;
  auto* score_cmd = app.add_subcommand("score", "Batch-score self-explanations");
  score_cmd->add_option("--content-dir", content_dir, "Content bundle directory");
  score_cmd->add_option("--config", config_path, "INI configuration file");
  score_cmd->add_option("--in", in_path, "JSON-lines input")->required();
  score_cmd->add_option("--out", out_path, "JSON-lines output (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*serve_cmd) return serve(content_dir, config_path, log_path, address, port, ws_port);
    if (*export_cmd) return export_room(log_path, room, out_path);
    if (*replay_cmd) return replay(log_path, room);
    if (*score_cmd) return score(content_dir, config_path, in_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "sxserver: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
