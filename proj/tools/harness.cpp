// harness: scripted-bot scenarios and lull reports.
//
//   harness run --game miboard --players 4 --think 30 --seed 7 --out report.txt
//   harness compare miboard.txt showdown.txt

#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "sxgame/config.hpp"
#include "sxgame/content.hpp"
#include "sxgame/harness.hpp"

namespace {

int run(const std::string& game_name, std::size_t players, double think, double think_max, std::uint64_t seed,
        const std::string& policy_name, const std::vector<std::string>& departures, const std::string& content_dir,
        const std::string& config_path, const std::string& out_path, const std::string& log_out) {
  std::string upper = game_name;
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const auto game = sxgame::parse_game_type(upper);
  if (!game) {
    std::cerr << "harness: unknown game '" << game_name << "'\n";
    return 2;
  }
  const auto policy = sxgame::parse_ident_policy(policy_name);
  if (!policy) {
    std::cerr << "harness: unknown ident policy '" << policy_name << "'\n";
    return 2;
  }

  sxgame::Scenario sc;
  sc.game = *game;
  sc.seed = seed;
  sc.config = config_path.empty() ? sxgame::ServerConfig{} : sxgame::load_config(config_path);
  sc.content = std::make_shared<const sxgame::ContentBundle>(sxgame::load_content(content_dir));
  for (std::size_t i = 0; i < players; ++i) {
    sxgame::BotScript s;
    s.think = think_max > think ? sxgame::ThinkTime::uniform(think, think_max) : sxgame::ThinkTime::fixed(think);
    s.ident_policy = *policy;
    sc.scripts.push_back(s);
  }
  // BOT:TURN, e.g. 2:3 makes the second bot leave at turn or round 3.
  for (const auto& d : departures) {
    const auto colon = d.find(':');
    const std::size_t bot = std::stoul(d.substr(0, colon));
    if (colon == std::string::npos || bot == 0 || bot > players) {
      std::cerr << "harness: bad --depart '" << d << "'\n";
      return 2;
    }
    sc.scripts[bot - 1].depart_at = std::stoull(d.substr(colon + 1));
  }

  const auto result = sxgame::run_scenario(sc);
  if (out_path.empty() || out_path == "-") {
    sxgame::write_report(std::cout, result.report);
  } else {
    std::ofstream out(out_path);
    sxgame::write_report(out, result.report);
  }
  if (!log_out.empty()) {
    std::ofstream out(log_out);
    for (const auto& r : result.log) out << sxgame::to_json_line(r) << "\n";
  }
  std::cerr << "harness: " << sxgame::to_string(sc.game) << " room " << result.room_id << " finished, "
            << result.rounds_completed << " round(s), " << result.log.size() << " log record(s)\n";
  return 0;
}

sxgame::LullReport load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  return sxgame::read_report(in);
}

int compare(const std::string& a_path, const std::string& b_path) {
  const auto a = load(a_path);
  const auto b = load(b_path);
  const auto c = sxgame::compare_lulls(a, b);
  const auto s = [](double ms) { return ms / 1000.0; };
  std::cout << std::fixed << std::setprecision(3);
  std::cout << "a " << sxgame::to_string(a.game) << " max_s=" << s(static_cast<double>(a.max_ms()))
            << " mean_s=" << s(a.mean_ms()) << " total_s=" << s(static_cast<double>(a.total_ms())) << "\n";
  std::cout << "b " << sxgame::to_string(b.game) << " max_s=" << s(static_cast<double>(b.max_ms()))
            << " mean_s=" << s(b.mean_ms()) << " total_s=" << s(static_cast<double>(b.total_ms())) << "\n";
  std::cout << "diff(b-a) max_s=" << c.max_diff_s << " mean_s=" << c.mean_diff_s << " total_s=" << c.total_diff_s
            << "\n";
  std::cout << "showdown_max_lower " << (c.showdown_max_lower ? "true" : "false") << "\n";
  std::cout << "showdown_mean_lower " << (c.showdown_mean_lower ? "true" : "false") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scripted-bot harness"};
  app.require_subcommand(1);

  std::string game = "miboard";
  std::size_t players = 4;
  double think = 30;
  double think_max = 0;
  std::uint64_t seed = 1;
  std::string policy = "ALWAYS_MATCH";
  std::vector<std::string> departures;
  std::string content_dir = SXGAME_DEFAULT_CONTENT_DIR;
  std::string config_path;
  std::string out_path;
  std::string log_out;
  auto* run_cmd = app.add_subcommand("run", "Play one scenario and write a lull report");
  run_cmd->add_option("--game", game, "miboard or showdown");
  run_cmd->add_option("--players", players, "Number of bots");
  run_cmd->add_option("--think", think, "Think time in seconds (lower bound if --think-max is set)");
  run_cmd->add_option("--think-max", think_max, "Upper bound for uniform think times");
  run_cmd->add_option("--seed", seed, "Scenario seed");
  run_cmd->add_option("--policy", policy, "ALWAYS_MATCH, ALWAYS_MISS or RANDOM");
  run_cmd->add_option("--depart", departures, "BOT:TURN departure, repeatable");
  run_cmd->add_option("--content-dir", content_dir, "Content bundle directory");
  run_cmd->add_option("--config", config_path, "INI configuration file");
  run_cmd->add_option("--out", out_path, "Report file (default stdout)");
  run_cmd->add_option("--log-out", log_out, "Also write the room's event log here");

  std::string a_path;
  std::string b_path;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare two lull reports");
  cmp_cmd->add_option("a", a_path, "First report")->required();
  cmp_cmd->add_option("b", b_path, "Second report")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) {
      return run(game, players, think, think_max, seed, policy, departures, content_dir, config_path, out_path,
                 log_out);
    }
    if (*cmp_cmd) return compare(a_path, b_path);
  } catch (const std::exception& e) {
    std::cerr << "harness: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
