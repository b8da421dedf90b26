#include "relaymon/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace relaymon {

using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> parse_label_lists(const json& j,
                                                        const char* what) {
  if (!j.is_array() || j.empty())
    throw ValidationError(std::string(what) + ": expected a non-empty array");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : j) {
    std::vector<std::string> labels;
    for (const auto& l : row) labels.push_back(l.get<std::string>());
    out.push_back(std::move(labels));
  }
  return out;
}

}  // namespace

GameConfig parse_game_json(const std::string& text,
                           const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": " + e.what());
  }
  if (!j.contains("actions"))
    throw ValidationError(origin + ": missing field 'actions'");
  if (!j.contains("utilities"))
    throw ValidationError(origin + ": missing field 'utilities'");
  auto actions = parse_label_lists(j["actions"], "actions");
  std::vector<std::vector<double>> utilities;
  for (const auto& row : j["utilities"])
    utilities.push_back(row.get<std::vector<double>>());
  StageGame game(std::move(actions), std::move(utilities));

  if (!j.contains("public_alphabet_size"))
    throw ValidationError(origin + ": missing field 'public_alphabet_size'");
  int s0 = j["public_alphabet_size"].get<int>();
  if (!j.contains("monitoring"))
    throw ValidationError(origin + ": missing field 'monitoring'");
  const json& mon = j["monitoring"];
  std::string type = mon.value("type", "");

  if (type == "binary_symmetric") {
    if (game.player_count() != 2 || game.action_count(0) != 2 ||
        game.action_count(1) != 2)
      throw ValidationError(origin +
                            ": binary_symmetric monitoring needs a 2x2 game");
    double delta = mon.at("delta").get<double>();
    GameConfig cfg{std::move(game),
                   MonitoringStructure::binary_symmetric(delta, s0), delta};
    validate_pair(cfg.game, cfg.monitoring);
    return cfg;
  }
  if (type == "table") {
    auto signals = parse_label_lists(mon.at("signals"), "monitoring.signals");
    std::vector<std::vector<double>> rows;
    for (const auto& row : mon.at("joint"))
      rows.push_back(row.get<std::vector<double>>());
    GameConfig cfg{std::move(game),
                   MonitoringStructure(std::move(signals), std::move(rows), s0),
                   std::nullopt};
    validate_pair(cfg.game, cfg.monitoring);
    return cfg;
  }
  throw ValidationError(origin +
                        ": monitoring.type must be binary_symmetric or table");
}

GameConfig load_game_file(const std::string& path) {
  return parse_game_json(read_file(path), path);
}

ProductDistribution parse_pstar(const std::string& text) {
  std::vector<std::vector<double>> players;
  std::stringstream by_player(text);
  std::string part;
  while (std::getline(by_player, part, ';')) {
    std::vector<double> probs;
    std::stringstream by_prob(part);
    std::string num;
    while (std::getline(by_prob, num, ',')) {
      try {
        probs.push_back(std::stod(num));
      } catch (const std::exception&) {
        throw ValidationError("cannot parse probability '" + num + "'");
      }
    }
    players.push_back(std::move(probs));
  }
  return ProductDistribution(std::move(players));
}

namespace {

std::vector<std::pair<std::string, std::string>> split_kv(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos) {
      // continuation of a list value
      if (!kv.empty()) kv.back().second += "," + part;
      continue;
    }
    kv.emplace_back(part.substr(0, eq), part.substr(eq + 1));
  }
  return kv;
}

int parse_action(const StageGame& game, int player, const std::string& text) {
  try {
    size_t used = 0;
    int idx = std::stoi(text, &used);
    if (used == text.size() && idx >= 0 && idx < game.action_count(player))
      return idx;
  } catch (const std::exception&) {
  }
  return game.action_index(player, text);
}

}  // namespace

DeviationSpec parse_deviation(const std::string& text, const StageGame& game) {
  if (text.empty() || text == "none") return DeviationSpec::none();
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ValidationError("deviation: expected kind:key=value,...");
  std::string kind = text.substr(0, colon);
  auto kv = split_kv(text.substr(colon + 1));

  int player = -1;
  std::string action_text, probs_text;
  for (auto& [key, value] : kv) {
    if (key == "player") player = std::stoi(value) - 1;
    else if (key == "action") action_text = value;
    else if (key == "actions") action_text = value;
    else if (key == "probs") probs_text = value;
    else throw ValidationError("deviation: unknown key '" + key + "'");
  }
  if (player < 0 || player >= game.player_count())
    throw ValidationError("deviation: player out of range");

  auto parse_action_list = [&](const std::string& t) {
    std::vector<int> actions;
    std::stringstream ss(t);
    std::string a;
    while (std::getline(ss, a, ','))
      actions.push_back(parse_action(game, player, a));
    return actions;
  };

  if (kind == "constant")
    return DeviationSpec::constant(player,
                                   parse_action(game, player, action_text));
  if (kind == "iid") {
    std::vector<double> probs;
    std::stringstream ss(probs_text);
    std::string p;
    while (std::getline(ss, p, ',')) probs.push_back(std::stod(p));
    return DeviationSpec::iid(player, std::move(probs));
  }
  if (kind == "periodic")
    return DeviationSpec::periodic(player, parse_action_list(action_text));
  if (kind == "script")
    return DeviationSpec::scripted(player, parse_action_list(action_text));
  throw ValidationError("deviation: unknown kind '" + kind + "'");
}

SimRunConfig parse_sim_run(const std::string& text, const StageGame& game) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("sim config: ") + e.what());
  }
  SimConfig cfg;
  cfg.block_length = j.at("block_length").get<int>();
  cfg.blocks = j.at("blocks").get<int>();
  cfg.eps_code = j.value("eps_code", 0.05);
  cfg.eps_test = j.value("eps_test", cfg.eps_code);
  cfg.eps_eq = j.value("eps_eq", 0.1);
  cfg.seed = j.value("seed", uint64_t{1});
  cfg.flag_decode_failure = j.value("flag_decode_failure", false);
  if (j.contains("deviation") && !j["deviation"].is_null()) {
    const json& d = j["deviation"];
    int start = d.value("start_block", 3);
    if (d.value("type", "") == "shuffled_typical") {
      cfg.deviation = MatchDeviation::shuffled_typical(
          d.at("player").get<int>() - 1, start);
    } else {
      cfg.deviation = MatchDeviation::stages(
          parse_deviation(d.at("spec").get<std::string>(), game), start);
    }
  }
  std::vector<std::vector<double>> probs;
  for (const auto& row : j.at("pstar"))
    probs.push_back(row.get<std::vector<double>>());
  SimRunConfig run{cfg, ProductDistribution(std::move(probs)),
                   j.value("matches", 50)};
  return run;
}

SimRunConfig load_sim_run(const std::string& path, const StageGame& game) {
  return parse_sim_run(read_file(path), game);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
}

std::string manifest_json(
    const std::string& command,
    const std::vector<std::pair<std::string, std::string>>& fields,
    const std::vector<std::string>& outputs, double seconds) {
  json j;
  j["command"] = command;
  j["artifact_version"] = "1.0.0";
  for (const auto& [k, v] : fields) j["config"][k] = v;
  j["outputs"] = outputs;
  j["seconds"] = seconds;
  return j.dump(2) + "\n";
}

std::string schema_text() {
  return
      "region CSV (one row per grid point)\n"
      "  p<k>_<a>   probability of action a for player k\n"
      "  u<k>       expected utility of player k at that profile\n"
      "  rate_bits  required public rate in bits per stage\n"
      "  in_region  1 when rate_bits < log2(public alphabet), strictly\n"
      "  ir         1 when the utility weakly dominates the min-max levels\n"
      "hull CSV\n"
      "  x,y        polygon vertices, counterclockwise\n"
      "coding trace CSV (one row per trial)\n"
      "  trial, seed, deviation, suspect_truth, suspect_estimate,\n"
      "  error_class  ok | encoder_declared | capacity_overflow |\n"
      "               no_typical_candidate | bin_collision | false_candidate\n"
      "               | other decode failure tags\n"
      "match CSV (one row per block)\n"
      "  block, encoder_error, decode_p<k> (status id, -1 not attempted),\n"
      "  test_p<k>_on_p<i> (1 flagged, 0 passed, -1 not tested),\n"
      "  punishing_p<k> (target player, 0 = main plan), mean_u<k>\n";
}

}  // namespace relaymon
