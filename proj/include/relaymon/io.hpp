#ifndef RELAYMON_IO_HPP
#define RELAYMON_IO_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relaymon/game.hpp"
#include "relaymon/match.hpp"

namespace relaymon {

/// Parsed game file: the stage game plus its monitoring structure.
struct GameConfig {
  StageGame game;
  MonitoringStructure monitoring;
  std::optional<double> delta;  // set when monitoring came parametric
};

/// Loads the JSON game description. Expected shape:
/// {
///   "actions":   [["T","B"],["L","R"]],
///   "utilities": [[3,0,4,1],[3,4,0,1]],          // row-major profiles
///   "monitoring": {"type":"binary_symmetric","delta":0.5}
///               | {"type":"table","signals":[...],"joint":[[...],...]},
///   "public_alphabet_size": 3
/// }
GameConfig load_game_file(const std::string& path);
GameConfig parse_game_json(const std::string& text, const std::string& origin);

/// "0.9,0.1;0.9,0.1" -> one simplex vector per player.
ProductDistribution parse_pstar(const std::string& text);

/// Deviation flags: "none" | "constant:player=1,action=B" (label or index)
/// | "iid:player=1,probs=0.5,0.5" | "periodic:player=1,actions=T,B"
/// | "script:player=1,actions=B,B,T".
DeviationSpec parse_deviation(const std::string& text, const StageGame& game);

/// Repeated-game run description: protocol parameters plus the target
/// mixed profile and the match budget.
struct SimRunConfig {
  SimConfig sim;
  ProductDistribution pstar;
  int matches = 50;
};

/// Simulation config JSON for the repeated-game runner.
SimRunConfig parse_sim_run(const std::string& text, const StageGame& game);
SimRunConfig load_sim_run(const std::string& path, const StageGame& game);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Run manifest: command, inputs, seed, outputs, wall time.
std::string manifest_json(const std::string& command,
                          const std::vector<std::pair<std::string, std::string>>& fields,
                          const std::vector<std::string>& outputs,
                          double seconds);

/// Fixed CSV column documentation for every exported format.
std::string schema_text();

}  // namespace relaymon

#endif
