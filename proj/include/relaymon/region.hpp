#ifndef RELAYMON_REGION_HPP
#define RELAYMON_REGION_HPP

#include <string>
#include <vector>

#include "relaymon/game.hpp"
#include "relaymon/geometry.hpp"
#include "relaymon/minmax.hpp"

namespace relaymon {

struct RegionRecord {
  std::vector<std::vector<double>> pstar;  // per-player mixed action
  std::vector<double> utility;
  double rate_bits = 0.0;
  bool in_region = false;  // rate < capacity, strict
  bool ir = false;
};

/// Sweep of the per-player simplex grid. For two players the payoff
/// geometry is summarized by three polygons:
///   region_hull   - hull of the admissible (in-region AND individually
///                   rational) payoff points,
///   feasible_hull - same construction without the rate constraint,
///   folk_hull     - hull of the pure payoffs clipped by the min-max
///                   halfplanes (the grid-free reference).
/// area_ratio = region_hull / feasible_hull.
struct RegionResult {
  double step = 0.0;
  double floor = 0.0;
  std::vector<double> levels;  // min-max per player
  std::vector<RegionRecord> records;
  std::vector<Point> region_hull;
  std::vector<Point> feasible_hull;
  std::vector<Point> folk_hull;
  double area_ratio = 0.0;
  bool hulls_valid = false;  // only for K == 2

  std::string records_csv() const;
};

/// Per-player simplex grid: coordinates floor + j*step summing to one.
/// floor must be 0 or a multiple of step.
std::vector<std::vector<double>> simplex_grid(int alphabet, double step,
                                              double floor);

RegionResult sweep_region(const StageGame& game, const MonitoringStructure& m,
                          double step, double floor, int jobs = 0);

/// Serial reference (identical output).
RegionResult sweep_region_serial(const StageGame& game,
                                 const MonitoringStructure& m, double step,
                                 double floor);

std::string hull_csv(const std::vector<Point>& polygon);

}  // namespace relaymon

#endif
