// Compares the OpenMP kernels against their serial reference
// implementations and verifies that the outputs agree.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <iostream>

#include "relaymon/codec.hpp"
#include "relaymon/match.hpp"
#include "relaymon/region.hpp"

using namespace relaymon;

namespace {

double now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

StageGame dilemma() {
  return StageGame({{"T", "B"}, {"L", "R"}}, {{3, 0, 4, 1}, {3, 4, 0, 1}});
}

void report(const char* name, double serial_s, double parallel_s, bool same) {
  printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name,
         serial_s, parallel_s, serial_s / parallel_s,
         same ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main() {
  printf("threads available: %d\n", omp_get_max_threads());
  StageGame game = dilemma();

  {
    MonitoringStructure m = MonitoringStructure::binary_symmetric(0.5, 3);
    double t0 = now();
    RegionResult serial = sweep_region_serial(game, m, 0.01, 0.01);
    double t1 = now();
    RegionResult parallel = sweep_region(game, m, 0.01, 0.01);
    double t2 = now();
    report("region sweep 99x99", t1 - t0, t2 - t1,
           serial.records_csv() == parallel.records_csv());
  }

  {
    MonitoringStructure m = MonitoringStructure::binary_symmetric(0.5, 3);
    ProductDistribution pstar({{0.9, 0.1}, {0.9, 0.1}});
    Codebook code = build_code(game, m, pstar, 16, 0.05, 7);
    double t0 = now();
    ErrorEstimate serial = estimate_error_probability_serial(
        code, DeviationSpec::none(), 1200, 11);
    double t1 = now();
    ErrorEstimate parallel =
        estimate_error_probability(code, DeviationSpec::none(), 1200, 11);
    double t2 = now();
    report("codec Monte Carlo n=16", t1 - t0, t2 - t1,
           serial.mismatch_trials == parallel.mismatch_trials &&
               serial.event_atypical == parallel.event_atypical &&
               serial.event_collision == parallel.event_collision);
  }

  {
    MonitoringStructure m = MonitoringStructure::binary_symmetric(0.5, 3);
    ProductDistribution pstar({{0.9, 0.1}, {0.9, 0.1}});
    SimConfig cfg;
    cfg.block_length = 100;
    cfg.blocks = 20;
    cfg.eps_code = 0.05;
    cfg.eps_test = 0.2;
    cfg.seed = 5;
    double t0 = now();
    auto serial = run_matches_serial(game, m, pstar, cfg, 40);
    double t1 = now();
    auto parallel = run_matches(game, m, pstar, cfg, 40);
    double t2 = now();
    bool same = serial.size() == parallel.size();
    for (size_t j = 0; same && j < serial.size(); ++j)
      same = serial[j].avg_utility == parallel[j].avg_utility &&
             serial[j].any_flag == parallel[j].any_flag;
    report("match ensemble 40x20x100", t1 - t0, t2 - t1, same);
  }
  return 0;
}
