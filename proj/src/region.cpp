#include "relaymon/region.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "relaymon/info.hpp"

namespace relaymon {

std::vector<std::vector<double>> simplex_grid(int alphabet, double step,
                                              double floor) {
  if (step <= 0.0 || step > 0.5)
    throw ValidationError("grid step must lie in (0, 0.5]");
  if (floor < 0.0) throw ValidationError("support floor must be >= 0");
  const long units = std::lround(1.0 / step);
  if (std::abs(units * step - 1.0) > 1e-9)
    throw ValidationError("grid step must divide 1");
  const long floor_units = std::lround(floor / step);
  if (std::abs(floor_units * step - floor) > 1e-9)
    throw ValidationError("support floor must be 0 or a multiple of the step");
  const long rest = units - floor_units * alphabet;
  if (rest < 0) return {};

  std::vector<std::vector<double>> points;
  std::vector<long> parts(alphabet, 0);
  // compositions of `rest` into `alphabet` parts, lexicographic
  auto emit = [&]() {
    std::vector<double> p(alphabet);
    for (int a = 0; a < alphabet; ++a)
      p[a] = (floor_units + parts[a]) * step;
    points.push_back(std::move(p));
  };
  std::function<void(int, long)> rec = [&](int a, long left) {
    if (a == alphabet - 1) {
      parts[a] = left;
      emit();
      return;
    }
    for (long j = 0; j <= left; ++j) {
      parts[a] = j;
      rec(a + 1, left - j);
    }
  };
  rec(0, rest);
  return points;
}

namespace {

RegionResult sweep_impl(const StageGame& game, const MonitoringStructure& m,
                        double step, double floor, int jobs, bool parallel) {
  validate_pair(game, m);
  const int K = game.player_count();

  RegionResult res;
  res.step = step;
  res.floor = floor;

  MinmaxLevels levels = minmax_levels(game);
  res.levels = levels.values;

  std::vector<std::vector<std::vector<double>>> grids(K);
  std::vector<size_t> sizes(K);
  size_t total = 1;
  for (int k = 0; k < K; ++k) {
    grids[k] = simplex_grid(game.action_count(k), step, floor);
    sizes[k] = grids[k].size();
    total *= sizes[k];
  }
  res.records.resize(total);

  auto evaluate = [&](size_t g) {
    size_t rest = g;
    std::vector<std::vector<double>> point(K);
    for (int k = K - 1; k >= 0; --k) {
      point[k] = grids[k][rest % sizes[k]];
      rest /= sizes[k];
    }
    ProductDistribution pstar(point);
    RegionRecord rec;
    rec.pstar = std::move(point);
    ConstraintReport rep = evaluate_constraint(game, m, pstar);
    rec.rate_bits = rep.required_rate_bits;
    rec.in_region = rep.satisfied;
    rec.utility = expected_utility(game, pstar);
    rec.ir = is_individually_rational(rec.utility, res.levels);
    res.records[g] = std::move(rec);
  };

  if (parallel) {
    const int64_t count = static_cast<int64_t>(total);
#pragma omp parallel for schedule(dynamic, 64) num_threads( \
    jobs > 0 ? jobs : omp_get_max_threads())
    for (int64_t g = 0; g < count; ++g) evaluate(static_cast<size_t>(g));
  } else {
    for (size_t g = 0; g < total; ++g) evaluate(g);
  }

  if (K == 2) {
    res.hulls_valid = true;
    std::vector<Point> admissible, feasible, pure;
    for (const RegionRecord& r : res.records) {
      if (!r.ir) continue;
      Point p{r.utility[0], r.utility[1]};
      feasible.push_back(p);
      if (r.in_region) admissible.push_back(p);
    }
    res.region_hull = convex_hull(std::move(admissible));
    res.feasible_hull = convex_hull(std::move(feasible));

    std::vector<int> profile(2);
    for (size_t flat = 0; flat < game.profile_count(); ++flat) {
      game.profile_unpack(flat, profile);
      pure.push_back(
          {game.utility_flat(0, flat), game.utility_flat(1, flat)});
    }
    res.folk_hull = convex_hull_clip(pure, res.levels[0], res.levels[1]);

    double fa = polygon_area(res.feasible_hull);
    res.area_ratio = fa > 0.0 ? polygon_area(res.region_hull) / fa : 0.0;
  }
  return res;
}

}  // namespace

RegionResult sweep_region(const StageGame& game, const MonitoringStructure& m,
                          double step, double floor, int jobs) {
  return sweep_impl(game, m, step, floor, jobs, true);
}

RegionResult sweep_region_serial(const StageGame& game,
                                 const MonitoringStructure& m, double step,
                                 double floor) {
  return sweep_impl(game, m, step, floor, 1, false);
}

std::string RegionResult::records_csv() const {
  std::ostringstream os;
  if (records.empty()) return "";
  const auto& first = records[0];
  for (size_t k = 0; k < first.pstar.size(); ++k)
    for (size_t a = 0; a < first.pstar[k].size(); ++a)
      os << (k + a ? "," : "") << "p" << k + 1 << "_" << a;
  for (size_t k = 0; k < first.utility.size(); ++k) os << ",u" << k + 1;
  os << ",rate_bits,in_region,ir\n";

  char buf[64];
  for (const RegionRecord& r : records) {
    bool lead = true;
    for (const auto& pk : r.pstar)
      for (double p : pk) {
        snprintf(buf, sizeof buf, "%.17g", p);
        os << (lead ? "" : ",") << buf;
        lead = false;
      }
    for (double u : r.utility) {
      snprintf(buf, sizeof buf, "%.17g", u);
      os << "," << buf;
    }
    snprintf(buf, sizeof buf, "%.17g", r.rate_bits);
    os << "," << buf << "," << (r.in_region ? 1 : 0) << "," << (r.ir ? 1 : 0)
       << "\n";
  }
  return os.str();
}

std::string hull_csv(const std::vector<Point>& polygon) {
  std::ostringstream os;
  os << "x,y\n";
  char buf[64];
  for (const Point& p : polygon) {
    snprintf(buf, sizeof buf, "%.17g", p.x);
    os << buf << ",";
    snprintf(buf, sizeof buf, "%.17g", p.y);
    os << buf << "\n";
  }
  return os.str();
}

}  // namespace relaymon
