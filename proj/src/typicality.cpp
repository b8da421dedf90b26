#include "relaymon/typicality.hpp"

#include <cmath>
#include <stdexcept>

namespace relaymon {

std::vector<double> empirical_type(std::span<const int> sequence,
                                   int alphabet_size) {
  if (sequence.empty()) throw std::invalid_argument("empirical_type: empty");
  std::vector<double> freq(alphabet_size, 0.0);
  for (int x : sequence) {
    if (x < 0 || x >= alphabet_size)
      throw std::out_of_range("empirical_type: symbol out of alphabet");
    freq[x] += 1.0;
  }
  double inv = 1.0 / static_cast<double>(sequence.size());
  for (double& f : freq) f *= inv;
  return freq;
}

double type_distance(std::span<const int> sequence,
                     std::span<const double> dist) {
  std::vector<int> counts(dist.size(), 0);
  for (int x : sequence) counts[x]++;
  double n = static_cast<double>(sequence.size());
  double d = 0.0;
  for (size_t x = 0; x < dist.size(); ++x)
    d += std::abs(counts[x] / n - dist[x]);
  return d;
}

bool is_typical(std::span<const int> sequence, std::span<const double> dist,
                double eps) {
  if (sequence.empty()) return false;
  std::vector<int> counts(dist.size(), 0);
  for (int x : sequence) {
    if (x < 0 || static_cast<size_t>(x) >= dist.size())
      throw std::out_of_range("is_typical: symbol out of alphabet");
    counts[x]++;
  }
  double n = static_cast<double>(sequence.size());
  double d = 0.0;
  for (size_t x = 0; x < dist.size(); ++x) {
    if (dist[x] == 0.0 && counts[x] > 0) return false;
    d += std::abs(counts[x] / n - dist[x]);
  }
  return d <= eps;
}

bool is_jointly_typical(std::span<const int> xs, std::span<const int> ys,
                        std::span<const double> joint, int x_size, int y_size,
                        double eps) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("is_jointly_typical: length mismatch");
  std::vector<int> pair(xs.size());
  for (size_t t = 0; t < xs.size(); ++t) pair[t] = xs[t] * y_size + ys[t];
  (void)x_size;
  return is_typical(pair, joint, eps);
}

}  // namespace relaymon
