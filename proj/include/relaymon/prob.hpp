#ifndef RELAYMON_PROB_HPP
#define RELAYMON_PROB_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaymon {

inline constexpr double kProbTolerance = 1e-12;

// log2 with the 0*log(0) = 0 convention baked into the callers.
inline double log2_safe(double x) { return std::log2(x); }

inline double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

/// Entropy in bits of a distribution given as a flat probability vector.
double entropy(std::span<const double> dist);
inline double entropy(const std::vector<double>& dist) {
  return entropy(std::span<const double>(dist));
}

bool is_simplex(std::span<const double> v, double tol = kProbTolerance);

/// Probability table over a finite product of alphabets.
/// Axis k has axis_sizes[k] symbols; cells are stored row-major with the
/// last axis fastest. Immutable after construction.
class JointDistribution {
 public:
  JointDistribution(std::vector<int> axis_sizes, std::vector<double> cells);

  static JointDistribution uniform(std::vector<int> axis_sizes);

  int axis_count() const { return static_cast<int>(sizes_.size()); }
  int axis_size(int axis) const { return sizes_.at(axis); }
  const std::vector<int>& axis_sizes() const { return sizes_; }
  const std::vector<double>& cells() const { return cells_; }

  double at(std::span<const int> idx) const { return cells_[flatten(idx)]; }
  size_t flatten(std::span<const int> idx) const;
  void unflatten(size_t flat, std::span<int> idx) const;

  /// Marginal over the given axes (kept in the given order).
  JointDistribution marginal(std::span<const int> axes) const;

  double total() const;

 private:
  std::vector<int> sizes_;
  std::vector<double> cells_;
  std::vector<size_t> strides_;
};

/// H(axes) in bits.
double entropy(const JointDistribution& joint, std::span<const int> axes);
double entropy(const JointDistribution& joint);

/// H(target | given) = H(target, given) - H(given). Axes must be disjoint.
/// An empty target gives 0.
double conditional_entropy(const JointDistribution& joint,
                           std::span<const int> target_axes,
                           std::span<const int> given_axes);

/// I(X; Y) in bits, computed as a relative entropy so it is
/// nonnegative up to rounding (clamped at 0). Axes must be disjoint.
double mutual_information(const JointDistribution& joint,
                          std::span<const int> axes_x,
                          std::span<const int> axes_y);

}  // namespace relaymon

#endif
