#ifndef RELAYMON_TYPICALITY_HPP
#define RELAYMON_TYPICALITY_HPP

#include <span>
#include <vector>

namespace relaymon {

/// Symbol frequencies of a sequence over alphabet {0..alphabet_size-1}.
std::vector<double> empirical_type(std::span<const int> sequence,
                                   int alphabet_size);

/// L1 distance between the empirical type of `sequence` and `dist`.
double type_distance(std::span<const int> sequence,
                     std::span<const double> dist);

/// Strong typicality: L1 ball of radius eps around `dist`, and no symbol
/// with dist[x] == 0 may occur at all.
bool is_typical(std::span<const int> sequence, std::span<const double> dist,
                double eps);

/// Same rule applied to the pair alphabet. joint is row-major
/// [x * y_size + y]; sequences must have equal length.
bool is_jointly_typical(std::span<const int> xs, std::span<const int> ys,
                        std::span<const double> joint, int x_size, int y_size,
                        double eps);

}  // namespace relaymon

#endif
