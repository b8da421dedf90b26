#include "relaymon/prob.hpp"

#include <algorithm>
#include <numeric>

namespace relaymon {

double entropy(std::span<const double> dist) {
  double h = 0.0;
  for (double p : dist) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

bool is_simplex(std::span<const double> v, double tol) {
  if (v.empty()) return false;
  double sum = 0.0;
  for (double p : v) {
    if (!(p >= 0.0) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

JointDistribution::JointDistribution(std::vector<int> axis_sizes,
                                     std::vector<double> cells)
    : sizes_(std::move(axis_sizes)), cells_(std::move(cells)) {
  if (sizes_.empty()) throw std::invalid_argument("joint: no axes");
  size_t expect = 1;
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("joint: empty axis");
    expect *= static_cast<size_t>(s);
  }
  if (cells_.size() != expect)
    throw std::invalid_argument("joint: cell count mismatch");
  for (double c : cells_) {
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::invalid_argument("joint: negative or non-finite cell");
  }
  double sum = std::accumulate(cells_.begin(), cells_.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("joint: mass " + std::to_string(sum) +
                                " not 1");
  strides_.assign(sizes_.size(), 1);
  for (int k = static_cast<int>(sizes_.size()) - 2; k >= 0; --k)
    strides_[k] = strides_[k + 1] * static_cast<size_t>(sizes_[k + 1]);
}

JointDistribution JointDistribution::uniform(std::vector<int> axis_sizes) {
  size_t total = 1;
  for (int s : axis_sizes) total *= static_cast<size_t>(s);
  return JointDistribution(std::move(axis_sizes),
                           std::vector<double>(total, 1.0 / total));
}

size_t JointDistribution::flatten(std::span<const int> idx) const {
  size_t flat = 0;
  for (size_t k = 0; k < sizes_.size(); ++k)
    flat += strides_[k] * static_cast<size_t>(idx[k]);
  return flat;
}

void JointDistribution::unflatten(size_t flat, std::span<int> idx) const {
  for (size_t k = 0; k < sizes_.size(); ++k) {
    idx[k] = static_cast<int>(flat / strides_[k]);
    flat %= strides_[k];
  }
}

JointDistribution JointDistribution::marginal(std::span<const int> axes) const {
  std::vector<int> msizes;
  msizes.reserve(axes.size());
  for (int a : axes) msizes.push_back(axis_size(a));
  size_t mtotal = 1;
  for (int s : msizes) mtotal *= static_cast<size_t>(s);
  std::vector<double> mcells(mtotal, 0.0);

  std::vector<int> idx(sizes_.size());
  for (size_t flat = 0; flat < cells_.size(); ++flat) {
    unflatten(flat, idx);
    size_t mflat = 0;
    for (int a : axes) mflat = mflat * static_cast<size_t>(sizes_[a]) +
                               static_cast<size_t>(idx[a]);
    mcells[mflat] += cells_[flat];
  }
  return JointDistribution(std::move(msizes), std::move(mcells));
}

double JointDistribution::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), 0.0);
}

double entropy(const JointDistribution& joint) {
  return entropy(std::span<const double>(joint.cells()));
}

double entropy(const JointDistribution& joint, std::span<const int> axes) {
  if (axes.empty()) return 0.0;
  return entropy(joint.marginal(axes));
}

namespace {
void require_disjoint(std::span<const int> a, std::span<const int> b) {
  for (int x : a)
    for (int y : b)
      if (x == y) throw std::invalid_argument("axes overlap");
}
}  // namespace

double conditional_entropy(const JointDistribution& joint,
                           std::span<const int> target_axes,
                           std::span<const int> given_axes) {
  require_disjoint(target_axes, given_axes);
  if (target_axes.empty()) return 0.0;
  std::vector<int> both(target_axes.begin(), target_axes.end());
  both.insert(both.end(), given_axes.begin(), given_axes.end());
  return entropy(joint, both) - entropy(joint, given_axes);
}

double mutual_information(const JointDistribution& joint,
                          std::span<const int> axes_x,
                          std::span<const int> axes_y) {
  require_disjoint(axes_x, axes_y);
  if (axes_x.empty() || axes_y.empty()) return 0.0;
  std::vector<int> both(axes_x.begin(), axes_x.end());
  both.insert(both.end(), axes_y.begin(), axes_y.end());
  JointDistribution pxy = joint.marginal(both);
  JointDistribution px = joint.marginal(axes_x);
  JointDistribution py = joint.marginal(axes_y);

  size_t nx = px.cells().size();
  size_t ny = py.cells().size();
  double info = 0.0;
  for (size_t ix = 0; ix < nx; ++ix) {
    for (size_t iy = 0; iy < ny; ++iy) {
      double p = pxy.cells()[ix * ny + iy];
      if (p <= 0.0) continue;
      info += p * std::log2(p / (px.cells()[ix] * py.cells()[iy]));
    }
  }
  return std::max(0.0, info);
}

}  // namespace relaymon
