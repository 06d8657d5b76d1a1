#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nhs/box.h"
#include "nhs/dataset.h"

namespace nhs {

/// ε used for both partitioning and cell construction unless overridden.
inline constexpr double kDefaultEpsilon = 4e-2;

/// Boxes narrower than this (in every side) are never split again.
inline constexpr double kMinSplitWidth = 1e-9;

/// H = -Σ p_i ln p_i with p_i = counts[i] / Σ counts, natural log, 0 ln 0 = 0.
/// Throws UsageError when every count is zero.
double shannon_entropy(std::span<const std::size_t> counts);

struct BisectionChoice {
  std::size_t partition;
  int dim;
  bool operator==(const BisectionChoice&) const = default;
};

/// Longest side over the active boxes; ties go to the lowest box index, then
/// the lowest dimension. `active` must be non-empty and sorted ascending.
BisectionChoice select_bisection(const std::vector<Box>& boxes,
                                 const std::vector<std::size_t>& active);

/// Splits at the midpoint of dimension j. The left child covers [lo, mid),
/// the right one [mid, hi); both share the exact midpoint value.
std::pair<Box, Box> bisect(const Box& b, int j);

struct BisectionRecord {
  std::size_t partition;
  int dim;
  double delta_h;
  bool committed;
};

/// Result of maximum-entropy partitioning: boxes tiling omega plus, per box,
/// the indices of the points that fall into it.
struct PartitionSet {
  Box omega;
  double epsilon = 0.0;
  std::vector<Box> boxes;
  std::vector<std::vector<std::size_t>> assignments;
  /// Every tentative bisection, in evaluation order.
  std::vector<BisectionRecord> history;

  std::size_t size() const { return boxes.size(); }
  std::vector<std::size_t> counts() const;
  double entropy() const;
  /// Box holding x under the half-open rule (omega's upper face closed).
  std::optional<std::size_t> find(const Vector& x) const;
};

/// Maximum-entropy bisection of omega driven by the density of `points`
/// (one point per row, every point inside omega).
///
/// Repeatedly picks the longest side among the active boxes and tentatively
/// bisects it. The split is kept when the global entropy gain is at least
/// epsilon, and both children stay active; otherwise the box is frozen for
/// good. Boxes with no points are frozen without trying, since splitting
/// them cannot change the entropy.
PartitionSet me_partition_points(const Box& omega, const Matrix& points,
                                 double epsilon);

/// Partitions the state space of `data` (the first n_x columns of z).
PartitionSet me_partition(const WorkingZone& zone, const Dataset& data,
                          double epsilon);

}  // namespace nhs
