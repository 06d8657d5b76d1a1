#include "nhs/entropy_partition.h"

#include <cmath>
#include <numeric>

#include "nhs/error.h"

namespace nhs {

double shannon_entropy(std::span<const std::size_t> counts) {
  const double total = static_cast<double>(
      std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  if (total == 0.0) throw UsageError("shannon_entropy: all counts are zero");
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h;
}

BisectionChoice select_bisection(const std::vector<Box>& boxes,
                                 const std::vector<std::size_t>& active) {
  if (active.empty()) throw UsageError("select_bisection: no active partition");
  BisectionChoice best{active.front(), 0};
  double best_width = -1.0;
  for (std::size_t i : active) {
    const Box& b = boxes.at(i);
    for (int j = 0; j < b.dim(); ++j) {
      if (b.width(j) > best_width) {
        best_width = b.width(j);
        best = {i, j};
      }
    }
  }
  return best;
}

std::pair<Box, Box> bisect(const Box& b, int j) {
  if (j < 0 || j >= b.dim()) throw UsageError("bisect: invalid dimension");
  const double mid = b.lo(j) + 0.5 * b.width(j);
  Vector left_hi = b.hi();
  Vector right_lo = b.lo();
  left_hi[j] = mid;
  right_lo[j] = mid;
  return {Box(b.lo(), left_hi), Box(right_lo, b.hi())};
}

std::vector<std::size_t> PartitionSet::counts() const {
  std::vector<std::size_t> out;
  out.reserve(assignments.size());
  for (const auto& a : assignments) out.push_back(a.size());
  return out;
}

double PartitionSet::entropy() const {
  const auto c = counts();
  return shannon_entropy(c);
}

std::optional<std::size_t> PartitionSet::find(const Vector& x) const {
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (box_contains(boxes[i], x, omega)) return i;
  }
  return std::nullopt;
}

PartitionSet me_partition_points(const Box& omega, const Matrix& points,
                                 double epsilon) {
  if (!(epsilon >= 0.0)) throw UsageError("me_partition: epsilon must be >= 0");
  if (points.cols() != omega.dim()) {
    throw UsageError("me_partition: point dimension does not match omega");
  }
  if (omega.is_degenerate()) throw UsageError("me_partition: flat omega");

  PartitionSet out{omega, epsilon, {omega}, {{}}, {}};
  out.assignments[0].resize(points.rows());
  std::iota(out.assignments[0].begin(), out.assignments[0].end(), 0);
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    if (!box_subset(Box::Point(points.row(r).transpose()), omega)) {
      throw DataError("me_partition: point " + std::to_string(r + 1) +
                      " lies outside the working zone");
    }
  }
  if (points.rows() == 0) return out;

  std::vector<bool> active{true};
  std::vector<std::size_t> counts{static_cast<std::size_t>(points.rows())};
  double h = 0.0;

  for (;;) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (active[i]) candidates.push_back(i);
    }
    if (candidates.empty()) break;

    const auto [i, j] = select_bisection(out.boxes, candidates);
    const Box& box = out.boxes[i];
    if (counts[i] == 0 || box.width(j) < kMinSplitWidth) {
      active[i] = false;
      continue;
    }

    auto [left, right] = bisect(box, j);
    const double mid = left.hi(j);
    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t s : out.assignments[i]) {
      (points(s, j) < mid ? left_idx : right_idx).push_back(s);
    }

    std::vector<std::size_t> trial = counts;
    trial[i] = left_idx.size();
    trial.insert(trial.begin() + i + 1, right_idx.size());
    const double h_split = shannon_entropy(trial);
    const double delta = h_split - h;
    const bool commit = delta >= epsilon;
    out.history.push_back({i, j, delta, commit});

    if (!commit) {
      active[i] = false;
      continue;
    }
    out.boxes[i] = std::move(left);
    out.boxes.insert(out.boxes.begin() + i + 1, std::move(right));
    out.assignments[i] = std::move(left_idx);
    out.assignments.insert(out.assignments.begin() + i + 1, std::move(right_idx));
    active.insert(active.begin() + i + 1, true);
    counts = std::move(trial);
    h = h_split;
  }
  return out;
}

PartitionSet me_partition(const WorkingZone& zone, const Dataset& data,
                          double epsilon) {
  if (zone.n_x() != data.n_x()) {
    throw UsageError("me_partition: working zone and dataset differ in n_x");
  }
  return me_partition_points(zone.omega, data.inputs().leftCols(data.n_x()),
                             epsilon);
}

}  // namespace nhs
