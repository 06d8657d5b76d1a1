#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace nhs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box [lo, hi] in R^dim.
///
/// The public constructor rejects degenerate boxes (lo[k] >= hi[k] in any
/// dimension): partitions, cells and working zones always have volume.
/// Reachable-set bounds may legitimately collapse (a ReLU clamped to zero, a
/// constant map), so `Box::Closed` additionally admits lo[k] == hi[k].
class Box {
 public:
  Box(Vector lo, Vector hi);

  /// Accepts flat dimensions (lo == hi). Still rejects lo > hi and NaN.
  static Box Closed(Vector lo, Vector hi);
  static Box Point(const Vector& p);
  /// The box [lo, hi]^dim.
  static Box Cube(int dim, double lo, double hi);

  int dim() const { return static_cast<int>(lo_.size()); }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  double lo(int k) const { return lo_[k]; }
  double hi(int k) const { return hi_[k]; }
  double width(int k) const { return hi_[k] - lo_[k]; }
  Vector center() const { return 0.5 * (lo_ + hi_); }
  bool is_degenerate() const;

  bool operator==(const Box& other) const {
    return lo_ == other.lo_ && hi_ == other.hi_;
  }

 private:
  Box(Vector lo, Vector hi, bool allow_flat);

  Vector lo_;
  Vector hi_;
};

/// Componentwise intersection. Empty when any dimension comes out with zero
/// or negative width: boxes that only share a face do not intersect.
std::optional<Box> box_intersect(const Box& a, const Box& b);

/// Half-open membership: lo[k] <= x[k] < hi[k] for every k.
bool box_contains(const Box& b, const Vector& x);

/// Half-open membership inside a working zone. Where a face of `b` lies on
/// the upper face of `zone`, that face is closed, so the boxes of any tiling
/// of the zone claim every point of the zone exactly once.
bool box_contains(const Box& b, const Vector& x, const Box& zone);

/// Closed inclusion inner ⊆ outer.
bool box_subset(const Box& inner, const Box& outer);

/// Smallest box containing both.
Box box_hull(const Box& a, const Box& b);

/// Cartesian product a × b (dimensions concatenated).
Box box_product(const Box& a, const Box& b);

/// L∞ distance from x to the closed box; 0 inside.
double linf_distance(const Box& b, const Vector& x);

/// Box padded by `pad` on every side.
Box box_inflate(const Box& b, double pad);

/// Working zone Ω over the states plus, for non-autonomous systems, the
/// bounds on the external input.
struct WorkingZone {
  Box omega;
  std::optional<Box> input_bounds;

  WorkingZone(Box omega, std::optional<Box> input_bounds = std::nullopt);

  int n_x() const { return omega.dim(); }
  int n_u() const { return input_bounds ? input_bounds->dim() : 0; }
};

}  // namespace nhs
