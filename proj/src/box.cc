#include "nhs/box.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nhs/error.h"

namespace nhs {
namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw UsageError(msg.str());
  }
}

}  // namespace

Box::Box(Vector lo, Vector hi) : Box(std::move(lo), std::move(hi), false) {}

Box::Box(Vector lo, Vector hi, bool allow_flat)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() == 0) throw UsageError("Box: dimension must be positive");
  require_same_dim(static_cast<int>(lo_.size()), static_cast<int>(hi_.size()),
                   "Box");
  for (int k = 0; k < dim(); ++k) {
    const bool ok = allow_flat ? lo_[k] <= hi_[k] : lo_[k] < hi_[k];
    if (!ok || !std::isfinite(lo_[k]) || !std::isfinite(hi_[k])) {
      std::ostringstream msg;
      msg << "Box: invalid interval [" << lo_[k] << ", " << hi_[k]
          << "] in dimension " << k;
      throw UsageError(msg.str());
    }
  }
}

Box Box::Closed(Vector lo, Vector hi) {
  return Box(std::move(lo), std::move(hi), true);
}

Box Box::Point(const Vector& p) { return Box(p, p, true); }

Box Box::Cube(int dim, double lo, double hi) {
  return Box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

bool Box::is_degenerate() const { return (hi_.array() <= lo_.array()).any(); }

std::optional<Box> box_intersect(const Box& a, const Box& b) {
  require_same_dim(a.dim(), b.dim(), "box_intersect");
  Vector lo = a.lo().cwiseMax(b.lo());
  Vector hi = a.hi().cwiseMin(b.hi());
  if ((hi.array() <= lo.array()).any()) return std::nullopt;
  return Box(std::move(lo), std::move(hi));
}

bool box_contains(const Box& b, const Vector& x) {
  require_same_dim(b.dim(), static_cast<int>(x.size()), "box_contains");
  for (int k = 0; k < b.dim(); ++k) {
    if (!(b.lo(k) <= x[k] && x[k] < b.hi(k))) return false;
  }
  return true;
}

bool box_contains(const Box& b, const Vector& x, const Box& zone) {
  require_same_dim(b.dim(), static_cast<int>(x.size()), "box_contains");
  require_same_dim(b.dim(), zone.dim(), "box_contains");
  for (int k = 0; k < b.dim(); ++k) {
    if (!(b.lo(k) <= x[k])) return false;
    const bool closed_top = b.hi(k) == zone.hi(k);
    if (closed_top ? !(x[k] <= b.hi(k)) : !(x[k] < b.hi(k))) return false;
  }
  return true;
}

bool box_subset(const Box& inner, const Box& outer) {
  require_same_dim(inner.dim(), outer.dim(), "box_subset");
  return (inner.lo().array() >= outer.lo().array()).all() &&
         (inner.hi().array() <= outer.hi().array()).all();
}

Box box_hull(const Box& a, const Box& b) {
  require_same_dim(a.dim(), b.dim(), "box_hull");
  return Box::Closed(a.lo().cwiseMin(b.lo()), a.hi().cwiseMax(b.hi()));
}

Box box_product(const Box& a, const Box& b) {
  Vector lo(a.dim() + b.dim());
  Vector hi(a.dim() + b.dim());
  lo << a.lo(), b.lo();
  hi << a.hi(), b.hi();
  return Box::Closed(std::move(lo), std::move(hi));
}

double linf_distance(const Box& b, const Vector& x) {
  require_same_dim(b.dim(), static_cast<int>(x.size()), "linf_distance");
  double d = 0.0;
  for (int k = 0; k < b.dim(); ++k) {
    d = std::max({d, b.lo(k) - x[k], x[k] - b.hi(k)});
  }
  return d;
}

Box box_inflate(const Box& b, double pad) {
  return Box::Closed(b.lo().array() - pad, b.hi().array() + pad);
}

WorkingZone::WorkingZone(Box omega_in, std::optional<Box> input_bounds_in)
    : omega(std::move(omega_in)), input_bounds(std::move(input_bounds_in)) {
  if (omega.is_degenerate()) {
    throw UsageError("WorkingZone: omega must have positive width");
  }
}

}  // namespace nhs
