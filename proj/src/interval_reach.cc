#include "nhs/interval_reach.h"

#include "nhs/error.h"

namespace nhs {

Box affine_image_box(const Matrix& weights, const Vector& bias, const Box& input) {
  if (weights.cols() != input.dim() || weights.rows() != bias.size()) {
    throw UsageError("affine_image_box: dimension mismatch");
  }
  const Matrix pos = weights.cwiseMax(0.0);
  const Matrix neg = weights.cwiseMin(0.0);
  Vector lo = pos * input.lo() + neg * input.hi() + bias;
  Vector hi = pos * input.hi() + neg * input.lo() + bias;
  return Box::Closed(std::move(lo), std::move(hi));
}

Box relu_image_box(const Box& b) {
  return Box::Closed(b.lo().cwiseMax(0.0), b.hi().cwiseMax(0.0));
}

Box elm_output_box(const ElmNetwork& net, const Box& input) {
  if (input.dim() != net.n_in()) {
    throw UsageError("elm_output_box: input box dimension mismatch");
  }
  const Box hidden = relu_image_box(affine_image_box(net.w_in(), net.b_in(), input));
  return affine_image_box(net.w_out(), Vector::Zero(net.n_out()), hidden);
}

ReachResult cell_successor_box(const HybridModel& model, const Box& cell,
                               const std::optional<Box>& input_bounds) {
  if (cell.dim() != model.n_x() || !box_subset(cell, model.zone().omega)) {
    throw UsageError("cell_successor_box: cell must lie inside the working zone");
  }
  const std::optional<Box>& inputs =
      input_bounds ? input_bounds : model.zone().input_bounds;
  if (model.n_u() > 0 && (!inputs || inputs->dim() != model.n_u())) {
    throw UsageError("cell_successor_box: input bounds required for n_u > 0");
  }

  std::vector<ReachPiece> pieces;
  std::optional<Box> hull;
  for (const Region& region : model.regions()) {
    const ElmNetwork& net = model.network(region.id);
    for (const Box& b : region.boxes) {
      auto overlap = box_intersect(cell, b);
      if (!overlap) continue;
      Box z = model.n_u() > 0 ? box_product(*overlap, *inputs) : *overlap;
      Box out = box_inflate(elm_output_box(net, z), kReachSlack);
      hull = hull ? box_hull(*hull, out) : out;
      pieces.push_back({region.id, std::move(z), std::move(out)});
    }
  }
  if (!hull) throw UsageError("cell_successor_box: cell meets no region");
  return {std::move(*hull), std::move(pieces)};
}

ReachSequence reach_steps(const HybridModel& model, const Box& initial,
                          int steps, const std::optional<Box>& input_bounds) {
  ReachSequence seq;
  seq.sets.push_back(initial);
  for (int k = 0; k < steps; ++k) {
    const Box& current = seq.sets.back();
    if (!box_subset(current, model.zone().omega)) seq.exited = true;
    // Flat sets meet nothing under the positive-width rule; pad them first.
    const Box padded =
        current.is_degenerate() ? box_inflate(current, kReachSlack) : current;
    const auto inside = box_intersect(padded, model.zone().omega);
    if (!inside) break;
    seq.sets.push_back(cell_successor_box(model, *inside, input_bounds).output);
  }
  if (!box_subset(seq.sets.back(), model.zone().omega)) seq.exited = true;
  return seq;
}

}  // namespace nhs
