#pragma once

#include <optional>
#include <vector>

#include "nhs/box.h"
#include "nhs/elm.h"
#include "nhs/hybrid_model.h"

namespace nhs {

/// Absolute padding added to every region piece's output bounds so that
/// floating-point rounding in concrete evaluation cannot escape them.
inline constexpr double kReachSlack = 1e-9;

/// Tightest box around {W x + b : x ∈ input}.
Box affine_image_box(const Matrix& weights, const Vector& bias, const Box& input);

/// Componentwise [max(0, lo), max(0, hi)].
Box relu_image_box(const Box& b);

/// Interval bound propagation through the network: affine, ReLU, affine.
/// Sound for every z in `input`; exact when `input` is a point.
Box elm_output_box(const ElmNetwork& net, const Box& input);

struct ReachPiece {
  int region_id;
  Box input;   // (cell ∩ region box) × input bounds
  Box output;  // slack included
};

struct ReachResult {
  Box output;
  std::vector<ReachPiece> pieces;
};

/// Over-approximates the one-step image of `cell` under the hybrid model:
/// one piece per region box that meets the cell, output the hull of all
/// pieces. `input_bounds` defaults to the model's input bounds.
ReachResult cell_successor_box(const HybridModel& model, const Box& cell,
                               const std::optional<Box>& input_bounds = std::nullopt);

struct ReachSequence {
  /// X_0 = initial, X_{k+1} ⊇ image of (X_k ∩ Ω).
  std::vector<Box> sets;
  /// Set when some X_k extends beyond Ω. Iteration stops early once a set
  /// no longer meets Ω at all.
  bool exited = false;
};

/// Multi-step reachable sets by iterating cell_successor_box on the previous
/// set clipped to Ω.
ReachSequence reach_steps(const HybridModel& model, const Box& initial,
                          int steps,
                          const std::optional<Box>& input_bounds = std::nullopt);

}  // namespace nhs
