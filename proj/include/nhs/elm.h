#pragma once

#include <cstdint>

#include "nhs/box.h"
#include "nhs/dataset.h"

namespace nhs {

/// Ridge used when none is given; keeps rank-deficient hidden matrices
/// (dead neurons, tiny merged datasets) solvable.
inline constexpr double kDefaultRidge = 1e-8;

/// Single-hidden-layer ReLU extreme learning machine
///
///   y = w_out · max(0, w_in · z + b_in)
///
/// The hidden layer is drawn once from a seeded generator and never trained;
/// only w_out is fitted.
class ElmNetwork {
 public:
  ElmNetwork(Matrix w_in, Vector b_in, Matrix w_out, std::uint64_t seed);

  int n_in() const { return static_cast<int>(w_in_.cols()); }
  int n_out() const { return static_cast<int>(w_out_.rows()); }
  int hidden_count() const { return static_cast<int>(w_in_.rows()); }
  std::uint64_t seed() const { return seed_; }

  const Matrix& w_in() const { return w_in_; }
  const Vector& b_in() const { return b_in_; }
  const Matrix& w_out() const { return w_out_; }

  ElmNetwork with_output_weights(Matrix w_out) const;

  /// Hidden activations, one row per row of `inputs`.
  Matrix hidden(const Matrix& inputs) const;
  Vector predict(const Vector& z) const;
  /// predict() applied to every row of `inputs`.
  Matrix predict_batch(const Matrix& inputs) const;

  bool operator==(const ElmNetwork& other) const;

 private:
  Matrix w_in_;
  Vector b_in_;
  Matrix w_out_;
  std::uint64_t seed_;
};

/// w_in and b_in i.i.d. uniform on [-1, 1] (w_in row-major, then b_in) from
/// Rng(seed); w_out is zero.
ElmNetwork init_elm(int n_in, int n_out, int hidden_count, std::uint64_t seed);

/// Solves w_out = argmin ‖H w_outᵀ - Y‖² + ridge ‖w_out‖² through a
/// column-pivoted QR of the stacked system [H; √ridge·I]. With ridge = 0 a
/// rank-deficient H raises NumericError.
ElmNetwork fit_output_weights(const ElmNetwork& net, const Dataset& data,
                              double ridge = kDefaultRidge);

Vector predict(const ElmNetwork& net, const Vector& z);

/// Mean over samples of the squared Euclidean prediction error.
double mse(const ElmNetwork& net, const Dataset& data);

}  // namespace nhs
