#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nhs/box.h"

namespace nhs {

/// Input/output pairs (z, y) of a discrete-time system x(k+1) = f(x(k), u(k)),
/// with z = [x; u] of length n_x + n_u and y of length n_x. Row i of
/// `inputs()` is z of sample i, row i of `targets()` its y.
class Dataset {
 public:
  Dataset(int n_x, int n_u, Matrix inputs, Matrix targets);

  int n_x() const { return n_x_; }
  int n_u() const { return n_u_; }
  int n_in() const { return n_x_ + n_u_; }
  std::size_t size() const { return static_cast<std::size_t>(inputs_.rows()); }

  const Matrix& inputs() const { return inputs_; }
  const Matrix& targets() const { return targets_; }
  Vector z(std::size_t i) const { return inputs_.row(i).transpose(); }
  Vector y(std::size_t i) const { return targets_.row(i).transpose(); }
  Vector state(std::size_t i) const {
    return inputs_.row(i).head(n_x_).transpose();
  }

  /// Samples at `indices`, in that order. Throws UsageError if empty.
  Dataset subset(const std::vector<std::size_t>& indices) const;

 private:
  int n_x_;
  int n_u_;
  Matrix inputs_;
  Matrix targets_;
};

/// Reads a CSV with a header row and columns x..., u..., y.... Errors carry
/// the 1-based line and column of the offending cell.
Dataset load_dataset(const std::string& path, int n_x, int n_u);

/// Writes the CSV layout accepted by load_dataset (header x1..,u1..,y1..).
void write_dataset_csv(const std::string& path, const Dataset& data);

/// Builds (x_k, x_{k+1}) pairs from position sequences, one trajectory per
/// matrix (rows are time steps). Suits demonstration exports such as LASA
/// shapes; the resulting system is autonomous (n_u = 0).
Dataset dataset_from_trajectories(const std::vector<Matrix>& trajectories);

/// Throws DataError naming the first sample whose state lies outside omega
/// (closed) or whose input lies outside the input bounds.
void check_within_zone(const WorkingZone& zone, const Dataset& data);

/// Tight bounding box of every state and next state in the data, padded by
/// `margin` times its extent per dimension (at least 1e-6).
Box data_bounds(const Dataset& data, double margin);

}  // namespace nhs
