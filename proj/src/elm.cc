#include "nhs/elm.h"

#include <Eigen/QR>

#include "nhs/error.h"
#include "nhs/random.h"

namespace nhs {

ElmNetwork::ElmNetwork(Matrix w_in, Vector b_in, Matrix w_out,
                       std::uint64_t seed)
    : w_in_(std::move(w_in)), b_in_(std::move(b_in)), w_out_(std::move(w_out)),
      seed_(seed) {
  if (w_in_.rows() == 0 || w_in_.cols() == 0 || w_out_.rows() == 0) {
    throw UsageError("ElmNetwork: dimensions must be positive");
  }
  if (b_in_.size() != w_in_.rows() || w_out_.cols() != w_in_.rows()) {
    throw UsageError("ElmNetwork: inconsistent layer dimensions");
  }
}

ElmNetwork ElmNetwork::with_output_weights(Matrix w_out) const {
  return ElmNetwork(w_in_, b_in_, std::move(w_out), seed_);
}

Matrix ElmNetwork::hidden(const Matrix& inputs) const {
  if (inputs.cols() != n_in()) {
    throw UsageError("ElmNetwork: input dimension mismatch");
  }
  Matrix h = inputs * w_in_.transpose();
  h.rowwise() += b_in_.transpose();
  return h.cwiseMax(0.0);
}

Vector ElmNetwork::predict(const Vector& z) const {
  if (z.size() != n_in()) throw UsageError("predict: input dimension mismatch");
  const Vector h = (w_in_ * z + b_in_).cwiseMax(0.0);
  return w_out_ * h;
}

Matrix ElmNetwork::predict_batch(const Matrix& inputs) const {
  return hidden(inputs) * w_out_.transpose();
}

bool ElmNetwork::operator==(const ElmNetwork& other) const {
  return seed_ == other.seed_ && w_in_ == other.w_in_ &&
         b_in_ == other.b_in_ && w_out_ == other.w_out_;
}

ElmNetwork init_elm(int n_in, int n_out, int hidden_count, std::uint64_t seed) {
  if (n_in <= 0 || n_out <= 0 || hidden_count <= 0) {
    throw UsageError("init_elm: dimensions must be positive");
  }
  Rng rng(seed);
  Matrix w_in(hidden_count, n_in);
  for (int r = 0; r < hidden_count; ++r) {
    for (int c = 0; c < n_in; ++c) w_in(r, c) = rng.uniform(-1.0, 1.0);
  }
  Vector b_in(hidden_count);
  for (int r = 0; r < hidden_count; ++r) b_in[r] = rng.uniform(-1.0, 1.0);
  return ElmNetwork(std::move(w_in), std::move(b_in),
                    Matrix::Zero(n_out, hidden_count), seed);
}

ElmNetwork fit_output_weights(const ElmNetwork& net, const Dataset& data,
                              double ridge) {
  if (!(ridge >= 0.0)) throw UsageError("fit_output_weights: ridge must be >= 0");
  if (data.n_in() != net.n_in() || data.n_x() != net.n_out()) {
    throw UsageError("fit_output_weights: dataset does not match the network");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index h = net.hidden_count();

  Matrix a(n + (ridge > 0.0 ? h : 0), h);
  Matrix b = Matrix::Zero(a.rows(), net.n_out());
  a.topRows(n) = net.hidden(data.inputs());
  b.topRows(n) = data.targets();
  if (ridge > 0.0) {
    a.bottomRows(h) = std::sqrt(ridge) * Matrix::Identity(h, h);
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < h) {
    throw NumericError("fit_output_weights: hidden matrix is rank deficient (rank " +
                       std::to_string(qr.rank()) + " < " + std::to_string(h) +
                       "); retry with ridge > 0");
  }
  Matrix w_out = qr.solve(b).transpose();
  if (!w_out.allFinite()) throw NumericError("fit_output_weights: non-finite solution");
  return net.with_output_weights(std::move(w_out));
}

Vector predict(const ElmNetwork& net, const Vector& z) { return net.predict(z); }

double mse(const ElmNetwork& net, const Dataset& data) {
  if (data.n_in() != net.n_in() || data.n_x() != net.n_out()) {
    throw UsageError("mse: dataset does not match the network");
  }
  const Matrix residual = net.predict_batch(data.inputs()) - data.targets();
  return residual.rowwise().squaredNorm().sum() / static_cast<double>(data.size());
}

}  // namespace nhs
