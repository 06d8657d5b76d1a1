#pragma once

// Deterministic datasets and hand-built models shared by the test suites.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "nhs/box.h"
#include "nhs/dataset.h"
#include "nhs/elm.h"
#include "nhs/hybrid_model.h"
#include "nhs/random.h"

namespace nhs::testing {

inline Box unit_square() { return Box::Cube(2, 0.0, 1.0); }

// 100 points uniform in [0,0.5)×[0,1) and 100 in [0.5,1)×[0,1), mapped by
// the contraction y = 0.9 x + 0.05 (stays inside the unit square).
inline Dataset two_cluster_dataset(std::uint64_t seed = 7) {
  Rng rng(seed);
  Matrix z(200, 2);
  for (int i = 0; i < 200; ++i) {
    const double x0 = i < 100 ? rng.uniform(0.0, 0.5) : rng.uniform(0.5, 1.0);
    z(i, 0) = x0;
    z(i, 1) = rng.uniform(0.0, 1.0);
  }
  Matrix y = (0.9 * z.array() + 0.05).matrix();
  return Dataset(2, 0, z, y);
}

// Positions sampled along a discretised closed curve (a limaçon), paired
// with the next position: a stand-in for a 2-D demonstration export.
inline std::vector<Matrix> curve_trajectory(int points) {
  Matrix t(points + 1, 2);
  for (int k = 0; k <= points; ++k) {
    const double s = 2.0 * M_PI * k / points;
    const double r = 0.5 + 0.3 * std::cos(s);
    t(k, 0) = r * std::cos(s);
    t(k, 1) = r * std::sin(s);
  }
  return {t};
}

// Stable nonlinear spiral sampled along several demonstrations, converging
// to the origin; `samples` (x_k, x_{k+1}) pairs in total.
inline Dataset spiral_dataset(int samples, int demos = 8) {
  const double dt = 0.02;
  std::vector<Matrix> trajectories;
  const int per_demo = samples / demos;
  for (int d = 0; d < demos; ++d) {
    const int length = per_demo + (d < samples % demos ? 1 : 0);
    Matrix t(length + 1, 2);
    const double angle = 2.0 * M_PI * d / demos;
    Vector x(2);
    x << std::cos(angle), std::sin(angle);
    for (int k = 0; k <= length; ++k) {
      t.row(k) = x.transpose();
      Vector f(2);
      f << -0.6 * x[0] - 2.0 * x[1] + 0.3 * std::sin(2.0 * x[1]),
          2.0 * x[0] - 0.6 * x[1] - 0.2 * x[0] * x[0];
      x += dt * f;
    }
    trajectories.push_back(t);
  }
  return dataset_from_trajectories(trajectories);
}

// Network returning `c` everywhere: one neuron with zero input weights and
// unit bias.
inline ElmNetwork constant_net(int n_in, const Vector& c) {
  return ElmNetwork(Matrix::Zero(1, n_in), Vector::Ones(1), c, 0);
}

// Model over `omega` whose regions are the given boxes, each mapped to the
// matching constant.
inline HybridModel constant_model(const Box& omega,
                                  const std::vector<std::vector<Box>>& regions,
                                  const std::vector<Vector>& constants) {
  std::vector<Region> rs;
  std::vector<ElmNetwork> nets;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    rs.push_back({static_cast<int>(i) + 1, regions[i]});
    nets.push_back(constant_net(omega.dim(), constants[i]));
  }
  return HybridModel(WorkingZone(omega), rs, nets, ElmTemplate{1, 0, 0.0}, 0.0, 0.0);
}

inline Vector uniform_point(Rng& rng, const Box& b) {
  Vector x(b.dim());
  for (int k = 0; k < b.dim(); ++k) x[k] = rng.uniform(b.lo(k), b.hi(k));
  return x;
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline Box box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  return Box(vec(lo), vec(hi));
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() /
              ("nhs_" + name + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace nhs::testing
