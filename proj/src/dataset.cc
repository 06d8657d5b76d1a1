#include "nhs/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nhs/error.h"

namespace nhs {
namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string position(const std::string& path, std::size_t line, std::size_t col) {
  std::ostringstream out;
  out << path << ": row " << line;
  if (col > 0) out << ", column " << col;
  return out.str();
}

}  // namespace

Dataset::Dataset(int n_x, int n_u, Matrix inputs, Matrix targets)
    : n_x_(n_x), n_u_(n_u), inputs_(std::move(inputs)),
      targets_(std::move(targets)) {
  if (n_x <= 0 || n_u < 0) {
    throw UsageError("Dataset: n_x must be positive and n_u non-negative");
  }
  if (inputs_.cols() != n_x + n_u || targets_.cols() != n_x) {
    throw UsageError("Dataset: column counts do not match n_x/n_u");
  }
  if (inputs_.rows() != targets_.rows()) {
    throw UsageError("Dataset: input and target row counts differ");
  }
  if (inputs_.rows() == 0) throw UsageError("Dataset: no samples");
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Matrix z(indices.size(), n_in());
  Matrix y(indices.size(), n_x_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    z.row(r) = inputs_.row(indices[r]);
    y.row(r) = targets_.row(indices[r]);
  }
  return Dataset(n_x_, n_u_, std::move(z), std::move(y));
}

Dataset load_dataset(const std::string& path, int n_x, int n_u) {
  if (n_x <= 0 || n_u < 0) {
    throw UsageError("load_dataset: n_x must be positive and n_u non-negative");
  }
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open dataset file");

  const std::size_t columns = static_cast<std::size_t>(2 * n_x + n_u);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != columns) {
      std::ostringstream msg;
      msg << position(path, line_no, 0) << ": expected " << columns
          << " columns (n_x=" << n_x << ", n_u=" << n_u << "), found "
          << cells.size();
      throw DataError(msg.str());
    }
    if (!have_header) {
      have_header = true;
      continue;
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      double v = 0.0;
      const char* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
      if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw DataError(position(path, line_no, c + 1) +
                        ": not a finite number: \"" + cell + "\"");
      }
      values.push_back(v);
    }
  }
  if (!have_header) throw DataError(path + ": empty file");
  const std::size_t rows = values.size() / columns;
  if (rows == 0) throw DataError(path + ": header present but no data rows");

  Matrix z(rows, n_x + n_u);
  Matrix y(rows, n_x);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = values.data() + r * columns;
    for (int c = 0; c < n_x + n_u; ++c) z(r, c) = row[c];
    for (int c = 0; c < n_x; ++c) y(r, c) = row[n_x + n_u + c];
  }
  return Dataset(n_x, n_u, std::move(z), std::move(y));
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  std::vector<std::string> names;
  for (int k = 1; k <= data.n_x(); ++k) names.push_back("x" + std::to_string(k));
  for (int k = 1; k <= data.n_u(); ++k) names.push_back("u" + std::to_string(k));
  for (int k = 1; k <= data.n_x(); ++k) names.push_back("y" + std::to_string(k));
  for (std::size_t c = 0; c < names.size(); ++c) {
    out << (c ? "," : "") << names[c];
  }
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (int c = 0; c < data.n_in(); ++c) {
      out << (c ? "," : "") << data.inputs()(i, c);
    }
    for (int c = 0; c < data.n_x(); ++c) out << ',' << data.targets()(i, c);
    out << '\n';
  }
}

Dataset dataset_from_trajectories(const std::vector<Matrix>& trajectories) {
  if (trajectories.empty()) throw UsageError("no trajectories given");
  const Eigen::Index dim = trajectories.front().cols();
  Eigen::Index pairs = 0;
  for (const auto& t : trajectories) {
    if (t.cols() != dim) throw UsageError("trajectories differ in dimension");
    pairs += std::max<Eigen::Index>(t.rows() - 1, 0);
  }
  Matrix z(pairs, dim);
  Matrix y(pairs, dim);
  Eigen::Index r = 0;
  for (const auto& t : trajectories) {
    for (Eigen::Index k = 0; k + 1 < t.rows(); ++k, ++r) {
      z.row(r) = t.row(k);
      y.row(r) = t.row(k + 1);
    }
  }
  return Dataset(static_cast<int>(dim), 0, std::move(z), std::move(y));
}

void check_within_zone(const WorkingZone& zone, const Dataset& data) {
  if (zone.n_x() != data.n_x() || zone.n_u() != data.n_u()) {
    throw UsageError("working zone dimensions do not match the dataset");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vector z = data.z(i);
    if (!box_subset(Box::Point(z.head(data.n_x())), zone.omega)) {
      throw DataError("sample " + std::to_string(i + 1) +
                      ": state lies outside the working zone");
    }
    if (zone.input_bounds &&
        !box_subset(Box::Point(z.tail(data.n_u())), *zone.input_bounds)) {
      throw DataError("sample " + std::to_string(i + 1) +
                      ": input lies outside the input bounds");
    }
  }
}

Box data_bounds(const Dataset& data, double margin) {
  const Matrix states = data.inputs().leftCols(data.n_x());
  Vector lo = states.colwise().minCoeff().transpose().cwiseMin(
      data.targets().colwise().minCoeff().transpose());
  Vector hi = states.colwise().maxCoeff().transpose().cwiseMax(
      data.targets().colwise().maxCoeff().transpose());
  const Vector pad = (margin * (hi - lo)).cwiseMax(1e-6);
  return Box(lo - pad, hi + pad);
}

}  // namespace nhs
