#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nhs/box.h"
#include "nhs/ctl.h"
#include "nhs/serialization.h"

namespace nhs {

inline constexpr int kDefaultReferenceHiddenCount = 200;

/// Everything a pipeline run needs. Loaded from one JSON file; CLI flags
/// override individual fields.
struct PipelineConfig {
  std::string dataset;
  int n_x = 0;
  int n_u = 0;
  /// Derived from the data (padded by omega_margin) when absent.
  std::optional<Box> omega;
  std::optional<Box> input_bounds;
  double omega_margin = 0.05;
  double epsilon = kDefaultEpsilon;
  /// ε for cell construction; defaults to `epsilon`.
  std::optional<double> cell_epsilon;
  double gamma = kDefaultGamma;
  int hidden_count = kDefaultHiddenCount;
  int reference_hidden_count = kDefaultReferenceHiddenCount;
  double ridge = kDefaultRidge;
  std::size_t traces = kDefaultTraceCount;
  std::size_t trace_length = kDefaultTraceLength;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  /// Worker cap for parallel stages; 0 = all cores.
  unsigned threads = 0;

  /// Throws UsageError on negative thresholds or bad dimensions.
  void validate() const;
};

/// Relative dataset/output paths are resolved against the config file's
/// directory.
PipelineConfig load_config(const std::string& path);
PipelineConfig config_from_json(const Json& j, const std::string& base_dir = "");
Json to_json(const PipelineConfig& config);

// Artifact file names inside output_dir.
inline constexpr const char* kModelFile = "model.json";
inline constexpr const char* kPartitionsFile = "partitions.json";
inline constexpr const char* kTransitionSystemFile = "transition_system.json";
inline constexpr const char* kDotFile = "transition_system.dot";
inline constexpr const char* kBenchFile = "bench.csv";

/// Top-level key holding the wall-clock creation time in every artifact.
inline constexpr const char* kTimestampKey = "created";

struct FitSummary {
  std::string model_path;
  std::size_t partitions = 0;
  std::size_t regions = 0;
  std::vector<double> region_mse;
  double total_mse = 0.0;
  std::vector<double> fit_ms;
  double total_fit_ms = 0.0;
  std::vector<std::string> warnings;
};

/// load → ME partitioning → merge and learn; writes model.json and
/// partitions.json and prints a summary to `log`.
FitSummary cmd_fit(const PipelineConfig& config, std::ostream& log);

struct AbstractSummary {
  std::string ts_path;
  std::string dot_path;
  std::size_t cells = 0;
  std::size_t edges = 0;
};

/// sample traces → cells → transitions; writes transition_system.json and
/// transition_system.dot.
AbstractSummary cmd_abstract(const std::string& model_path,
                             const PipelineConfig& config, std::ostream& log);

/// {"formula", "initial", "result", "sat_set"} for a formula checked from
/// cell `initial`.
Json cmd_verify(const std::string& ts_path, const std::string& formula,
                int initial);

struct BenchRow {
  std::string model;
  std::size_t networks = 0;
  int hidden_count = 0;
  double median_fit_ms = 0.0;
  double max_fit_ms = 0.0;
  double total_fit_ms = 0.0;
  double mse = 0.0;
};

struct BenchReport {
  std::string csv_path;
  std::size_t samples = 0;
  BenchRow hybrid;
  BenchRow reference;
  /// Wall time of the whole merge stage, candidate fits included.
  double merge_ms = 0.0;
};

/// Hybrid model with hidden_count-neuron subnetworks against one
/// reference_hidden_count-neuron network on the same data. Only hidden-matrix
/// construction and the least-squares solve are timed.
BenchReport cmd_bench(const PipelineConfig& config, std::ostream& log);

/// Writes "k,x1..xn,out_of_zone" rows for a simulated trace. `inputs` must
/// cover every step when the model has inputs.
SimulationTrace cmd_simulate(const std::string& model_path, const Vector& x0,
                             const std::vector<Vector>& inputs,
                             std::size_t steps, std::ostream& out);

/// Copy of an artifact without its timestamp, for reproducibility checks.
Json strip_timestamp(Json j);

}  // namespace nhs
