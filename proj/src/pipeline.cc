#include "nhs/pipeline.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "nhs/dataset.h"
#include "nhs/error.h"

namespace nhs {
namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

std::string output_path(const PipelineConfig& config, const char* name) {
  fs::create_directories(config.output_dir.empty() ? "." : config.output_dir);
  return (fs::path(config.output_dir) / name).string();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

struct Prepared {
  Dataset data;
  WorkingZone zone;
};

Prepared prepare(const PipelineConfig& config) {
  config.validate();
  Dataset data = load_dataset(config.dataset, config.n_x, config.n_u);
  Box omega = config.omega ? *config.omega : data_bounds(data, config.omega_margin);
  std::optional<Box> inputs = config.input_bounds;
  if (config.n_u > 0 && !inputs) {
    const Matrix u = data.inputs().rightCols(config.n_u);
    inputs = Box::Closed(u.colwise().minCoeff().transpose(),
                         u.colwise().maxCoeff().transpose());
  }
  if (config.n_u == 0) inputs.reset();
  WorkingZone zone(std::move(omega), std::move(inputs));
  check_within_zone(zone, data);
  return {std::move(data), std::move(zone)};
}

double hybrid_mse(const HybridModel& model, const Dataset& data) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Vector z = data.z(i);
    const Vector pred = model.step(z.head(model.n_x()), z.tail(model.n_u()));
    total += (pred - data.y(i)).squaredNorm();
  }
  return total / static_cast<double>(data.size());
}

Json with_timestamp(Json j) {
  j[kTimestampKey] = utc_timestamp();
  return j;
}

}  // namespace

void PipelineConfig::validate() const {
  if (n_x <= 0) throw UsageError("config: n_x must be positive");
  if (n_u < 0) throw UsageError("config: n_u must be non-negative");
  if (!(epsilon >= 0.0) || !(gamma >= 0.0) || !(ridge >= 0.0) ||
      !(omega_margin >= 0.0) || (cell_epsilon && !(*cell_epsilon >= 0.0))) {
    throw UsageError("config: thresholds must be non-negative");
  }
  if (hidden_count <= 0 || reference_hidden_count <= 0) {
    throw UsageError("config: hidden counts must be positive");
  }
  if (traces == 0 || trace_length == 0) {
    throw UsageError("config: traces and trace_length must be positive");
  }
  if (omega && (omega->dim() != n_x || omega->is_degenerate())) {
    throw UsageError("config: omega must be a non-degenerate box of dimension n_x");
  }
  if (n_u > 0 && input_bounds && input_bounds->dim() != n_u) {
    throw UsageError("config: input_bounds must have dimension n_u");
  }
}

PipelineConfig config_from_json(const Json& j, const std::string& base_dir) {
  PipelineConfig c;
  try {
    if (j.contains("dataset")) c.dataset = resolve(base_dir, j.at("dataset").get<std::string>());
    c.n_x = j.value("n_x", c.n_x);
    c.n_u = j.value("n_u", c.n_u);
    if (j.contains("omega") && !j.at("omega").is_null()) c.omega = box_from_json(j.at("omega"));
    if (j.contains("input_bounds") && !j.at("input_bounds").is_null()) {
      c.input_bounds = box_from_json(j.at("input_bounds"));
    }
    c.omega_margin = j.value("omega_margin", c.omega_margin);
    if (j.contains("epsilon")) c.epsilon = threshold_from_json(j.at("epsilon"));
    if (j.contains("cell_epsilon") && !j.at("cell_epsilon").is_null()) {
      c.cell_epsilon = threshold_from_json(j.at("cell_epsilon"));
    }
    if (j.contains("gamma")) c.gamma = threshold_from_json(j.at("gamma"));
    c.hidden_count = j.value("hidden_count", c.hidden_count);
    c.reference_hidden_count = j.value("reference_hidden_count", c.reference_hidden_count);
    c.ridge = j.value("ridge", c.ridge);
    c.traces = j.value("traces", c.traces);
    c.trace_length = j.value("trace_length", c.trace_length);
    c.seed = j.value("seed", c.seed);
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j.at("output_dir").get<std::string>());
    c.threads = j.value("threads", c.threads);
  } catch (const Json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const std::string& path) {
  const Json j = load_json(path);
  return config_from_json(j, fs::path(path).parent_path().string());
}

Json to_json(const PipelineConfig& c) {
  Json j{{"dataset", c.dataset}, {"n_x", c.n_x}, {"n_u", c.n_u}};
  j["omega"] = c.omega ? to_json(*c.omega) : Json();
  j["input_bounds"] = c.input_bounds ? to_json(*c.input_bounds) : Json();
  j["omega_margin"] = c.omega_margin;
  j["epsilon"] = threshold_json(c.epsilon);
  j["cell_epsilon"] = c.cell_epsilon ? threshold_json(*c.cell_epsilon) : Json();
  j["gamma"] = threshold_json(c.gamma);
  j["hidden_count"] = c.hidden_count;
  j["reference_hidden_count"] = c.reference_hidden_count;
  j["ridge"] = c.ridge;
  j["traces"] = c.traces;
  j["trace_length"] = c.trace_length;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  return j;
}

FitSummary cmd_fit(const PipelineConfig& config, std::ostream& log) {
  const Prepared in = prepare(config);
  const PartitionSet parts = me_partition(in.zone, in.data, config.epsilon);
  MergeOptions options;
  options.threads = config.threads;
  options.input_bounds = in.zone.input_bounds;
  MergeResult merged = merge_and_learn(
      parts, in.data, ElmTemplate{config.hidden_count, config.seed, config.ridge},
      config.gamma, options);

  FitSummary s;
  s.partitions = parts.size();
  s.regions = merged.model.regions().size();
  s.region_mse = merged.region_mse;
  s.total_mse = hybrid_mse(merged.model, in.data);
  s.fit_ms = merged.fit_ms;
  s.total_fit_ms = sum(merged.fit_ms);
  s.warnings = merged.warnings;

  save_json(output_path(config, kPartitionsFile), to_json(parts));
  s.model_path = output_path(config, kModelFile);
  save_json(s.model_path, with_timestamp(to_json(merged.model)));

  for (const auto& w : s.warnings) log << "warning: " << w << "\n";
  log << "samples: " << in.data.size() << "\n";
  log << "partitions: " << s.partitions << " -> regions: " << s.regions << "\n";
  for (std::size_t r = 0; r < s.regions; ++r) {
    log << "  region " << r + 1 << ": mse " << s.region_mse[r] << ", fit "
        << s.fit_ms[r] << " ms\n";
  }
  log << "total mse: " << s.total_mse << "\n";
  log << "total fit time: " << s.total_fit_ms << " ms\n";
  log << "model: " << s.model_path << "\n";
  return s;
}

AbstractSummary cmd_abstract(const std::string& model_path,
                             const PipelineConfig& config, std::ostream& log) {
  config.validate();
  const HybridModel model = model_from_json(load_json(model_path));
  const TraceSet traces =
      sample_traces(model, config.traces, config.trace_length, config.seed);
  const std::vector<Box> cells =
      build_cells(model.zone(), traces, config.cell_epsilon.value_or(config.epsilon));
  const TransitionSystem ts = compute_transitions(model, cells, config.threads);

  AbstractSummary s;
  s.cells = ts.num_cells();
  s.edges = ts.edge_count();
  s.ts_path = output_path(config, kTransitionSystemFile);
  s.dot_path = output_path(config, kDotFile);
  save_json(s.ts_path, with_timestamp(to_json(ts)));
  save_text(s.dot_path, export_dot(ts));

  log << "visited states: " << traces.state_count() << "\n";
  log << "cells: " << s.cells << "\n";
  log << "edges: " << s.edges << "\n";
  log << "transition system: " << s.ts_path << "\n";
  log << "graph: " << s.dot_path << "\n";
  return s;
}

Json cmd_verify(const std::string& ts_path, const std::string& formula,
                int initial) {
  const TransitionSystem ts = transition_system_from_json(load_json(ts_path));
  const CtlFormula f = parse_ctl(formula);
  const bool result = check(ts, f, initial);
  const StateSet sat = sat_set(ts, f);
  Json states = Json::array();
  for (std::size_t s = 0; s < sat.size(); ++s) {
    if (sat[s]) states.push_back(ts.label(s));
  }
  return Json{{"formula", formula},
              {"initial", initial},
              {"result", result},
              {"sat_set", std::move(states)}};
}

BenchReport cmd_bench(const PipelineConfig& config, std::ostream& log) {
  const Prepared in = prepare(config);
  const PartitionSet parts = me_partition(in.zone, in.data, config.epsilon);
  MergeOptions options;
  options.threads = config.threads;
  options.input_bounds = in.zone.input_bounds;

  const auto merge_start = std::chrono::steady_clock::now();
  const MergeResult merged = merge_and_learn(
      parts, in.data, ElmTemplate{config.hidden_count, config.seed, config.ridge},
      config.gamma, options);
  const auto merge_stop = std::chrono::steady_clock::now();

  BenchReport report;
  report.samples = in.data.size();
  report.merge_ms =
      std::chrono::duration<double, std::milli>(merge_stop - merge_start).count();
  std::vector<double> fitted_ms;
  for (std::size_t r = 0; r < merged.fit_ms.size(); ++r) {
    if (merged.region_samples[r] > 0) fitted_ms.push_back(merged.fit_ms[r]);
  }
  report.hybrid = {"hybrid",
                   merged.model.regions().size(),
                   config.hidden_count,
                   median(fitted_ms),
                   fitted_ms.empty() ? 0.0 : *std::max_element(fitted_ms.begin(), fitted_ms.end()),
                   sum(fitted_ms),
                   hybrid_mse(merged.model, in.data)};

  const ElmNetwork reference_init =
      init_elm(in.data.n_in(), in.data.n_x(), config.reference_hidden_count,
               region_seed(config.seed, 0));
  const auto ref_start = std::chrono::steady_clock::now();
  const ElmNetwork reference = fit_output_weights(reference_init, in.data, config.ridge);
  const auto ref_stop = std::chrono::steady_clock::now();
  const double ref_ms =
      std::chrono::duration<double, std::milli>(ref_stop - ref_start).count();
  report.reference = {"reference", 1, config.reference_hidden_count, ref_ms, ref_ms,
                      ref_ms, mse(reference, in.data)};

  report.csv_path = output_path(config, kBenchFile);
  std::ofstream csv(report.csv_path);
  if (!csv) throw DataError(report.csv_path + ": cannot open for writing");
  csv.precision(10);
  csv << "model,networks,hidden_count,samples,median_fit_ms,max_fit_ms,total_fit_ms,mse\n";
  for (const BenchRow* row : {&report.hybrid, &report.reference}) {
    csv << row->model << ',' << row->networks << ',' << row->hidden_count << ','
        << report.samples << ',' << row->median_fit_ms << ',' << row->max_fit_ms
        << ',' << row->total_fit_ms << ',' << row->mse << '\n';
  }

  log << "samples: " << report.samples << ", partitions: " << parts.size()
      << ", regions: " << report.hybrid.networks << "\n";
  log << "hybrid    (" << config.hidden_count << " neurons x " << report.hybrid.networks
      << "): median fit " << report.hybrid.median_fit_ms << " ms, total "
      << report.hybrid.total_fit_ms << " ms, mse " << report.hybrid.mse << "\n";
  log << "reference (" << config.reference_hidden_count << " neurons): fit "
      << ref_ms << " ms, mse " << report.reference.mse << "\n";
  log << "merge stage: " << report.merge_ms << " ms\n";
  log << "report: " << report.csv_path << "\n";
  return report;
}

SimulationTrace cmd_simulate(const std::string& model_path, const Vector& x0,
                             const std::vector<Vector>& inputs,
                             std::size_t steps, std::ostream& out) {
  const HybridModel model = model_from_json(load_json(model_path));
  if (x0.size() != model.n_x()) {
    throw UsageError("simulate: x0 has " + std::to_string(x0.size()) +
                     " entries, model expects " + std::to_string(model.n_x()));
  }
  for (const Vector& u : inputs) {
    if (u.size() != model.n_u()) throw UsageError("simulate: input dimension mismatch");
  }
  const SimulationTrace trace = simulate(model, x0, inputs, steps);
  out << "k";
  for (int i = 1; i <= model.n_x(); ++i) out << ",x" << i;
  out << ",out_of_zone\n";
  out.precision(17);
  for (std::size_t k = 0; k < trace.states.size(); ++k) {
    out << k;
    for (Eigen::Index i = 0; i < trace.states[k].size(); ++i) out << ',' << trace.states[k][i];
    const bool flagged = std::find(trace.out_of_zone_steps.begin(),
                                   trace.out_of_zone_steps.end(), k) !=
                         trace.out_of_zone_steps.end();
    out << ',' << (flagged ? 1 : 0) << '\n';
  }
  return trace;
}

Json strip_timestamp(Json j) {
  if (j.is_object()) j.erase(kTimestampKey);
  return j;
}

}  // namespace nhs
