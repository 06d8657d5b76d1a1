// Command-line front end: fit, abstract, verify, bench, simulate.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nhs/dataset.h"
#include "nhs/error.h"
#include "nhs/pipeline.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

nhs::Vector parse_vector(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw nhs::UsageError(std::string(what) + ": not a number: \"" + cell + "\"");
    }
  }
  return Eigen::Map<nhs::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Reads one input vector per non-empty line (comma separated, no header).
std::vector<nhs::Vector> read_inputs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nhs::DataError(path + ": cannot open inputs file");
  std::vector<nhs::Vector> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_vector(line, path.c_str()));
  }
  return out;
}

struct Overrides {
  std::string config_path;
  std::string dataset;
  std::string output_dir;
  int n_x = -1;
  int n_u = -1;
  double epsilon = -1;
  double cell_epsilon = -1;
  double gamma = -1;
  int hidden = -1;
  int reference_hidden = -1;
  long long traces = -1;
  long long trace_length = -1;
  long long seed = -1;
  int threads = -1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "Pipeline configuration (JSON)");
    cmd->add_option("--dataset", dataset, "Dataset CSV");
    cmd->add_option("--n-x", n_x, "State dimension");
    cmd->add_option("--n-u", n_u, "Input dimension");
    cmd->add_option("--epsilon", epsilon, "Entropy threshold for partitioning");
    cmd->add_option("--cell-epsilon", cell_epsilon, "Entropy threshold for cells");
    cmd->add_option("--gamma", gamma, "MSE threshold for merging");
    cmd->add_option("--hidden", hidden, "Neurons per subnetwork");
    cmd->add_option("--reference-hidden", reference_hidden, "Neurons of the reference network");
    cmd->add_option("--traces", traces, "Number of sampled traces (L)");
    cmd->add_option("--trace-length", trace_length, "Steps per trace (M)");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("-o,--output-dir", output_dir, "Directory for artifacts");
    cmd->add_option("--threads", threads, "Worker cap (0 = all cores)");
  }

  nhs::PipelineConfig resolve() const {
    nhs::PipelineConfig c =
        config_path.empty() ? nhs::PipelineConfig{} : nhs::load_config(config_path);
    if (!dataset.empty()) c.dataset = dataset;
    if (!output_dir.empty()) c.output_dir = output_dir;
    if (n_x >= 0) c.n_x = n_x;
    if (n_u >= 0) c.n_u = n_u;
    if (epsilon >= 0) c.epsilon = epsilon;
    if (cell_epsilon >= 0) c.cell_epsilon = cell_epsilon;
    if (gamma >= 0) c.gamma = gamma;
    if (hidden >= 0) c.hidden_count = hidden;
    if (reference_hidden >= 0) c.reference_hidden_count = reference_hidden;
    if (traces >= 0) c.traces = static_cast<std::size_t>(traces);
    if (trace_length >= 0) c.trace_length = static_cast<std::size_t>(trace_length);
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) c.threads = static_cast<unsigned>(threads);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural hybrid system learning, abstraction and CTL verification"};
  app.require_subcommand(1);

  Overrides fit_opts;
  auto* fit = app.add_subcommand("fit", "Partition the data and learn the hybrid model");
  fit_opts.add_to(fit);

  Overrides abstract_opts;
  std::string abstract_model;
  auto* abstract = app.add_subcommand("abstract", "Abstract a model into a transition system");
  abstract->add_option("-m,--model", abstract_model, "Model JSON from `fit`")->required();
  abstract_opts.add_to(abstract);

  std::string ts_path, formula;
  int initial = 1;
  auto* verify = app.add_subcommand("verify", "Check a CTL formula on a transition system");
  verify->add_option("-t,--ts", ts_path, "Transition system JSON")->required();
  verify->add_option("-f,--formula", formula, "CTL formula, e.g. \"EF Q2\"")->required();
  verify->add_option("-i,--initial", initial, "Initial cell id")->required();

  Overrides bench_opts;
  auto* bench = app.add_subcommand("bench", "Compare hybrid and single-network training");
  bench_opts.add_to(bench);

  std::string sim_model, sim_x0, sim_input, sim_inputs_file, sim_out;
  std::size_t sim_steps = 0;
  auto* sim = app.add_subcommand("simulate", "Simulate the hybrid model from a state");
  sim->add_option("-m,--model", sim_model, "Model JSON")->required();
  sim->add_option("--x0", sim_x0, "Initial state, comma separated")->required();
  sim->add_option("--steps", sim_steps, "Number of steps")->required();
  auto* const_input = sim->add_option("--input", sim_input, "Constant input, comma separated");
  sim->add_option("--inputs", sim_inputs_file, "File with one input per line")
      ->excludes(const_input);
  sim->add_option("--out", sim_out, "Write the trace CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fit) {
      nhs::cmd_fit(fit_opts.resolve(), std::cout);
    } else if (*abstract) {
      nhs::cmd_abstract(abstract_model, abstract_opts.resolve(), std::cout);
    } else if (*verify) {
      std::cout << nhs::cmd_verify(ts_path, formula, initial).dump() << "\n";
    } else if (*bench) {
      nhs::cmd_bench(bench_opts.resolve(), std::cout);
    } else if (*sim) {
      std::vector<nhs::Vector> inputs;
      if (!sim_inputs_file.empty()) inputs = read_inputs(sim_inputs_file);
      if (!sim_input.empty()) inputs.assign(sim_steps, parse_vector(sim_input, "--input"));
      const nhs::Vector x0 = parse_vector(sim_x0, "--x0");
      std::ofstream file;
      if (!sim_out.empty()) {
        file.open(sim_out);
        if (!file) throw nhs::DataError(sim_out + ": cannot open for writing");
      }
      const auto trace = nhs::cmd_simulate(sim_model, x0, inputs, sim_steps,
                                           sim_out.empty() ? std::cout : file);
      if (trace.truncated) std::cerr << "warning: " << trace.diagnostic << "\n";
    }
  } catch (const nhs::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nhs::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nhs::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
