#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nhs/box.h"
#include "nhs/hybrid_model.h"
#include "nhs/random.h"

namespace nhs {

inline constexpr std::size_t kDefaultTraceCount = 400;
inline constexpr std::size_t kDefaultTraceLength = 400;

struct TraceEntry {
  std::size_t step;
  Vector state;
  /// Input applied at this step; absent for autonomous systems and for the
  /// last entry of a trace.
  std::optional<Vector> input;
};

struct Trace {
  std::vector<TraceEntry> entries;
  /// The trace stopped because the next state left Ω.
  bool exited = false;
};

struct TraceSet {
  std::vector<Trace> traces;

  std::size_t state_count() const;
  /// Every visited state, one per row.
  Matrix states() const;
};

/// Chooses u(k) given the current state and step. Receives the trace's own
/// generator so that random policies stay reproducible.
using InputPolicy = std::function<Vector(const Vector& x, std::size_t k, Rng& rng)>;

InputPolicy uniform_input_policy(Box bounds);
InputPolicy constant_input_policy(Vector u);
/// values[i] wherever x lies in boxes[i] (half-open rule inside `zone`);
/// `fallback` elsewhere.
InputPolicy piecewise_constant_input_policy(std::vector<Box> boxes,
                                            std::vector<Vector> values,
                                            Box zone, Vector fallback);

/// L traces of up to M steps each. Initial states are uniform over Ω; inputs
/// come from `policy` (uniform over the model's input bounds by default).
/// Trace i draws from its own generator seeded from (seed, i).
TraceSet sample_traces(const HybridModel& model, std::size_t trace_count,
                       std::size_t trace_length, std::uint64_t seed,
                       InputPolicy policy = {});

/// Maximum-entropy cells over the visited states.
std::vector<Box> build_cells(const WorkingZone& zone, const TraceSet& traces,
                             double epsilon);

/// Finite abstraction: cells Q1..QN plus, when `has_sink`, an absorbing EXIT
/// state at index N. State indices are 0-based; cell ids are index + 1.
class TransitionSystem {
 public:
  /// `relation` is row-major over size() × size() and must be total.
  TransitionSystem(WorkingZone zone, std::vector<Box> cells, bool has_sink,
                   std::vector<std::uint8_t> relation,
                   std::optional<int> initial = std::nullopt);

  const WorkingZone& zone() const { return zone_; }
  const std::vector<Box>& cells() const { return cells_; }
  bool has_sink() const { return has_sink_; }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t size() const { return cells_.size() + (has_sink_ ? 1 : 0); }
  std::size_t sink() const { return cells_.size(); }
  const std::optional<int>& initial() const { return initial_; }

  bool edge(std::size_t from, std::size_t to) const {
    return relation_[from * size() + to] != 0;
  }
  const std::vector<std::uint8_t>& relation() const { return relation_; }
  const std::vector<std::size_t>& successors(std::size_t s) const {
    return successors_[s];
  }
  std::size_t edge_count() const;
  /// "Q<i>" for cells, "EXIT" for the sink.
  std::string label(std::size_t s) const;

  /// Cell index holding x, or the sink when x lies outside Ω.
  std::size_t state_of(const Vector& x) const;

 private:
  WorkingZone zone_;
  std::vector<Box> cells_;
  bool has_sink_;
  std::vector<std::uint8_t> relation_;
  std::vector<std::vector<std::size_t>> successors_;
  std::optional<int> initial_;
};

/// R(i, j) = 1 iff some region piece of cell i's successor box meets cell j
/// with positive width; R(i, EXIT) = 1 iff a piece extends beyond Ω. The sink
/// only loops to itself. Rows are computed on up to `threads` workers.
TransitionSystem compute_transitions(const HybridModel& model,
                                     const std::vector<Box>& cells,
                                     unsigned threads = 1);

/// Graphviz rendering: one node per state, one edge per relation entry,
/// row-major order.
std::string export_dot(const TransitionSystem& ts);

}  // namespace nhs
