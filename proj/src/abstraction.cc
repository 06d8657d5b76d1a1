#include "nhs/abstraction.h"

#include <sstream>

#include "nhs/entropy_partition.h"
#include "nhs/error.h"
#include "nhs/interval_reach.h"
#include "nhs/parallel.h"

namespace nhs {

std::size_t TraceSet::state_count() const {
  std::size_t n = 0;
  for (const Trace& t : traces) n += t.entries.size();
  return n;
}

Matrix TraceSet::states() const {
  const std::size_t n = state_count();
  const Eigen::Index dim =
      n == 0 ? 0 : traces.front().entries.front().state.size();
  Matrix out(n, dim);
  Eigen::Index r = 0;
  for (const Trace& t : traces) {
    for (const TraceEntry& e : t.entries) out.row(r++) = e.state.transpose();
  }
  return out;
}

InputPolicy uniform_input_policy(Box bounds) {
  return [bounds = std::move(bounds)](const Vector&, std::size_t, Rng& rng) {
    Vector u(bounds.dim());
    for (int k = 0; k < bounds.dim(); ++k) {
      u[k] = rng.uniform(bounds.lo(k), bounds.hi(k));
    }
    return u;
  };
}

InputPolicy constant_input_policy(Vector u) {
  return [u = std::move(u)](const Vector&, std::size_t, Rng&) { return u; };
}

InputPolicy piecewise_constant_input_policy(std::vector<Box> boxes,
                                            std::vector<Vector> values,
                                            Box zone, Vector fallback) {
  if (boxes.size() != values.size()) {
    throw UsageError("piecewise_constant_input_policy: boxes/values size mismatch");
  }
  return [boxes = std::move(boxes), values = std::move(values),
          zone = std::move(zone),
          fallback = std::move(fallback)](const Vector& x, std::size_t, Rng&) {
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (box_contains(boxes[i], x, zone)) return values[i];
    }
    return fallback;
  };
}

TraceSet sample_traces(const HybridModel& model, std::size_t trace_count,
                       std::size_t trace_length, std::uint64_t seed,
                       InputPolicy policy) {
  if (trace_count == 0 || trace_length == 0) {
    throw UsageError("sample_traces: trace count and length must be >= 1");
  }
  if (model.n_u() > 0 && !policy) {
    policy = uniform_input_policy(*model.zone().input_bounds);
  }
  const Box& omega = model.zone().omega;
  TraceSet out;
  out.traces.resize(trace_count);
  for (std::size_t i = 0; i < trace_count; ++i) {
    Rng rng(derive_seed(seed, i));
    Vector x(model.n_x());
    for (int k = 0; k < model.n_x(); ++k) x[k] = rng.uniform(omega.lo(k), omega.hi(k));

    Trace& trace = out.traces[i];
    trace.entries.push_back({0, x, std::nullopt});
    for (std::size_t k = 0; k < trace_length; ++k) {
      Vector u(0);
      if (model.n_u() > 0) {
        u = policy(x, k, rng);
        trace.entries.back().input = u;
      }
      Vector next = model.step(x, u);
      if (!next.allFinite() || !box_subset(Box::Point(next), omega)) {
        trace.exited = true;
        break;
      }
      x = std::move(next);
      trace.entries.push_back({k + 1, x, std::nullopt});
    }
  }
  return out;
}

std::vector<Box> build_cells(const WorkingZone& zone, const TraceSet& traces,
                             double epsilon) {
  if (traces.state_count() == 0) throw UsageError("build_cells: no visited states");
  return me_partition_points(zone.omega, traces.states(), epsilon).boxes;
}

TransitionSystem::TransitionSystem(WorkingZone zone, std::vector<Box> cells,
                                   bool has_sink,
                                   std::vector<std::uint8_t> relation,
                                   std::optional<int> initial)
    : zone_(std::move(zone)), cells_(std::move(cells)), has_sink_(has_sink),
      relation_(std::move(relation)), initial_(initial) {
  if (cells_.empty()) throw UsageError("TransitionSystem: no cells");
  const std::size_t n = size();
  if (relation_.size() != n * n) {
    throw UsageError("TransitionSystem: relation must be size × size");
  }
  for (const Box& c : cells_) {
    if (c.dim() != zone_.n_x()) throw UsageError("TransitionSystem: cell dimension mismatch");
    if (c.is_degenerate()) throw UsageError("TransitionSystem: flat cell");
  }
  if (initial_ && (*initial_ < 1 || *initial_ > static_cast<int>(cells_.size()))) {
    throw UsageError("TransitionSystem: initial cell out of range");
  }
  successors_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (relation_[i * n + j]) successors_[i].push_back(j);
    }
    if (successors_[i].empty()) {
      throw UsageError("TransitionSystem: state " + label(i) + " has no successor");
    }
  }
}

std::size_t TransitionSystem::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : successors_) n += s.size();
  return n;
}

std::string TransitionSystem::label(std::size_t s) const {
  if (has_sink_ && s == sink()) return "EXIT";
  return "Q" + std::to_string(s + 1);
}

std::size_t TransitionSystem::state_of(const Vector& x) const {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (box_contains(cells_[i], x, zone_.omega)) return i;
  }
  if (!has_sink_) throw UsageError("TransitionSystem: state lies in no cell");
  return sink();
}

TransitionSystem compute_transitions(const HybridModel& model,
                                     const std::vector<Box>& cells,
                                     unsigned threads) {
  if (cells.empty()) throw UsageError("compute_transitions: no cells");
  const Box& omega = model.zone().omega;
  const std::size_t n_cells = cells.size();
  const std::size_t n = n_cells + 1;
  std::vector<std::uint8_t> relation(n * n, 0);

  parallel_for(n_cells, threads, [&](std::size_t i) {
    const ReachResult reach = cell_successor_box(model, cells[i]);
    std::uint8_t* row = relation.data() + i * n;
    for (const ReachPiece& piece : reach.pieces) {
      for (std::size_t j = 0; j < n_cells; ++j) {
        if (!row[j] && box_intersect(piece.output, cells[j])) row[j] = 1;
      }
      if (!box_subset(piece.output, omega)) row[n_cells] = 1;
    }
  });
  relation[n_cells * n + n_cells] = 1;
  return TransitionSystem(model.zone(), cells, true, std::move(relation));
}

std::string export_dot(const TransitionSystem& ts) {
  std::ostringstream out;
  out << "digraph transition_system {\n";
  for (std::size_t s = 0; s < ts.size(); ++s) {
    const std::string l = ts.label(s);
    out << "  " << l << " [label=\"" << l << "\"";
    if (ts.has_sink() && s == ts.sink()) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (std::size_t s = 0; s < ts.size(); ++s) {
    for (std::size_t t : ts.successors(s)) {
      out << "  " << ts.label(s) << " -> " << ts.label(t) << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace nhs
