#include "nhs/abstraction.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "nhs/error.h"
#include "test_fixtures.h"

namespace nhs {
namespace {

using testing::box;
using testing::vec;

std::vector<Box> quadrants() {
  return {box({0, 0}, {0.5, 0.5}), box({0.5, 0}, {1, 0.5}), box({0, 0.5}, {0.5, 1}),
          box({0.5, 0.5}, {1, 1})};
}

// Model used by the golden DOT file and the pipeline tests: the two-cluster
// fixture with epsilon 0.05, gamma 1e-4, 20 neurons, seed 1.
HybridModel two_cluster_model() {
  const Dataset d = testing::two_cluster_dataset();
  const WorkingZone zone(testing::unit_square());
  return merge_and_learn(me_partition(zone, d, 0.05), d, {20, 1, kDefaultRidge}, 1e-4).model;
}

TransitionSystem two_cluster_abstraction() {
  const HybridModel m = two_cluster_model();
  const TraceSet traces = sample_traces(m, 50, 50, 1);
  return compute_transitions(m, build_cells(m.zone(), traces, 0.05));
}

// Every consecutive pair of simulated states must be an edge of `ts`.
std::size_t count_violations(const HybridModel& m, const TransitionSystem& ts,
                             std::uint64_t seed, int traces, int steps) {
  Rng rng(seed);
  std::size_t violations = 0;
  for (int t = 0; t < traces; ++t) {
    const Vector x0 = testing::uniform_point(rng, m.zone().omega);
    std::vector<Vector> inputs;
    for (int k = 0; k < steps && m.n_u() > 0; ++k) {
      inputs.push_back(testing::uniform_point(rng, *m.zone().input_bounds));
    }
    const SimulationTrace trace = simulate(m, x0, inputs, steps);
    for (std::size_t k = 0; k + 1 < trace.states.size(); ++k) {
      const std::size_t from = ts.state_of(trace.states[k]);
      if (from == ts.sink()) break;
      if (!ts.edge(from, ts.state_of(trace.states[k + 1]))) ++violations;
    }
  }
  return violations;
}

TEST(SampleTracesTest, OneTraceOneStep) {
  const HybridModel m = testing::constant_model(
      testing::unit_square(), {{testing::unit_square()}}, {vec({0.5, 0.5})});
  const TraceSet ts = sample_traces(m, 1, 1, 0);
  ASSERT_EQ(ts.traces.size(), 1u);
  ASSERT_EQ(ts.traces[0].entries.size(), 2u);
  EXPECT_EQ(ts.traces[0].entries[1].state, vec({0.5, 0.5}));
  EXPECT_FALSE(ts.traces[0].exited);
  EXPECT_THROW(sample_traces(m, 0, 1, 0), UsageError);
}

TEST(SampleTracesTest, DefaultsAndDeterminism) {
  EXPECT_EQ(kDefaultTraceCount, 400u);
  EXPECT_EQ(kDefaultTraceLength, 400u);
  const HybridModel m = two_cluster_model();
  const TraceSet a = sample_traces(m, 20, 30, 5);
  const TraceSet b = sample_traces(m, 20, 30, 5);
  EXPECT_EQ(a.states(), b.states());
  EXPECT_NE(a.states().row(0), sample_traces(m, 20, 30, 6).states().row(0));
}

TEST(SampleTracesTest, StepIndicesConsecutiveAndStatesInside) {
  const TraceSet ts = sample_traces(two_cluster_model(), 30, 40, 2);
  for (const Trace& t : ts.traces) {
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      ASSERT_EQ(t.entries[i].step, i);
      ASSERT_TRUE(box_subset(Box::Point(t.entries[i].state), testing::unit_square()));
    }
  }
}

TEST(SampleTracesTest, LeavingOmegaEndsTraceWithExitMarker) {
  const HybridModel m = testing::constant_model(
      testing::unit_square(), {{testing::unit_square()}}, {vec({1.5, 0.5})});
  const TraceSet ts = sample_traces(m, 3, 10, 0);
  for (const Trace& t : ts.traces) {
    EXPECT_TRUE(t.exited);
    EXPECT_EQ(t.entries.size(), 1u);
  }
}

TEST(SampleTracesTest, InputsComeFromPolicy) {
  const Box omega = box({0}, {1});
  // x' = 0.5 (x + u).
  Matrix w_in(2, 2);
  w_in << 1, 1, -1, -1;
  Matrix w_out(1, 2);
  w_out << 0.5, -0.5;
  const HybridModel m(WorkingZone(omega, box({0}, {1})), {{1, {omega}}},
                      {ElmNetwork(w_in, Vector::Zero(2), w_out, 0)}, {2, 0}, 0, 0);
  const TraceSet uniform = sample_traces(m, 5, 20, 1);
  for (const Trace& t : uniform.traces) {
    for (std::size_t i = 0; i + 1 < t.entries.size(); ++i) {
      ASSERT_TRUE(t.entries[i].input.has_value());
      const double u = (*t.entries[i].input)[0];
      ASSERT_TRUE(u >= 0.0 && u <= 1.0);
      ASSERT_NEAR(t.entries[i + 1].state[0], 0.5 * (t.entries[i].state[0] + u), 1e-15);
    }
    EXPECT_FALSE(t.entries.back().input.has_value());
  }
  const TraceSet fixed = sample_traces(m, 2, 5, 1, constant_input_policy(vec({0.25})));
  EXPECT_EQ(*fixed.traces[0].entries[0].input, vec({0.25}));
  const InputPolicy piecewise = piecewise_constant_input_policy(
      {box({0}, {0.5}), box({0.5}, {1})}, {vec({0.0}), vec({1.0})}, omega, vec({0.5}));
  Rng rng(0);
  EXPECT_EQ(piecewise(vec({0.2}), 0, rng), vec({0.0}));
  EXPECT_EQ(piecewise(vec({1.0}), 0, rng), vec({1.0}));
  EXPECT_EQ(piecewise(vec({3.0}), 0, rng), vec({0.5}));
}

TEST(BuildCellsTest, HugeEpsilonSingleCell) {
  const TraceSet ts = sample_traces(two_cluster_model(), 10, 10, 0);
  const auto cells = build_cells(WorkingZone(testing::unit_square()), ts, 1e6);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0], testing::unit_square());
}

TEST(BuildCellsTest, TwoClusterStatesSplitAtHalfFirst) {
  const Dataset d = testing::two_cluster_dataset();
  TraceSet ts;
  for (std::size_t i = 0; i < d.size(); ++i) {
    ts.traces.push_back({{{0, d.state(i), std::nullopt}}, false});
  }
  const auto cells = build_cells(WorkingZone(testing::unit_square()), ts, 0.05);
  ASSERT_GT(cells.size(), 1u);
  for (const Box& c : cells) EXPECT_TRUE(c.hi(0) <= 0.5 || c.lo(0) >= 0.5);
}

TEST(ComputeTransitionsTest, ReachInsideCellIsSelfLoopOnly) {
  const HybridModel m = testing::constant_model(
      testing::unit_square(), {{box({0, 0}, {0.5, 1})}, {box({0.5, 0}, {1, 1})}},
      {vec({0.2, 0.2}), vec({0.8, 0.8})});
  const TransitionSystem ts = compute_transitions(m, quadrants());
  ASSERT_EQ(ts.size(), 5u);
  EXPECT_EQ(ts.successors(0), (std::vector<std::size_t>{0}));
  EXPECT_EQ(ts.successors(ts.sink()), (std::vector<std::size_t>{ts.sink()}));
}

TEST(ComputeTransitionsTest, ExitingReachHitsSink) {
  const HybridModel m = testing::constant_model(
      testing::unit_square(), {{testing::unit_square()}}, {vec({1.2, 0.5})});
  const TransitionSystem ts = compute_transitions(m, quadrants());
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(ts.successors(i), (std::vector<std::size_t>{ts.sink()}));
  }
}

TEST(ComputeTransitionsTest, ConstantMapIntoCellThree) {
  const HybridModel m = testing::constant_model(
      testing::unit_square(), {{testing::unit_square()}}, {vec({0.25, 0.75})});
  const TransitionSystem ts = compute_transitions(m, quadrants(), 3);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(ts.successors(i), (std::vector<std::size_t>{2})) << "row " << i;
  }
  EXPECT_EQ(ts.edge_count(), 5u);
  EXPECT_EQ(ts.label(2), "Q3");
  EXPECT_EQ(ts.label(4), "EXIT");
}

TEST(TransitionSystemTest, ConstructorValidates) {
  const WorkingZone zone(testing::unit_square());
  EXPECT_THROW(TransitionSystem(zone, quadrants(), false, std::vector<std::uint8_t>(16, 0)),
               UsageError);
  EXPECT_THROW(TransitionSystem(zone, quadrants(), false, std::vector<std::uint8_t>(9, 1)),
               UsageError);
  EXPECT_THROW(TransitionSystem(zone, {testing::unit_square()}, false, {1}, 2), UsageError);
  const TransitionSystem ok(zone, {testing::unit_square()}, false, {1}, 1);
  EXPECT_EQ(ok.initial(), 1);
  EXPECT_EQ(ok.state_of(vec({1.0, 1.0})), 0u);
  EXPECT_THROW(ok.state_of(vec({1.5, 1.0})), UsageError);
}

TEST(ExportDotTest, SingleCellSelfLoop) {
  const TransitionSystem ts(WorkingZone(testing::unit_square()), {testing::unit_square()},
                            false, {1});
  EXPECT_EQ(export_dot(ts),
            "digraph transition_system {\n"
            "  Q1 [label=\"Q1\"];\n"
            "  Q1 -> Q1;\n"
            "}\n");
}

TEST(ExportDotTest, EveryStateHasAnEdge) {
  const TransitionSystem ts = two_cluster_abstraction();
  const std::string dot = export_dot(ts);
  std::size_t edges = 0;
  for (std::size_t p = dot.find(" -> "); p != std::string::npos; p = dot.find(" -> ", p + 1)) {
    ++edges;
  }
  EXPECT_EQ(edges, ts.edge_count());
  EXPECT_GE(edges, ts.size());
  EXPECT_NE(dot.find("EXIT [label=\"EXIT\", shape=doublecircle];"), std::string::npos);
}

TEST(ExportDotTest, TwoClusterGoldenFile) {
  const std::string dot = export_dot(two_cluster_abstraction());
  const std::string path = std::string(NHS_GOLDEN_DIR) + "/two_cluster.dot";
  if (std::getenv("NHS_UPDATE_GOLDEN")) std::ofstream(path) << dot;
  std::ifstream in(path);
  ASSERT_TRUE(in) << "missing golden file " << path;
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(dot, golden.str());
}

TEST(AbstractionPropertyTest, SimulationSoundness) {
  const HybridModel m = two_cluster_model();
  const TransitionSystem ts = two_cluster_abstraction();
  EXPECT_EQ(count_violations(m, ts, 3, 100, 200), 0u);
}

TEST(AbstractionPropertyTest, DeterministicAndThreadIndependent) {
  const HybridModel m = two_cluster_model();
  const auto cells = build_cells(m.zone(), sample_traces(m, 50, 50, 1), 0.05);
  EXPECT_EQ(compute_transitions(m, cells, 1).relation(),
            compute_transitions(m, cells, 4).relation());
}

TEST(AbstractionPropertyTest, RefinementOnlyRemovesSpuriousEdges) {
  const HybridModel m = two_cluster_model();
  const auto coarse = build_cells(m.zone(), sample_traces(m, 50, 50, 1), 0.05);
  const TransitionSystem coarse_ts = compute_transitions(m, coarse);
  for (std::size_t split = 0; split < coarse.size(); ++split) {
    // Split cell `split` along its longest side; keep track of the parent.
    std::vector<Box> fine;
    std::vector<std::size_t> parent;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      if (i != split) {
        fine.push_back(coarse[i]);
        parent.push_back(i);
        continue;
      }
      const Box& c = coarse[i];
      auto [l, r] = bisect(c, c.width(0) >= c.width(1) ? 0 : 1);
      fine.push_back(l);
      fine.push_back(r);
      parent.push_back(i);
      parent.push_back(i);
    }
    parent.push_back(coarse_ts.sink());
    const TransitionSystem fine_ts = compute_transitions(m, fine);
    for (std::size_t a = 0; a < fine_ts.size(); ++a) {
      for (std::size_t b : fine_ts.successors(a)) {
        ASSERT_TRUE(coarse_ts.edge(parent[a], parent[b]));
      }
    }
    ASSERT_EQ(count_violations(m, fine_ts, split, 20, 50), 0u);
  }
}

}  // namespace
}  // namespace nhs
