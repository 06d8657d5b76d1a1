#include "nhs/serialization.h"

#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "nhs/error.h"
#include "test_fixtures.h"

namespace nhs {
namespace {

using testing::TempDir;
using testing::vec;

HybridModel fitted_model(double gamma) {
  const Dataset d = testing::two_cluster_dataset();
  const PartitionSet parts = me_partition(WorkingZone(testing::unit_square()), d, 0.05);
  return merge_and_learn(parts, d, {20, 2, kDefaultRidge}, gamma).model;
}

TEST(SerializationTest, BoxAndZone) {
  const WorkingZone zone(testing::box({0, -1}, {1, 1}), testing::box({-2}, {2}));
  const WorkingZone back = zone_from_json(to_json(zone));
  EXPECT_EQ(back.omega, zone.omega);
  ASSERT_TRUE(back.input_bounds.has_value());
  EXPECT_EQ(*back.input_bounds, *zone.input_bounds);
  EXPECT_FALSE(zone_from_json(to_json(WorkingZone(zone.omega))).input_bounds);
}

TEST(SerializationTest, NetworkRoundTripIsBitExact) {
  TempDir dir("serialization");
  const Dataset d = testing::two_cluster_dataset();
  const ElmNetwork net = fit_output_weights(init_elm(2, 2, 20, 77), d);
  save_json(dir.file("net.json"), to_json(net));
  const ElmNetwork back = network_from_json(load_json(dir.file("net.json")));
  EXPECT_EQ(back, net);
  for (std::size_t i = 0; i < d.size(); ++i) ASSERT_EQ(back.predict(d.z(i)), net.predict(d.z(i)));
}

TEST(SerializationTest, NetworkJsonLayout) {
  const Json j = to_json(ElmNetwork(Matrix::Identity(2, 2), vec({0.5, -0.5}), Matrix::Ones(1, 2), 9));
  EXPECT_EQ(j.at("activation"), "relu");
  EXPECT_EQ(j.at("seed"), 9);
  EXPECT_EQ(j.at("w_in").at("rows"), 2);
  EXPECT_EQ(j.at("w_in").at("data"), Json({1.0, 0.0, 0.0, 1.0}));
}

TEST(SerializationTest, ModelRoundTripIsBitExact) {
  TempDir dir("serialization");
  const HybridModel m = fitted_model(1e-4);
  save_json(dir.file("model.json"), to_json(m));
  const HybridModel back = model_from_json(load_json(dir.file("model.json")));
  ASSERT_EQ(back.regions().size(), m.regions().size());
  for (std::size_t r = 0; r < m.regions().size(); ++r) {
    EXPECT_EQ(back.regions()[r].boxes, m.regions()[r].boxes);
    EXPECT_EQ(back.networks()[r], m.networks()[r]);
  }
  EXPECT_EQ(back.gamma(), m.gamma());
  EXPECT_EQ(back.epsilon(), m.epsilon());
  EXPECT_EQ(back.elm().seed, m.elm().seed);
  EXPECT_EQ(to_json(back).dump(), to_json(m).dump());
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const Vector x = testing::uniform_point(rng, testing::unit_square());
    ASSERT_EQ(back.step(x, Vector(0)), m.step(x, Vector(0)));
  }
}

TEST(SerializationTest, InfiniteThresholdSurvives) {
  const HybridModel m = fitted_model(std::numeric_limits<double>::infinity());
  const Json j = to_json(m);
  EXPECT_EQ(j.at("gamma"), "inf");
  EXPECT_EQ(model_from_json(Json::parse(j.dump())).gamma(),
            std::numeric_limits<double>::infinity());
  EXPECT_THROW(threshold_from_json(Json("big")), DataError);
}

TEST(SerializationTest, TransitionSystemRoundTrip) {
  const TransitionSystem ts(WorkingZone(testing::unit_square()),
                            {testing::box({0, 0}, {0.5, 1}), testing::box({0.5, 0}, {1, 1})},
                            true, {0, 1, 1, 1, 0, 0, 0, 0, 1}, 2);
  const Json j = to_json(ts);
  EXPECT_EQ(j.at("format"), "transition-system");
  EXPECT_EQ(j.at("size"), 3);
  const TransitionSystem back = transition_system_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.relation(), ts.relation());
  EXPECT_EQ(back.cells(), ts.cells());
  EXPECT_EQ(back.initial(), 2);
  EXPECT_TRUE(back.has_sink());
}

TEST(SerializationTest, PartitionSetLayout) {
  const PartitionSet p = me_partition(WorkingZone(testing::unit_square()),
                                      testing::two_cluster_dataset(), 0.05);
  const Json j = to_json(p);
  EXPECT_EQ(j.at("boxes").size(), p.size());
  EXPECT_EQ(j.at("counts").get<std::vector<std::size_t>>(), p.counts());
  EXPECT_EQ(j.at("epsilon"), 0.05);
  EXPECT_TRUE(j.contains("omega"));
}

TEST(SerializationTest, ReachResultVerbosity) {
  const HybridModel m = fitted_model(1e-4);
  const ReachResult r = cell_successor_box(m, testing::unit_square());
  EXPECT_FALSE(to_json(r, false).contains("pieces"));
  EXPECT_EQ(to_json(r, true).at("pieces").size(), r.pieces.size());
}

TEST(SerializationTest, RejectsMalformedDocuments) {
  TempDir dir("serialization");
  Json j = to_json(fitted_model(1e-4));
  Json wrong_format = j;
  wrong_format["format"] = "something-else";
  EXPECT_THROW(model_from_json(wrong_format), DataError);
  Json no_version = j;
  no_version.erase("version");
  EXPECT_THROW(model_from_json(no_version), DataError);
  Json bad_shape = j;
  bad_shape["networks"][0]["w_in"]["rows"] = 3;
  EXPECT_THROW(model_from_json(bad_shape), DataError);
  Json bad_region = j;
  bad_region["regions"][0]["id"] = 7;
  EXPECT_THROW(model_from_json(bad_region), DataError);

  std::ofstream(dir.file("broken.json")) << "{ not json";
  EXPECT_THROW(load_json(dir.file("broken.json")), DataError);
  try {
    load_json(dir.file("absent.json"));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("absent.json"), std::string::npos);
  }
}

}  // namespace
}  // namespace nhs
