#pragma once

#include <string>

#include <json.hpp>

#include "nhs/abstraction.h"
#include "nhs/box.h"
#include "nhs/elm.h"
#include "nhs/entropy_partition.h"
#include "nhs/hybrid_model.h"
#include "nhs/interval_reach.h"

namespace nhs {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kTransitionSystemFormatVersion = 1;

// Matrices are written as {"rows", "cols", "data"} with data row-major.
// Doubles are written in shortest round-trip form, so a reload reproduces
// every weight bit for bit.

// Thresholds may be infinite ("merge everything"); JSON has no infinity, so
// it is written as the string "inf".
Json threshold_json(double value);
double threshold_from_json(const Json& j);

Json to_json(const Box& b);
Box box_from_json(const Json& j);

Json to_json(const WorkingZone& zone);
WorkingZone zone_from_json(const Json& j);

Json to_json(const PartitionSet& parts);

Json to_json(const ElmNetwork& net);
ElmNetwork network_from_json(const Json& j);

Json to_json(const HybridModel& model);
HybridModel model_from_json(const Json& j);

Json to_json(const TransitionSystem& ts);
TransitionSystem transition_system_from_json(const Json& j);

/// Pieces are included only when `verbose`.
Json to_json(const ReachResult& reach, bool verbose);

/// Parse/IO failures are reported as DataError naming the path.
Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);
void save_text(const std::string& path, const std::string& text);

}  // namespace nhs
