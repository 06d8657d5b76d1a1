#include "nhs/serialization.h"

#include <fstream>
#include <limits>
#include <sstream>

#include "nhs/error.h"

namespace nhs {
namespace {

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw DataError("expected a numeric array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

Json matrix_json(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const Json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols)) {
    throw DataError("matrix data does not match its shape");
  }
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
  }
  return m;
}

void expect_format(const Json& j, const char* format, int version) {
  if (!j.is_object() || j.value("format", "") != format) {
    throw DataError(std::string("not a ") + format + " document");
  }
  if (!j.contains("version") || j.at("version").get<int>() != version) {
    throw DataError(std::string(format) + ": unsupported or missing version");
  }
}

// Rewraps library and validation errors so callers see one error type.
template <typename Fn>
auto as_data_error(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json threshold_json(double value) {
  if (value == std::numeric_limits<double>::infinity()) return "inf";
  return value;
}

double threshold_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
    throw DataError("threshold must be a number or \"inf\", got \"" + text + "\"");
  }
  if (!j.is_number()) throw DataError("threshold must be a number or \"inf\"");
  return j.get<double>();
}

Json to_json(const Box& b) {
  return Json{{"lo", vector_json(b.lo())}, {"hi", vector_json(b.hi())}};
}

Box box_from_json(const Json& j) {
  return as_data_error("box", [&] {
    return Box::Closed(vector_from_json(j.at("lo")), vector_from_json(j.at("hi")));
  });
}

Json to_json(const WorkingZone& zone) {
  Json out{{"omega", to_json(zone.omega)}};
  out["input_bounds"] = zone.input_bounds ? to_json(*zone.input_bounds) : Json();
  return out;
}

WorkingZone zone_from_json(const Json& j) {
  return as_data_error("working zone", [&] {
    std::optional<Box> inputs;
    if (j.contains("input_bounds") && !j.at("input_bounds").is_null()) {
      inputs = box_from_json(j.at("input_bounds"));
    }
    return WorkingZone(box_from_json(j.at("omega")), std::move(inputs));
  });
}

Json to_json(const PartitionSet& parts) {
  Json boxes = Json::array();
  for (const Box& b : parts.boxes) boxes.push_back(to_json(b));
  return Json{{"omega", to_json(parts.omega)},
              {"epsilon", threshold_json(parts.epsilon)},
              {"boxes", std::move(boxes)},
              {"counts", parts.counts()}};
}

Json to_json(const ElmNetwork& net) {
  return Json{{"activation", "relu"},
              {"n_in", net.n_in()},
              {"n_out", net.n_out()},
              {"hidden_count", net.hidden_count()},
              {"seed", net.seed()},
              {"w_in", matrix_json(net.w_in())},
              {"b_in", vector_json(net.b_in())},
              {"w_out", matrix_json(net.w_out())}};
}

ElmNetwork network_from_json(const Json& j) {
  return as_data_error("network", [&] {
    if (j.value("activation", "relu") != "relu") {
      throw DataError("network: only ReLU activation is supported");
    }
    ElmNetwork net(matrix_from_json(j.at("w_in")), vector_from_json(j.at("b_in")),
                   matrix_from_json(j.at("w_out")),
                   j.at("seed").get<std::uint64_t>());
    if (net.n_in() != j.at("n_in").get<int>() ||
        net.n_out() != j.at("n_out").get<int>() ||
        net.hidden_count() != j.at("hidden_count").get<int>()) {
      throw DataError("network: declared dimensions disagree with the matrices");
    }
    return net;
  });
}

Json to_json(const HybridModel& model) {
  Json regions = Json::array();
  for (const Region& r : model.regions()) {
    Json boxes = Json::array();
    for (const Box& b : r.boxes) boxes.push_back(to_json(b));
    regions.push_back(Json{{"id", r.id}, {"boxes", std::move(boxes)}});
  }
  Json networks = Json::array();
  for (const ElmNetwork& n : model.networks()) networks.push_back(to_json(n));
  return Json{{"format", "neural-hybrid-model"},
              {"version", kModelFormatVersion},
              {"n_x", model.n_x()},
              {"n_u", model.n_u()},
              {"zone", to_json(model.zone())},
              {"epsilon", threshold_json(model.epsilon())},
              {"gamma", threshold_json(model.gamma())},
              {"elm", Json{{"hidden_count", model.elm().hidden_count},
                           {"seed", model.elm().seed},
                           {"ridge", model.elm().ridge}}},
              {"regions", std::move(regions)},
              {"networks", std::move(networks)}};
}

HybridModel model_from_json(const Json& j) {
  expect_format(j, "neural-hybrid-model", kModelFormatVersion);
  return as_data_error("model", [&] {
    std::vector<Region> regions;
    for (const Json& r : j.at("regions")) {
      Region region{r.at("id").get<int>(), {}};
      for (const Json& b : r.at("boxes")) region.boxes.push_back(box_from_json(b));
      regions.push_back(std::move(region));
    }
    std::vector<ElmNetwork> networks;
    for (const Json& n : j.at("networks")) networks.push_back(network_from_json(n));
    const Json& elm = j.at("elm");
    ElmTemplate tmpl{elm.at("hidden_count").get<int>(),
                     elm.at("seed").get<std::uint64_t>(),
                     elm.at("ridge").get<double>()};
    HybridModel model(zone_from_json(j.at("zone")), std::move(regions),
                      std::move(networks), tmpl, threshold_from_json(j.at("gamma")),
                      threshold_from_json(j.at("epsilon")));
    if (model.n_x() != j.at("n_x").get<int>() || model.n_u() != j.at("n_u").get<int>()) {
      throw DataError("model: declared n_x/n_u disagree with the zone");
    }
    return model;
  });
}

Json to_json(const TransitionSystem& ts) {
  Json cells = Json::array();
  for (const Box& c : ts.cells()) cells.push_back(to_json(c));
  Json relation = Json::array();
  for (std::uint8_t bit : ts.relation()) relation.push_back(static_cast<int>(bit));
  Json out{{"format", "transition-system"},
           {"version", kTransitionSystemFormatVersion},
           {"zone", to_json(ts.zone())},
           {"cells", std::move(cells)},
           {"has_sink", ts.has_sink()},
           {"size", ts.size()},
           {"relation", std::move(relation)}};
  out["initial"] = ts.initial() ? Json(*ts.initial()) : Json();
  return out;
}

TransitionSystem transition_system_from_json(const Json& j) {
  expect_format(j, "transition-system", kTransitionSystemFormatVersion);
  return as_data_error("transition system", [&] {
    std::vector<Box> cells;
    for (const Json& c : j.at("cells")) cells.push_back(box_from_json(c));
    std::vector<std::uint8_t> relation;
    for (const Json& bit : j.at("relation")) {
      const int v = bit.get<int>();
      if (v != 0 && v != 1) throw DataError("relation entries must be 0 or 1");
      relation.push_back(static_cast<std::uint8_t>(v));
    }
    std::optional<int> initial;
    if (j.contains("initial") && !j.at("initial").is_null()) {
      initial = j.at("initial").get<int>();
    }
    TransitionSystem ts(zone_from_json(j.at("zone")), std::move(cells),
                        j.at("has_sink").get<bool>(), std::move(relation), initial);
    if (ts.size() != j.at("size").get<std::size_t>()) {
      throw DataError("transition system: declared size disagrees with cells");
    }
    return ts;
  });
}

Json to_json(const ReachResult& reach, bool verbose) {
  Json out{{"output", to_json(reach.output)}, {"piece_count", reach.pieces.size()}};
  if (verbose) {
    Json pieces = Json::array();
    for (const ReachPiece& p : reach.pieces) {
      pieces.push_back(Json{{"region", p.region_id},
                            {"input", to_json(p.input)},
                            {"output", to_json(p.output)}});
    }
    out["pieces"] = std::move(pieces);
  }
  return out;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open for writing");
  out << text;
  if (!out) throw DataError(path + ": write failed");
}

void save_json(const std::string& path, const Json& j) {
  save_text(path, j.dump(2) + "\n");
}

}  // namespace nhs
