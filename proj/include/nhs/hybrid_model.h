#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nhs/box.h"
#include "nhs/dataset.h"
#include "nhs/elm.h"
#include "nhs/entropy_partition.h"

namespace nhs {

inline constexpr double kDefaultGamma = 1.5e-5;
inline constexpr int kDefaultHiddenCount = 20;

/// Architecture shared by every subnetwork.
struct ElmTemplate {
  int hidden_count = kDefaultHiddenCount;
  std::uint64_t seed = 0;
  double ridge = kDefaultRidge;
};

/// A merged partition: a union of disjoint boxes, id in 1..N.
struct Region {
  int id = 0;
  std::vector<Box> boxes;
};

/// Neural hybrid system x(k+1) = Φ_δ(x)(x(k), u(k)) over a working zone.
class HybridModel {
 public:
  struct Location {
    int region_id;
    bool out_of_zone;
  };

  HybridModel(WorkingZone zone, std::vector<Region> regions,
              std::vector<ElmNetwork> networks, ElmTemplate elm, double gamma,
              double epsilon);

  const WorkingZone& zone() const { return zone_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<ElmNetwork>& networks() const { return networks_; }
  const ElmNetwork& network(int region_id) const;
  const ElmTemplate& elm() const { return elm_; }
  double gamma() const { return gamma_; }
  double epsilon() const { return epsilon_; }
  int n_x() const { return zone_.n_x(); }
  int n_u() const { return zone_.n_u(); }

  /// Region holding x under the half-open rule. Outside Ω, the region at
  /// minimal L∞ distance (lowest id on ties) with out_of_zone set.
  Location locate(const Vector& x) const;

  /// One step of the switched dynamics. `u` is empty for autonomous systems.
  Vector step(const Vector& x, const Vector& u) const;

 private:
  WorkingZone zone_;
  std::vector<Region> regions_;
  std::vector<ElmNetwork> networks_;
  ElmTemplate elm_;
  double gamma_;
  double epsilon_;
};

struct MergeResult {
  HybridModel model;
  std::size_t partitions_before = 0;
  /// Region ids (1-based) of the original partitions, in partition order.
  std::vector<int> partition_region;
  std::size_t candidate_fits = 0;
  /// Per region: sample count, training MSE of the final network and its
  /// fit time (0 for regions without samples).
  std::vector<std::size_t> region_samples;
  std::vector<double> region_mse;
  std::vector<double> fit_ms;
  std::vector<std::string> warnings;
};

struct MergeOptions {
  /// Workers for the final per-region fits (0 = all cores).
  unsigned threads = 1;
  /// Input bounds 𝒰 recorded in the model; derived from the data when
  /// absent and n_u > 0.
  std::optional<Box> input_bounds;
};

/// Greedy merge of partitions whose pooled data one fresh network fits with
/// MSE <= gamma, followed by one final fit per surviving region.
///
/// The sweep runs N over regions in ascending order and n over the regions
/// after N. A successful merge absorbs n into N, compacts the indices and the
/// sweep continues with the enlarged region. Candidate networks are seeded
/// from (seed, N, n); final networks from (seed, region index). A pair whose
/// pooled data is empty counts as mergeable.
MergeResult merge_and_learn(const PartitionSet& parts, const Dataset& data,
                            const ElmTemplate& elm, double gamma,
                            const MergeOptions& options = {});

/// Seeds used by merge_and_learn, exposed for reproducibility checks.
std::uint64_t candidate_seed(std::uint64_t seed, std::size_t outer,
                             std::size_t inner);
std::uint64_t region_seed(std::uint64_t seed, std::size_t region_index);

struct SimulationTrace {
  std::vector<Vector> states;
  /// Indices k for which x_k lies outside Ω.
  std::vector<std::size_t> out_of_zone_steps;
  bool truncated = false;
  std::string diagnostic;
};

/// Iterates the model from x0 for `steps` steps. `inputs[k]` drives step k
/// and must have at least `steps` entries unless n_u = 0. Stops early on a
/// non-finite state.
SimulationTrace simulate(const HybridModel& model, const Vector& x0,
                         const std::vector<Vector>& inputs, std::size_t steps);

}  // namespace nhs
