#include "nhs/hybrid_model.h"

#include <chrono>
#include <limits>

#include "nhs/error.h"
#include "nhs/parallel.h"
#include "nhs/random.h"

namespace nhs {

HybridModel::HybridModel(WorkingZone zone, std::vector<Region> regions,
                         std::vector<ElmNetwork> networks, ElmTemplate elm,
                         double gamma, double epsilon)
    : zone_(std::move(zone)), regions_(std::move(regions)),
      networks_(std::move(networks)), elm_(elm), gamma_(gamma),
      epsilon_(epsilon) {
  if (regions_.empty()) throw UsageError("HybridModel: no regions");
  if (regions_.size() != networks_.size()) {
    throw UsageError("HybridModel: need exactly one network per region");
  }
  for (std::size_t i = 0; i < regions_.size(); ++i) {
    if (regions_[i].id != static_cast<int>(i) + 1) {
      throw UsageError("HybridModel: region ids must be 1..N in order");
    }
    if (regions_[i].boxes.empty()) {
      throw UsageError("HybridModel: region " + std::to_string(i + 1) +
                       " has no boxes");
    }
    for (const Box& b : regions_[i].boxes) {
      if (b.dim() != n_x() || b.is_degenerate() || !box_subset(b, zone_.omega)) {
        throw UsageError("HybridModel: region box outside the working zone");
      }
    }
    if (networks_[i].n_in() != n_x() + n_u() || networks_[i].n_out() != n_x()) {
      throw UsageError("HybridModel: network dimensions do not match the zone");
    }
  }
}

const ElmNetwork& HybridModel::network(int region_id) const {
  if (region_id < 1 || region_id > static_cast<int>(networks_.size())) {
    throw UsageError("HybridModel: unknown region id " + std::to_string(region_id));
  }
  return networks_[region_id - 1];
}

HybridModel::Location HybridModel::locate(const Vector& x) const {
  if (x.size() != n_x()) throw UsageError("locate: state dimension mismatch");
  for (const Region& r : regions_) {
    for (const Box& b : r.boxes) {
      if (box_contains(b, x, zone_.omega)) return {r.id, false};
    }
  }
  Location best{regions_.front().id, true};
  double best_distance = std::numeric_limits<double>::infinity();
  for (const Region& r : regions_) {
    for (const Box& b : r.boxes) {
      const double d = linf_distance(b, x);
      if (d < best_distance) {
        best_distance = d;
        best.region_id = r.id;
      }
    }
  }
  best.out_of_zone = !box_subset(Box::Point(x), zone_.omega);
  return best;
}

Vector HybridModel::step(const Vector& x, const Vector& u) const {
  if (x.size() != n_x() || u.size() != n_u()) {
    throw UsageError("step: state/input dimension mismatch");
  }
  Vector z(n_x() + n_u());
  z << x, u;
  return network(locate(x).region_id).predict(z);
}

std::uint64_t candidate_seed(std::uint64_t seed, std::size_t outer,
                             std::size_t inner) {
  return derive_seed(derive_seed(seed, outer), inner);
}

std::uint64_t region_seed(std::uint64_t seed, std::size_t region_index) {
  return derive_seed(seed ^ 0xA5A5A5A5A5A5A5A5ULL, region_index);
}

namespace {

struct WorkingRegion {
  std::vector<Box> boxes;
  std::vector<std::size_t> samples;
  std::vector<std::size_t> partitions;
};

std::vector<std::size_t> concat(const std::vector<std::size_t>& a,
                                const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

MergeResult merge_and_learn(const PartitionSet& parts, const Dataset& data,
                            const ElmTemplate& elm, double gamma,
                            const MergeOptions& options) {
  if (!(gamma >= 0.0)) throw UsageError("merge_and_learn: gamma must be >= 0");
  if (parts.size() == 0) throw UsageError("merge_and_learn: empty partition set");
  if (parts.omega.dim() != data.n_x()) {
    throw UsageError("merge_and_learn: partitions and data differ in n_x");
  }

  std::vector<WorkingRegion> work;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    work.push_back({{parts.boxes[i]}, parts.assignments[i], {i}});
  }

  std::size_t candidate_fits = 0;
  for (std::size_t outer = 0; outer < work.size(); ++outer) {
    std::size_t inner = outer + 1;
    while (inner < work.size()) {
      const auto pooled = concat(work[outer].samples, work[inner].samples);
      bool merge = true;
      if (!pooled.empty()) {
        const Dataset joint = data.subset(pooled);
        const ElmNetwork candidate = fit_output_weights(
            init_elm(data.n_in(), data.n_x(), elm.hidden_count,
                     candidate_seed(elm.seed, outer, inner)),
            joint, elm.ridge);
        ++candidate_fits;
        merge = mse(candidate, joint) <= gamma;
      }
      if (!merge) {
        ++inner;
        continue;
      }
      WorkingRegion& target = work[outer];
      WorkingRegion& absorbed = work[inner];
      target.boxes.insert(target.boxes.end(), absorbed.boxes.begin(),
                          absorbed.boxes.end());
      target.samples = pooled;
      target.partitions.insert(target.partitions.end(),
                               absorbed.partitions.begin(),
                               absorbed.partitions.end());
      work.erase(work.begin() + static_cast<std::ptrdiff_t>(inner));
    }
  }

  const std::size_t n_regions = work.size();
  std::vector<std::optional<ElmNetwork>> networks(n_regions);
  std::vector<double> region_mse(n_regions, 0.0);
  std::vector<double> fit_ms(n_regions, 0.0);
  parallel_for(n_regions, options.threads, [&](std::size_t r) {
    ElmNetwork net = init_elm(data.n_in(), data.n_x(), elm.hidden_count,
                              region_seed(elm.seed, r));
    if (work[r].samples.empty()) {
      networks[r] = std::move(net);
      return;
    }
    const Dataset local = data.subset(work[r].samples);
    const auto start = std::chrono::steady_clock::now();
    ElmNetwork fitted = fit_output_weights(net, local, elm.ridge);
    const auto stop = std::chrono::steady_clock::now();
    fit_ms[r] = std::chrono::duration<double, std::milli>(stop - start).count();
    region_mse[r] = mse(fitted, local);
    networks[r] = std::move(fitted);
  });

  std::vector<Region> regions;
  std::vector<ElmNetwork> nets;
  std::vector<int> partition_region(parts.size(), 0);
  std::vector<std::string> warnings;
  std::vector<std::size_t> region_samples;
  for (std::size_t r = 0; r < n_regions; ++r) {
    const int id = static_cast<int>(r) + 1;
    region_samples.push_back(work[r].samples.size());
    regions.push_back({id, work[r].boxes});
    nets.push_back(std::move(*networks[r]));
    for (std::size_t p : work[r].partitions) partition_region[p] = id;
    if (work[r].samples.empty()) {
      warnings.push_back("region " + std::to_string(id) +
                         " has no samples; its network is the zero map");
    }
  }

  std::optional<Box> input_bounds = options.input_bounds;
  if (data.n_u() > 0 && !input_bounds) {
    const Matrix u = data.inputs().rightCols(data.n_u());
    input_bounds = Box::Closed(u.colwise().minCoeff().transpose(),
                               u.colwise().maxCoeff().transpose());
  }
  if (data.n_u() == 0) input_bounds.reset();

  HybridModel model(WorkingZone(parts.omega, input_bounds), std::move(regions),
                    std::move(nets), elm, gamma, parts.epsilon);
  return {std::move(model), parts.size(), std::move(partition_region),
          candidate_fits, std::move(region_samples), std::move(region_mse), std::move(fit_ms),
          std::move(warnings)};
}

SimulationTrace simulate(const HybridModel& model, const Vector& x0,
                         const std::vector<Vector>& inputs, std::size_t steps) {
  if (model.n_u() > 0 && inputs.size() < steps) {
    throw UsageError("simulate: fewer inputs than steps");
  }
  SimulationTrace trace;
  trace.states.push_back(x0);
  const Vector no_input(0);
  auto note_zone = [&](std::size_t k) {
    if (!box_subset(Box::Point(trace.states.back()), model.zone().omega)) {
      trace.out_of_zone_steps.push_back(k);
    }
  };
  if (!x0.allFinite()) {
    trace.truncated = true;
    trace.diagnostic = "initial state is not finite";
    return trace;
  }
  note_zone(0);
  for (std::size_t k = 0; k < steps; ++k) {
    const Vector& u = model.n_u() > 0 ? inputs[k] : no_input;
    Vector next = model.step(trace.states.back(), u);
    if (!next.allFinite()) {
      trace.truncated = true;
      trace.diagnostic = "non-finite state at step " + std::to_string(k + 1);
      break;
    }
    trace.states.push_back(std::move(next));
    note_zone(k + 1);
  }
  return trace;
}

}  // namespace nhs
