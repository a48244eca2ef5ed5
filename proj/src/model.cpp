#include "vmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "vmc/error.hpp"

namespace vmc {

const char* resourceName(std::size_t r) {
  static constexpr const char* kNames[] = {"cpu", "mem", "net"};
  return r < kResourceCount ? kNames[r] : "?";
}

bool ResourceVector::valid() const {
  for (std::size_t r = 0; r < kResourceCount; ++r) {
    const double x = (*this)[r];
    if (!std::isfinite(x) || x < 0.0) return false;
  }
  return true;
}

const VirtualMachine* findVm(std::span<const VirtualMachine> vms, VmId id) {
  if (id >= 0 && static_cast<std::size_t>(id) < vms.size() && vms[id].id == id) {
    return &vms[id];
  }
  auto it = std::lower_bound(vms.begin(), vms.end(), id,
                             [](const VirtualMachine& v, VmId x) { return v.id < x; });
  if (it != vms.end() && it->id == id) return &*it;
  // Unsorted input: fall back to a scan.
  auto lin = std::find_if(vms.begin(), vms.end(), [id](const auto& v) { return v.id == id; });
  return lin == vms.end() ? nullptr : &*lin;
}

ResourceVector utilization(const PhysicalMachine& pm, std::span<const VirtualMachine> vms) {
  ResourceVector sum;
  for (VmId id : pm.hosted) {
    const VirtualMachine* vm = findVm(vms, id);
    if (vm == nullptr) {
      throw ValidationError(fmt::format("PM {} hosts unknown VM {}", pm.id, id));
    }
    sum += vm->demand;
  }
  return sum;
}

ResourceVector normalize(const ResourceVector& used, const ResourceVector& capacity) {
  ResourceVector out;
  for (std::size_t r = 0; r < kResourceCount; ++r) {
    if (!(capacity[r] > 0.0)) {
      throw ConfigError(fmt::format("capacity of resource '{}' must be positive", resourceName(r)));
    }
    out[r] = used[r] / capacity[r];
  }
  return out;
}

ResourceVector normalizedUtilization(const PhysicalMachine& pm,
                                     std::span<const VirtualMachine> vms) {
  return normalize(utilization(pm, vms), pm.capacity);
}

double powerFromCpuFraction(double cpuFraction, const PowerModel& model) {
  const double u = std::clamp(cpuFraction, 0.0, 1.0);
  return model.idleWatts + (model.fullWatts - model.idleWatts) * u;
}

double powerConsumption(const PhysicalMachine& pm, std::span<const VirtualMachine> vms,
                        const PowerModel& model) {
  if (!pm.active()) return 0.0;
  return powerFromCpuFraction(normalizedUtilization(pm, vms).cpu, model);
}

double wastageFromFractions(const ResourceVector& usedFractions) {
  double mean = 0.0;
  double total = 0.0;
  for (std::size_t r = 0; r < kResourceCount; ++r) {
    mean += 1.0 - usedFractions[r];
    total += usedFractions[r];
  }
  mean /= kResourceCount;
  double var = 0.0;
  for (std::size_t r = 0; r < kResourceCount; ++r) {
    const double d = (1.0 - usedFractions[r]) - mean;
    var += d * d;
  }
  var /= kResourceCount;
  if (total <= 0.0) return 0.0;
  return (std::sqrt(var) + kWastageEpsilon) / total;
}

double resourceWastage(const PhysicalMachine& pm, std::span<const VirtualMachine> vms) {
  if (!pm.active()) return 0.0;
  return wastageFromFractions(normalizedUtilization(pm, vms));
}

double packingEfficiency(std::size_t vmCount, std::size_t activePmCount) {
  if (vmCount == 0 || activePmCount == 0) return 0.0;
  return static_cast<double>(vmCount) / static_cast<double>(activePmCount);
}

double packingEfficiency(std::span<const PhysicalMachine> pms) {
  std::size_t vms = 0;
  std::size_t active = 0;
  for (const auto& pm : pms) {
    vms += pm.hosted.size();
    active += pm.active() ? 1 : 0;
  }
  return packingEfficiency(vms, active);
}

double utilizationGain(const ResourceVector& used, const ResourceVector& capacity,
                       const ResourceVector& demand, double omega) {
  const ResourceVector after = used + demand;
  if (!after.fitsWithin(capacity)) {
    throw ValidationError("utilization gain requested for an infeasible placement");
  }
  const ResourceVector frac = normalize(after, capacity);
  double mean = 0.0;
  for (std::size_t r = 0; r < kResourceCount; ++r) mean += frac[r];
  mean /= kResourceCount;
  double norm2 = 0.0;
  for (std::size_t r = 0; r < kResourceCount; ++r) {
    const double d = frac[r] - mean;
    norm2 += d * d;
  }
  const double imbalance = std::max(std::sqrt(norm2), kImbalanceFloor);
  const double balance = -std::log10(imbalance) / 4.0;
  const double gain = omega * balance + (1.0 - omega) * mean;
  return std::clamp(gain, 0.0, 1.0);
}

double utilizationGain(const PhysicalMachine& pm, std::span<const VirtualMachine> vms,
                       const VirtualMachine& candidate, double omega) {
  return utilizationGain(utilization(pm, vms), pm.capacity, candidate.demand, omega);
}

double objectiveValue(int releasedPms, double mo, const ObjectiveParams& params) {
  if (releasedPms <= 0) return 0.0;
  return std::pow(static_cast<double>(releasedPms), params.phi) /
         std::max(mo, params.epsilonMO);
}

std::vector<PhysicalMachine> applyMap(std::span<const PhysicalMachine> pms,
                                      const MigrationMap& mm) {
  std::vector<PhysicalMachine> out(pms.begin(), pms.end());
  std::map<PmId, std::size_t> index;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].hosted.clear();
    index[out[i].id] = i;
  }
  for (const auto& m : mm.entries) {
    auto it = index.find(m.target);
    if (it == index.end()) {
      throw ValidationError(fmt::format("VM {} targets PM {} outside the cluster", m.vm, m.target));
    }
    out[it->second].hosted.push_back(m.vm);
  }
  for (auto& pm : out) std::sort(pm.hosted.begin(), pm.hosted.end());
  return out;
}

int countReleased(std::span<const PhysicalMachine> before,
                  std::span<const PhysicalMachine> after) {
  int released = 0;
  const std::size_t n = std::min(before.size(), after.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (before[i].active() && !after[i].active()) ++released;
  }
  return released;
}

MigrationMap identityMap(std::span<const VirtualMachine> vms) {
  MigrationMap mm;
  mm.entries.reserve(vms.size());
  for (const auto& v : vms) mm.entries.push_back({v.id, v.hostPm});
  std::sort(mm.entries.begin(), mm.entries.end(),
            [](const Migration& a, const Migration& b) { return a.vm < b.vm; });
  return mm;
}

std::string Violation::describe() const {
  switch (kind) {
    case Kind::kOverCapacity:
      return fmt::format("PM {} over capacity on {}", pm, resourceName(resource));
    case Kind::kMissingVm:
      return fmt::format("VM {} has no target", vm);
    case Kind::kDuplicateVm:
      return fmt::format("VM {} assigned more than once", vm);
    case Kind::kUnknownVm:
      return fmt::format("VM {} is not part of the cluster", vm);
    case Kind::kUnknownPm:
      return fmt::format("VM {} targets PM {} outside the cluster", vm, pm);
  }
  return "?";
}

std::string ValidationReport::describe() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.describe();
  }
  return out.empty() ? "ok" : out;
}

ValidationReport validateMap(const MigrationMap& mm, std::span<const VirtualMachine> vms,
                             std::span<const PhysicalMachine> pms) {
  ValidationReport report;
  std::map<VmId, int> seen;
  for (const auto& v : vms) seen[v.id] = 0;
  std::map<PmId, ResourceVector> load;
  for (const auto& pm : pms) load[pm.id] = {};

  for (const auto& m : mm.entries) {
    auto vit = seen.find(m.vm);
    if (vit == seen.end()) {
      report.violations.push_back({Violation::Kind::kUnknownVm, m.vm, m.target, -1});
      continue;
    }
    if (++vit->second == 2) {
      report.violations.push_back({Violation::Kind::kDuplicateVm, m.vm, -1, -1});
    }
    auto pit = load.find(m.target);
    if (pit == load.end()) {
      report.violations.push_back({Violation::Kind::kUnknownPm, m.vm, m.target, -1});
      continue;
    }
    pit->second += findVm(vms, m.vm)->demand;
  }
  for (const auto& [id, count] : seen) {
    if (count == 0) report.violations.push_back({Violation::Kind::kMissingVm, id, -1, -1});
  }
  for (const auto& pm : pms) {
    const ResourceVector& used = load[pm.id];
    for (std::size_t r = 0; r < kResourceCount; ++r) {
      // Relative slack absorbs summation-order rounding only.
      if (used[r] > pm.capacity[r] * (1.0 + 1e-12)) {
        report.violations.push_back(
            {Violation::Kind::kOverCapacity, -1, pm.id, static_cast<int>(r)});
      }
    }
  }
  return report;
}

}  // namespace vmc
