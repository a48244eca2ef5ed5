#pragma once

#include <span>
#include <string>
#include <vector>

#include "vmc/resource.hpp"

namespace vmc {

/// Locate a VM by id. Works on dense (vms[i].id == i) and on id-sorted spans.
/// Returns nullptr when the id is absent.
const VirtualMachine* findVm(std::span<const VirtualMachine> vms, VmId id);

/// Sum of hosted demands. Throws ValidationError on an unknown VM id.
ResourceVector utilization(const PhysicalMachine& pm, std::span<const VirtualMachine> vms);

/// used / capacity per resource. Throws ConfigError on a zero capacity.
ResourceVector normalize(const ResourceVector& used, const ResourceVector& capacity);

ResourceVector normalizedUtilization(const PhysicalMachine& pm,
                                     std::span<const VirtualMachine> vms);

/// Linear-in-CPU server power model.
struct PowerModel {
  double idleWatts = 162.0;
  double fullWatts = 215.0;
};

double powerFromCpuFraction(double cpuFraction, const PowerModel& model = {});

/// Watts drawn by a PM; 0 when it hosts nothing.
double powerConsumption(const PhysicalMachine& pm, std::span<const VirtualMachine> vms,
                        const PowerModel& model = {});

inline constexpr double kWastageEpsilon = 0.0001;

/// (stddev of remaining fractions + eps) / (sum of used fractions).
double wastageFromFractions(const ResourceVector& usedFractions);

/// Normalized resource wastage of an active PM; 0 for an empty one.
double resourceWastage(const PhysicalMachine& pm, std::span<const VirtualMachine> vms);

/// VMs per active PM; 0 when nothing is hosted.
double packingEfficiency(std::span<const PhysicalMachine> pms);
double packingEfficiency(std::size_t vmCount, std::size_t activePmCount);

inline constexpr double kImbalanceFloor = 1e-4;

/// Utilization gain of a PM with `used` load after adding `demand`:
///   omega * (-log10 max(|RIV|, 1e-4)) / 4 + (1 - omega) * mean fraction
/// where RIV is the deviation of each normalized utilization from their mean.
/// Clamped to [0, 1]. Throws ValidationError when the VM does not fit.
double utilizationGain(const ResourceVector& used, const ResourceVector& capacity,
                       const ResourceVector& demand, double omega);

double utilizationGain(const PhysicalMachine& pm, std::span<const VirtualMachine> vms,
                       const VirtualMachine& candidate, double omega);

struct ObjectiveParams {
  double phi = 1.0;
  double epsilonMO = 1e-6;
};

/// nReleased^phi / max(mo, epsilonMO), and exactly 0 when nothing is released.
double objectiveValue(int releasedPms, double mo, const ObjectiveParams& params = {});

/// Placement induced by a map: copies `pms` and rebuilds every hosted list.
/// Throws ValidationError when an entry targets a PM outside `pms`.
std::vector<PhysicalMachine> applyMap(std::span<const PhysicalMachine> pms,
                                      const MigrationMap& mm);

/// PMs hosting something in `before` and nothing in `after` (same order).
int countReleased(std::span<const PhysicalMachine> before,
                  std::span<const PhysicalMachine> after);

/// The do-nothing map for a set of VMs.
MigrationMap identityMap(std::span<const VirtualMachine> vms);

struct Violation {
  enum class Kind { kOverCapacity, kMissingVm, kDuplicateVm, kUnknownVm, kUnknownPm };
  Kind kind;
  VmId vm = -1;
  PmId pm = -1;
  int resource = -1;

  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

/// Checks that every VM of the cluster appears exactly once, that targets are
/// cluster PMs and that no PM exceeds any capacity under the induced placement.
ValidationReport validateMap(const MigrationMap& mm, std::span<const VirtualMachine> vms,
                             std::span<const PhysicalMachine> pms);

}  // namespace vmc
