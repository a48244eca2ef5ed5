#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vmc/resource.hpp"
#include "vmc/topology.hpp"

namespace vmc {

/// Synthetic data-center parameters.
struct GenConfig {
  int nPm = 64;
  int nVm = 0;  // 0 means 2 * nPm
  double meanRsc = 0.05;
  double sdRsc = 0.2;
  double pr = 0.25;  // max dirty rate as a fraction of memory, per second
  ResourceVector pmCapacity{5.0, 10240.0, 1000.0};
  double meanBW = 0.05;
  double sdBW = 0.2;
  double df = 2.0;
  int portsPerSwitch = 8;
  double linkCapacityMbps = 1000.0;
  std::uint64_t seed = 1;

  int effectiveVmCount() const { return nVm > 0 ? nVm : 2 * nPm; }
  void validate() const;
};

enum class SweepKind { kPlain, kNp, kMeanRsc, kSdRsc };

const char* sweepName(SweepKind kind);
SweepKind parseSweepKind(const std::string& name);

/// VM population coupled to a sweep: 2 * nPm for PM-count sweeps, otherwise
/// nPm * (0.55 - value) / 0.25 rounded to the nearest integer.
int vmCount(int nPm, SweepKind kind, double sweepValue = 0.0);

inline constexpr double kMinDemandFraction = 0.005;

/// Demand fractions ~ Normal(meanRsc, sdRsc) clamped to [0.005, 1] and scaled
/// by PM capacity; dirty rate ~ Uniform[0, pr * mem). hostPm is left at 0.
std::vector<VirtualMachine> generateVms(const GenConfig& cfg, int nVm, std::mt19937_64& rng);

/// Shuffles the VMs and deals them round-robin over the PMs, skipping ahead
/// (with wrap-around) past PMs without room. Sets vm.hostPm and pm.hosted.
/// Throws InfeasibleError when some VM fits nowhere.
void initialPlacement(std::vector<PhysicalMachine>& pms, std::vector<VirtualMachine>& vms,
                      std::mt19937_64& rng);

struct DataCenter {
  GenConfig config;
  std::vector<PhysicalMachine> pms;  // pms[i].id == i
  std::vector<VirtualMachine> vms;   // vms[i].id == i
  NetworkModel network;
};

inline constexpr int kPlacementAttempts = 10;

/// Builds the whole data center from cfg.seed. VM demands, bandwidths and
/// placement draw from separate derived streams. An unplaceable population is
/// regenerated from the next derived seed, up to 10 attempts.
DataCenter generateDataCenter(const GenConfig& cfg);

}  // namespace vmc
