#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "vmc/resource.hpp"

namespace vmc {

/// Three-tier (access / aggregation / core) tree. PMs are leaves attached to
/// access switches in id order; each access switch serves `portsPerSwitch`
/// PMs and each aggregation pod groups `portsPerSwitch` access switches.
struct TreeTopology {
  int portsPerSwitch = 8;
  double distanceFactor = 2.0;
  int pmCount = 1;

  int accessSwitchOf(PmId pm) const { return pm / portsPerSwitch; }
  int podOf(PmId pm) const { return pm / (portsPerSwitch * portsPerSwitch); }
};

/// Number of switches on the path between two PMs: 0 (same PM), 1 (same
/// access switch), 3 (same pod) or 5 (through the core).
int hopCount(PmId a, PmId b, const TreeTopology& topo);

/// Link-fraction draws are clamped into this range.
inline constexpr double kMinBandwidthFraction = 0.01;
inline constexpr double kMaxBandwidthFraction = 1.0;

double clampBandwidthFraction(double draw);

/// One Normal(mean, sd) draw clamped into [0.01, 1].
double sampleBandwidth(std::mt19937_64& rng, double meanBW, double sdBW);

/// Symmetric available-bandwidth table plus the distance model.
class NetworkModel {
 public:
  NetworkModel() = default;
  NetworkModel(TreeTopology topology, double linkCapacityMbps = 1000.0);

  /// Fills every unordered pair (a < b, row-major) with one draw.
  void sampleBandwidths(std::mt19937_64& rng, double meanBW, double sdBW);

  const TreeTopology& topology() const { return topology_; }
  double linkCapacityMbps() const { return linkCapacityMbps_; }
  int pmCount() const { return topology_.pmCount; }

  /// DS = hops * DF.
  double distance(PmId a, PmId b) const;

  /// Link fraction in [0.01, 1]; 1 for a == b.
  double bandwidthFraction(PmId a, PmId b) const;
  void setBandwidthFraction(PmId a, PmId b, double fraction);

  /// Available migration bandwidth in MB/s (1 Gbps = 125 MB/s).
  double bandwidthMBps(PmId a, PmId b) const;

  /// Raw upper-triangle storage, row-major over a < b.
  std::span<const double> bandwidthTable() const { return table_; }

 private:
  std::size_t pairIndex(PmId a, PmId b) const;
  void checkId(PmId id) const;

  TreeTopology topology_;
  double linkCapacityMbps_ = 1000.0;
  std::vector<double> table_;
};

double distance(PmId a, PmId b, const NetworkModel& net);

/// A network-proximate group of PMs and the VMs they host.
struct Cluster {
  int id = 0;
  std::vector<PmId> pmIds;  // ascending
  std::vector<VmId> vmIds;  // ascending
};

/// Contiguous groups of `targetSize` PMs (merged access switches); the last
/// group may be smaller. `targetSize` must equal or be a multiple of the
/// switch port count. VM lists are left empty; see assignVms.
std::vector<Cluster> formClusters(const TreeTopology& topo, int targetSize);

/// Fills each cluster's vmIds from the PMs' hosted lists.
void assignVms(std::vector<Cluster>& clusters, std::span<const PhysicalMachine> pms);

}  // namespace vmc
