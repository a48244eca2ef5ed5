#include "vmc/topology.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vmc/error.hpp"

namespace vmc {

int hopCount(PmId a, PmId b, const TreeTopology& topo) {
  if (a < 0 || b < 0 || a >= topo.pmCount || b >= topo.pmCount) {
    throw ValidationError(fmt::format("PM pair ({}, {}) outside topology of {} PMs", a, b,
                                      topo.pmCount));
  }
  if (a == b) return 0;
  if (topo.accessSwitchOf(a) == topo.accessSwitchOf(b)) return 1;
  if (topo.podOf(a) == topo.podOf(b)) return 3;
  return 5;
}

double clampBandwidthFraction(double draw) {
  return std::clamp(draw, kMinBandwidthFraction, kMaxBandwidthFraction);
}

double sampleBandwidth(std::mt19937_64& rng, double meanBW, double sdBW) {
  std::normal_distribution<double> standard(0.0, 1.0);
  return clampBandwidthFraction(meanBW + sdBW * standard(rng));
}

NetworkModel::NetworkModel(TreeTopology topology, double linkCapacityMbps)
    : topology_(topology), linkCapacityMbps_(linkCapacityMbps) {
  if (topology_.pmCount < 1) throw ConfigError("topology needs at least one PM");
  if (topology_.portsPerSwitch < 2) throw ConfigError("switches need at least two ports");
  if (!(linkCapacityMbps_ > 0.0)) throw ConfigError("link capacity must be positive");
  const auto n = static_cast<std::size_t>(topology_.pmCount);
  table_.assign(n * (n - 1) / 2, kMaxBandwidthFraction);
}

void NetworkModel::sampleBandwidths(std::mt19937_64& rng, double meanBW, double sdBW) {
  if (!std::isfinite(meanBW) || !std::isfinite(sdBW)) {
    throw ConfigError("bandwidth mean and deviation must be finite");
  }
  for (double& x : table_) x = sampleBandwidth(rng, meanBW, sdBW);
}

void NetworkModel::checkId(PmId id) const {
  if (id < 0 || id >= topology_.pmCount) {
    throw ValidationError(fmt::format("unknown PM id {}", id));
  }
}

std::size_t NetworkModel::pairIndex(PmId a, PmId b) const {
  if (a > b) std::swap(a, b);
  const auto n = static_cast<std::size_t>(topology_.pmCount);
  const auto i = static_cast<std::size_t>(a);
  const auto j = static_cast<std::size_t>(b);
  // Rows 0..i-1 hold (n-1) + (n-2) + ... + (n-i) entries.
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

double NetworkModel::distance(PmId a, PmId b) const {
  return hopCount(a, b, topology_) * topology_.distanceFactor;
}

double NetworkModel::bandwidthFraction(PmId a, PmId b) const {
  checkId(a);
  checkId(b);
  if (a == b) return kMaxBandwidthFraction;
  return table_[pairIndex(a, b)];
}

void NetworkModel::setBandwidthFraction(PmId a, PmId b, double fraction) {
  checkId(a);
  checkId(b);
  if (a == b) return;
  table_[pairIndex(a, b)] = fraction;
}

double NetworkModel::bandwidthMBps(PmId a, PmId b) const {
  return bandwidthFraction(a, b) * linkCapacityMbps_ / 8.0;
}

double distance(PmId a, PmId b, const NetworkModel& net) { return net.distance(a, b); }

std::vector<Cluster> formClusters(const TreeTopology& topo, int targetSize) {
  if (targetSize < 1 ||
      (targetSize != topo.portsPerSwitch && targetSize % topo.portsPerSwitch != 0)) {
    throw ConfigError(fmt::format("cluster size {} must be a multiple of the {} switch ports",
                                  targetSize, topo.portsPerSwitch));
  }
  std::vector<Cluster> clusters;
  for (PmId first = 0; first < topo.pmCount; first += targetSize) {
    Cluster c;
    c.id = static_cast<int>(clusters.size());
    const PmId last = std::min(first + targetSize, topo.pmCount);
    for (PmId p = first; p < last; ++p) c.pmIds.push_back(p);
    clusters.push_back(std::move(c));
  }
  return clusters;
}

void assignVms(std::vector<Cluster>& clusters, std::span<const PhysicalMachine> pms) {
  for (auto& c : clusters) {
    c.vmIds.clear();
    for (PmId p : c.pmIds) {
      auto it = std::find_if(pms.begin(), pms.end(), [p](const auto& pm) { return pm.id == p; });
      if (it == pms.end()) throw ValidationError(fmt::format("cluster references unknown PM {}", p));
      c.vmIds.insert(c.vmIds.end(), it->hosted.begin(), it->hosted.end());
    }
    std::sort(c.vmIds.begin(), c.vmIds.end());
  }
}

}  // namespace vmc
