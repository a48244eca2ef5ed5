#pragma once

#include <span>
#include <vector>

#include "vmc/migration.hpp"
#include "vmc/model.hpp"
#include "vmc/resource.hpp"
#include "vmc/topology.hpp"
#include "vmc/workload.hpp"

namespace vmc {

/// Overhead figures of moving one VM to one PM.
struct PairOverhead {
  MigrationFactors factors;
  double mo = 0.0;
  double mec = 0.0;
  double msv = 0.0;
};

/// One cluster's consolidation input in local (dense) indexing, with the
/// overhead of every (VM, PM) pair precomputed. Bandwidth and distance are
/// fixed for a consolidation round, so the table never changes.
///
/// Holds a non-owning pointer to the network model, which must outlive it.
class ClusterProblem {
 public:
  ClusterProblem(const DataCenter& dc, const Cluster& cluster, const MigrationConfig& cfg);

  /// Stand-alone instance. Every VM's hostPm must be one of `pms`, and each
  /// PM's hosted list must match.
  ClusterProblem(std::vector<VirtualMachine> vms, std::vector<PhysicalMachine> pms,
                 const NetworkModel& net, const MigrationConfig& cfg);

  int vmCount() const { return static_cast<int>(vms_.size()); }
  int pmCount() const { return static_cast<int>(pms_.size()); }
  std::span<const VirtualMachine> vms() const { return vms_; }
  std::span<const PhysicalMachine> pms() const { return pms_; }
  const VirtualMachine& vm(int v) const { return vms_[v]; }
  const PhysicalMachine& pm(int p) const { return pms_[p]; }

  /// Local index of VM v's current host.
  int hostIndex(int v) const { return host_[v]; }
  const PairOverhead& overhead(int v, int p) const { return table_[v * pms_.size() + p]; }

  const NormalizationCaps& caps() const { return caps_; }
  const MigrationConfig& config() const { return cfg_; }
  const NetworkModel& network() const { return *net_; }

  /// Local target indices -> migration map with global ids.
  MigrationMap toMap(std::span<const int> targets) const;
  /// Inverse of toMap. Throws ValidationError on ids outside the cluster.
  std::vector<int> toTargets(const MigrationMap& mm) const;

  std::vector<int> identityTargets() const { return host_; }

  int releasedCount(std::span<const int> targets) const;
  double totalOverhead(std::span<const int> targets) const;
  int migrationCount(std::span<const int> targets) const;

 private:
  void build();

  std::vector<VirtualMachine> vms_;
  std::vector<PhysicalMachine> pms_;
  std::vector<int> host_;
  const NetworkModel* net_;
  MigrationConfig cfg_;
  NormalizationCaps caps_;
  std::vector<PairOverhead> table_;
};

/// Everything the harness reports about one cluster after consolidation.
struct ClusterEvaluation {
  int vmCount = 0;
  int releasedPms = 0;
  int activePmsAfter = 0;
  double powerWatts = 0.0;
  double wastage = 0.0;
  OverheadReport overhead;
  double f = 0.0;
};

/// Scores a map. Throws ValidationError naming every violation when the map
/// breaks capacity or assignment constraints.
ClusterEvaluation evaluate(const ClusterProblem& problem, const MigrationMap& mm,
                           const ObjectiveParams& params = {}, const PowerModel& power = {});

/// nReleased^phi / max(MO(mm), eps) for a validated map.
double objective(const MigrationMap& mm, const ClusterProblem& problem,
                 const ObjectiveParams& params = {});

}  // namespace vmc
