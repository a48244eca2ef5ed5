#include "vmc/cluster_problem.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "vmc/error.hpp"

namespace vmc {

ClusterProblem::ClusterProblem(const DataCenter& dc, const Cluster& cluster,
                               const MigrationConfig& cfg)
    : net_(&dc.network), cfg_(cfg) {
  for (PmId p : cluster.pmIds) {
    if (p < 0 || static_cast<std::size_t>(p) >= dc.pms.size()) {
      throw ValidationError(fmt::format("cluster {} references unknown PM {}", cluster.id, p));
    }
    pms_.push_back(dc.pms[p]);
  }
  for (VmId v : cluster.vmIds) {
    const VirtualMachine* vm = findVm(dc.vms, v);
    if (vm == nullptr) {
      throw ValidationError(fmt::format("cluster {} references unknown VM {}", cluster.id, v));
    }
    vms_.push_back(*vm);
  }
  build();
}

ClusterProblem::ClusterProblem(std::vector<VirtualMachine> vms, std::vector<PhysicalMachine> pms,
                               const NetworkModel& net, const MigrationConfig& cfg)
    : vms_(std::move(vms)), pms_(std::move(pms)), net_(&net), cfg_(cfg) {
  build();
}

void ClusterProblem::build() {
  cfg_.validate();
  auto byId = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(vms_.begin(), vms_.end(), byId);
  std::sort(pms_.begin(), pms_.end(), byId);

  std::map<PmId, int> pmIndex;
  for (std::size_t p = 0; p < pms_.size(); ++p) pmIndex[pms_[p].id] = static_cast<int>(p);
  host_.resize(vms_.size());
  for (std::size_t v = 0; v < vms_.size(); ++v) {
    auto it = pmIndex.find(vms_[v].hostPm);
    if (it == pmIndex.end()) {
      throw ValidationError(fmt::format("VM {} is hosted outside the cluster (PM {})", vms_[v].id,
                                        vms_[v].hostPm));
    }
    host_[v] = it->second;
  }

  std::vector<PmId> ids;
  for (const auto& pm : pms_) ids.push_back(pm.id);
  caps_ = computeCaps(vms_, ids, *net_, cfg_);

  table_.assign(vms_.size() * pms_.size(), {});
  for (std::size_t v = 0; v < vms_.size(); ++v) {
    for (std::size_t p = 0; p < pms_.size(); ++p) {
      const OverheadReport r = migrationOverhead(vms_[v], pms_[p].id, *net_, cfg_, caps_);
      table_[v * pms_.size() + p] = {{r.md, r.mt, r.dt, r.nc}, r.mo, r.mec, r.msv};
    }
  }
}

MigrationMap ClusterProblem::toMap(std::span<const int> targets) const {
  MigrationMap mm;
  mm.entries.reserve(targets.size());
  for (std::size_t v = 0; v < targets.size(); ++v) {
    mm.entries.push_back({vms_[v].id, pms_[targets[v]].id});
  }
  return mm;
}

std::vector<int> ClusterProblem::toTargets(const MigrationMap& mm) const {
  std::vector<int> targets(vms_.size(), -1);
  for (const auto& m : mm.entries) {
    auto vit = std::lower_bound(vms_.begin(), vms_.end(), m.vm,
                                [](const VirtualMachine& x, VmId id) { return x.id < id; });
    auto pit = std::lower_bound(pms_.begin(), pms_.end(), m.target,
                                [](const PhysicalMachine& x, PmId id) { return x.id < id; });
    if (vit == vms_.end() || vit->id != m.vm || pit == pms_.end() || pit->id != m.target) {
      throw ValidationError(fmt::format("map entry ({}, {}) outside the cluster", m.vm, m.target));
    }
    targets[vit - vms_.begin()] = static_cast<int>(pit - pms_.begin());
  }
  return targets;
}

int ClusterProblem::releasedCount(std::span<const int> targets) const {
  std::vector<char> usedAfter(pms_.size(), 0);
  for (int t : targets) usedAfter[t] = 1;
  int released = 0;
  for (std::size_t p = 0; p < pms_.size(); ++p) {
    if (pms_[p].active() && !usedAfter[p]) ++released;
  }
  return released;
}

double ClusterProblem::totalOverhead(std::span<const int> targets) const {
  double mo = 0.0;
  for (std::size_t v = 0; v < targets.size(); ++v) mo += overhead(static_cast<int>(v), targets[v]).mo;
  return mo;
}

int ClusterProblem::migrationCount(std::span<const int> targets) const {
  int n = 0;
  for (std::size_t v = 0; v < targets.size(); ++v) n += targets[v] != host_[v] ? 1 : 0;
  return n;
}

ClusterEvaluation evaluate(const ClusterProblem& problem, const MigrationMap& mm,
                           const ObjectiveParams& params, const PowerModel& power) {
  const ValidationReport report = validateMap(mm, problem.vms(), problem.pms());
  if (!report.ok()) throw ValidationError("invalid migration map: " + report.describe());

  const std::vector<int> targets = problem.toTargets(mm);
  const std::vector<PhysicalMachine> after = applyMap(problem.pms(), mm);

  ClusterEvaluation e;
  e.vmCount = problem.vmCount();
  e.releasedPms = countReleased(problem.pms(), after);
  for (const auto& pm : after) {
    if (!pm.active()) continue;
    ++e.activePmsAfter;
    e.powerWatts += powerConsumption(pm, problem.vms(), power);
    e.wastage += resourceWastage(pm, problem.vms());
  }
  for (int v = 0; v < problem.vmCount(); ++v) {
    const PairOverhead& o = problem.overhead(v, targets[v]);
    if (targets[v] == problem.hostIndex(v)) continue;
    e.overhead += {o.factors.md, o.factors.mt, o.factors.dt, o.factors.nc, o.mo, o.mec, o.msv, 1};
  }
  e.f = objectiveValue(e.releasedPms, e.overhead.mo, params);
  return e;
}

double objective(const MigrationMap& mm, const ClusterProblem& problem,
                 const ObjectiveParams& params) {
  return evaluate(problem, mm, params).f;
}

}  // namespace vmc
