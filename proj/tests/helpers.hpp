#pragma once

#include <algorithm>
#include <memory>
#include <random>
#include <vector>

#include "vmc/cluster_problem.hpp"
#include "vmc/topology.hpp"

namespace vmc::testing {

inline const ResourceVector kCapacity{5.0, 10240.0, 1000.0};

/// Demand from capacity fractions.
inline ResourceVector fractions(double cpu, double mem, double net) {
  return {cpu * kCapacity.cpu, mem * kCapacity.mem, net * kCapacity.net};
}

/// A self-contained cluster over PMs 0..n-1 with a uniform link fraction.
struct Toy {
  std::unique_ptr<NetworkModel> net;
  std::unique_ptr<ClusterProblem> problem;
};

inline Toy makeToy(int nPm, const std::vector<ResourceVector>& demands,
                   const std::vector<PmId>& hosts, double bwFraction = 0.5,
                   std::vector<double> dirtyRates = {}, const MigrationConfig& cfg = {}) {
  Toy toy;
  toy.net = std::make_unique<NetworkModel>(TreeTopology{8, 2.0, nPm});
  for (int a = 0; a < nPm; ++a) {
    for (int b = a + 1; b < nPm; ++b) toy.net->setBandwidthFraction(a, b, bwFraction);
  }
  std::vector<PhysicalMachine> pms(nPm);
  for (int p = 0; p < nPm; ++p) {
    pms[p].id = p;
    pms[p].capacity = kCapacity;
  }
  std::vector<VirtualMachine> vms(demands.size());
  for (std::size_t v = 0; v < demands.size(); ++v) {
    vms[v].id = static_cast<VmId>(v);
    vms[v].demand = demands[v];
    vms[v].dirtyRate = dirtyRates.empty() ? 0.0 : dirtyRates[v];
    vms[v].hostPm = hosts[v];
    pms[hosts[v]].hosted.push_back(static_cast<VmId>(v));
  }
  toy.problem = std::make_unique<ClusterProblem>(std::move(vms), std::move(pms), *toy.net, cfg);
  return toy;
}

/// Random feasible toy instance: 2-3 PMs, 3-5 VMs, random link fractions
/// and dirty rates, placed first-fit in random order.
inline Toy randomToy(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pmDist(2, 3);
  std::uniform_int_distribution<int> vmDist(3, 5);
  std::uniform_real_distribution<double> frac(0.05, 0.45);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true) {
    const int nPm = pmDist(rng);
    const int nVm = vmDist(rng);
    std::vector<ResourceVector> demands;
    std::vector<double> dirty;
    for (int v = 0; v < nVm; ++v) {
      demands.push_back(fractions(frac(rng), frac(rng), frac(rng)));
      dirty.push_back(unit(rng) * 0.25 * demands.back().mem);
    }
    std::vector<PmId> hosts(nVm, -1);
    std::vector<ResourceVector> used(nPm);
    bool ok = true;
    for (int v = 0; v < nVm && ok; ++v) {
      const int start = static_cast<int>(rng() % nPm);
      ok = false;
      for (int k = 0; k < nPm; ++k) {
        const int p = (start + k) % nPm;
        if ((used[p] + demands[v]).fitsWithin(kCapacity)) {
          used[p] += demands[v];
          hosts[v] = p;
          ok = true;
          break;
        }
      }
    }
    if (!ok) continue;
    Toy toy = makeToy(nPm, demands, hosts, 0.5, dirty);
    for (int a = 0; a < nPm; ++a) {
      for (int b = a + 1; b < nPm; ++b) {
        toy.net->setBandwidthFraction(a, b, std::clamp(0.05 + 0.3 * unit(rng), 0.01, 1.0));
      }
    }
    // Rebuild so the overhead table sees the new links.
    std::vector<VirtualMachine> vms(toy.problem->vms().begin(), toy.problem->vms().end());
    std::vector<PhysicalMachine> pms(toy.problem->pms().begin(), toy.problem->pms().end());
    toy.problem = std::make_unique<ClusterProblem>(std::move(vms), std::move(pms), *toy.net,
                                                   MigrationConfig{});
    return toy;
  }
}

/// Every valid target vector of a small problem, via odometer enumeration.
template <typename Visit>
void forEachValidMap(const ClusterProblem& problem, Visit visit) {
  const int nVm = problem.vmCount();
  const int nPm = problem.pmCount();
  std::vector<int> targets(nVm, 0);
  while (true) {
    std::vector<ResourceVector> used(nPm);
    bool ok = true;
    for (int v = 0; v < nVm && ok; ++v) {
      used[targets[v]] += problem.vm(v).demand;
      ok = used[targets[v]].fitsWithin(problem.pm(targets[v]).capacity);
    }
    if (ok) visit(targets);
    int i = 0;
    while (i < nVm && ++targets[i] == nPm) targets[i++] = 0;
    if (i == nVm) return;
  }
}

}  // namespace vmc::testing
