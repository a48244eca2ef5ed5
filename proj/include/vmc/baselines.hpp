#pragma once

#include <cstdint>
#include <vector>

#include "vmc/aco.hpp"
#include "vmc/cluster_problem.hpp"

namespace vmc {

/// Sum of a demand's per-resource fractions of the PM capacity.
double l1Norm(const ResourceVector& demand, const ResourceVector& capacity);

/// Local VM indices in first-fit-decreasing order: non-increasing L1 norm,
/// ties broken by VM id.
std::vector<int> ffdl1Order(const ClusterProblem& problem);

/// First fit decreasing over L1-normalized demands, ignoring current hosts:
/// VMs leave their PMs and are dropped into the first PM (by id) that fits.
/// No randomness. Throws InfeasibleError when some VM fits nowhere.
ConsolidationResult ffdl1(const ClusterProblem& problem, const ObjectiveParams& params = {});

/// Max-Min Ant System consolidator that treats every migration as equally
/// costly. This is a reconstruction: fitness released / (1 + migrations),
/// heuristic = utilization gain plus a bonus for staying on the current host,
/// pheromone kept inside [tauMin, tauMax].
struct MmdvmcParams {
  int nCycles = 50;
  int nAnts = 5;
  double tauMin = 0.2;
  double tauMax = 1.0;
  double rho = 0.02;
  double beta = 2.0;
  double stayBonus = 1.0;
  double omega = 0.5;

  void validate() const;
};

double mmdvmcScore(int releasedPms, int migrations);

/// tau <- clamp((1 - rho) tau + dTau, tauMin, tauMax), dTau = score on the
/// best map's pairs.
void mmasPheromoneUpdate(PheromoneMatrix& tau, std::span<const int> bestTargets, double score,
                         const MmdvmcParams& params);

ConsolidationResult mmdvmc(const ClusterProblem& problem, const MmdvmcParams& params,
                           std::uint64_t seed, const ObjectiveParams& objective = {});

}  // namespace vmc
