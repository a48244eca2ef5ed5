#include "vmc/baselines.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "vmc/error.hpp"
#include "vmc/random.hpp"

namespace vmc {

double l1Norm(const ResourceVector& demand, const ResourceVector& capacity) {
  double sum = 0.0;
  for (std::size_t r = 0; r < kResourceCount; ++r) sum += demand[r] / capacity[r];
  return sum;
}

std::vector<int> ffdl1Order(const ClusterProblem& problem) {
  std::vector<int> order(problem.vmCount());
  std::vector<double> key(problem.vmCount());
  for (int v = 0; v < problem.vmCount(); ++v) {
    order[v] = v;
    // Homogeneous PMs: any cluster PM's capacity normalizes the demand.
    key[v] = l1Norm(problem.vm(v).demand, problem.pm(problem.hostIndex(v)).capacity);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] > key[b]; });
  return order;
}

ConsolidationResult ffdl1(const ClusterProblem& problem, const ObjectiveParams& params) {
  std::vector<ResourceVector> used(problem.pmCount());
  std::vector<int> targets(problem.vmCount(), -1);
  for (int v : ffdl1Order(problem)) {
    const ResourceVector& d = problem.vm(v).demand;
    for (int p = 0; p < problem.pmCount(); ++p) {
      if ((used[p] + d).fitsWithin(problem.pm(p).capacity)) {
        used[p] += d;
        targets[v] = p;
        break;
      }
    }
    if (targets[v] < 0) {
      throw InfeasibleError(fmt::format("first fit found no PM for VM {}", problem.vm(v).id));
    }
  }
  ConsolidationResult result;
  result.map = problem.toMap(targets);
  result.f = objectiveValue(problem.releasedCount(targets), problem.totalOverhead(targets), params);
  result.score = result.f;
  return result;
}

void MmdvmcParams::validate() const {
  if (nCycles < 1 || nAnts < 1) throw ConfigError("mmdvmc needs at least one cycle and ant");
  if (!(tauMin > 0.0 && tauMin < tauMax)) throw ConfigError("mmdvmc needs 0 < tau_min < tau_max");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("mmdvmc rho must lie in (0, 1)");
  if (beta < 0.0 || stayBonus < 0.0) throw ConfigError("mmdvmc beta and bonus must be >= 0");
  if (omega < 0.0 || omega > 1.0) throw ConfigError("mmdvmc omega must lie in [0, 1]");
}

double mmdvmcScore(int releasedPms, int migrations) {
  return static_cast<double>(releasedPms) / (1.0 + migrations);
}

void mmasPheromoneUpdate(PheromoneMatrix& tau, std::span<const int> bestTargets, double score,
                         const MmdvmcParams& params) {
  for (int v = 0; v < tau.vmCount(); ++v) {
    for (int p = 0; p < tau.pmCount(); ++p) {
      const double deposit = bestTargets[v] == p ? score : 0.0;
      tau(v, p) = std::clamp((1.0 - params.rho) * tau(v, p) + deposit, params.tauMin,
                             params.tauMax);
    }
  }
}

ConsolidationResult mmdvmc(const ClusterProblem& problem, const MmdvmcParams& params,
                           std::uint64_t seed, const ObjectiveParams& objective) {
  params.validate();
  PheromoneMatrix tau(problem.vmCount(), problem.pmCount(), params.tauMax);
  auto eta = [&](int v, int p, const ResourceVector& used) {
    const double ug =
        utilizationGain(used, problem.pm(p).capacity, problem.vm(v).demand, params.omega);
    return ug + (p == problem.hostIndex(v) ? params.stayBonus : 0.0);
  };

  ConsolidationResult result;
  std::vector<int> best = problem.identityTargets();
  double bestScore = 0.0;

  for (int cycle = 0; cycle < params.nCycles; ++cycle) {
    for (int k = 0; k < params.nAnts; ++k) {
      std::mt19937_64 rng(deriveSeed(seed, {static_cast<std::uint64_t>(cycle),
                                            static_cast<std::uint64_t>(k)}));
      AntState ant = AntState::start(problem, rng);
      MoveWeights weights(problem, tau, eta, params.beta, ant);
      bool stuck = false;
      while (!ant.complete()) {
        const std::optional<Move> move = sampleMove(ant, weights, problem, rng);
        if (!move) {
          stuck = true;
          break;
        }
        ant.place(problem, move->vm, move->pm);
        weights.removeVm(move->vm);
        weights.refreshPm(move->pm, ant);
      }
      if (stuck) {
        ++result.discardedAnts;
        continue;
      }
      const double score =
          mmdvmcScore(problem.releasedCount(ant.target), problem.migrationCount(ant.target));
      if (score > bestScore) {
        bestScore = score;
        best = ant.target;
        ++result.resets;
      }
    }
    mmasPheromoneUpdate(tau, best, bestScore, params);
    result.trace.push_back(bestScore);
  }

  result.map = problem.toMap(best);
  result.score = bestScore;
  result.f = objectiveValue(problem.releasedCount(best), problem.totalOverhead(best), objective);
  result.cycles = params.nCycles;
  return result;
}

}  // namespace vmc
