#include "vmc/amdvmc.hpp"

#include <fmt/format.h>

#include "vmc/baselines.hpp"
#include "vmc/error.hpp"
#include "vmc/random.hpp"

namespace vmc {

void AcsParams::validate() const {
  if (nAnts < 1) throw ConfigError("n_ants must be at least 1");
  if (nCycleTerm < 1) throw ConfigError("n_cycle_term must be at least 1");
  if (nResetMax < 1) throw ConfigError("n_reset_max must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (q0 < 0.0 || q0 > 1.0) throw ConfigError("q0 must lie in [0, 1]");
  if (omega < 0.0 || omega > 1.0) throw ConfigError("omega must lie in [0, 1]");
  if (lambda < 0.0 || lambda > 1.0) throw ConfigError("lambda must lie in [0, 1]");
  if (beta < 0.0) throw ConfigError("beta must be non-negative");
  if (!(phi > 0.0)) throw ConfigError("phi must be positive");
}

PheromoneMatrix initPheromone(const ClusterProblem& problem, const AcsParams& params) {
  double tau0 = kPheromoneFloor;
  try {
    const ConsolidationResult ff = ffdl1(problem, params.objective());
    if (ff.f > 0.0) tau0 = ff.f;
  } catch (const InfeasibleError&) {
  }
  return PheromoneMatrix(problem.vmCount(), problem.pmCount(), tau0);
}

namespace {

double etaFor(const ClusterProblem& problem, int v, int p, const ResourceVector& used,
              const AcsParams& params) {
  const double ug =
      utilizationGain(used, problem.pm(p).capacity, problem.vm(v).demand, params.omega);
  return params.lambda * ug + (1.0 - params.lambda) * (1.0 - problem.overhead(v, p).mo);
}

}  // namespace

double heuristic(const ClusterProblem& problem, const AntState& ant, int v, int p,
                 const AcsParams& params) {
  return etaFor(problem, v, p, ant.used[p], params);
}

std::optional<Move> chooseMove(const ClusterProblem& problem, const AntState& ant,
                               const MoveWeights& weights, std::mt19937_64& rng,
                               const AcsParams& params) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double q = unit(rng);
  if (q <= params.q0) return argmaxMove(ant, weights, problem);
  return sampleMove(ant, weights, problem, rng);
}

void pheromoneUpdate(PheromoneMatrix& tau, std::span<const int> bestTargets, double fBest,
                     double delta) {
  for (int v = 0; v < tau.vmCount(); ++v) {
    for (int p = 0; p < tau.pmCount(); ++p) {
      const double deposit = bestTargets[v] == p ? fBest : 0.0;
      tau(v, p) = (1.0 - delta) * tau(v, p) + delta * deposit;
    }
  }
}

namespace {

struct AntOutcome {
  std::vector<int> targets;
  double f = 0.0;
  bool complete = false;
};

AntOutcome runAnt(const ClusterProblem& problem, const PheromoneMatrix& tau,
                  const AcsParams& params, std::mt19937_64& rng) {
  AntState ant = AntState::start(problem, rng);
  MoveWeights weights(
      problem, tau,
      [&](int v, int p, const ResourceVector& used) {
        return etaFor(problem, v, p, used, params);
      },
      params.beta, ant);
  while (!ant.complete()) {
    const std::optional<Move> move = chooseMove(problem, ant, weights, rng, params);
    if (!move) return {};
    ant.place(problem, move->vm, move->pm);
    weights.removeVm(move->vm);
    weights.refreshPm(move->pm, ant);
  }
  AntOutcome out;
  out.targets = std::move(ant.target);
  out.f = objectiveValue(problem.releasedCount(out.targets), problem.totalOverhead(out.targets),
                         params.objective());
  out.complete = true;
  return out;
}

}  // namespace

ConsolidationResult consolidate(const ClusterProblem& problem, const AcsParams& params,
                                std::uint64_t seed) {
  params.validate();
  ConsolidationResult result;
  PheromoneMatrix tau = initPheromone(problem, params);

  // The do-nothing map is always valid and scores 0, so it seeds the global best.
  std::vector<int> best = problem.identityTargets();
  double bestF = 0.0;
  int idleCycles = 0;
  int resets = 0;
  int cycle = 0;

  while (true) {
    std::vector<AntOutcome> ants;
    ants.reserve(params.nAnts);
    for (int k = 0; k < params.nAnts; ++k) {
      std::mt19937_64 rng(deriveSeed(seed, {static_cast<std::uint64_t>(cycle),
                                            static_cast<std::uint64_t>(k)}));
      ants.push_back(runAnt(problem, tau, params, rng));
    }
    ++cycle;
    ++idleCycles;

    const AntOutcome* cycleBest = nullptr;
    for (const AntOutcome& ant : ants) {
      if (!ant.complete) {
        ++result.discardedAnts;
        continue;
      }
      if (cycleBest == nullptr || ant.f > cycleBest->f) cycleBest = &ant;
    }
    if (cycleBest != nullptr && cycleBest->f > bestF) {
      best = cycleBest->targets;
      bestF = cycleBest->f;
      idleCycles = 0;
      ++resets;
    }

    pheromoneUpdate(tau, best, bestF, params.delta);
    result.trace.push_back(bestF);

    if (idleCycles >= params.nCycleTerm) break;
    if (params.resetRule == ResetRule::kOnImprovement && resets >= params.nResetMax) break;
    if (params.resetRule == ResetRule::kTotalCycles && cycle >= params.nResetMax) break;
  }

  result.map = problem.toMap(best);
  const ValidationReport report = validateMap(result.map, problem.vms(), problem.pms());
  if (!report.ok()) {
    throw ValidationError("consolidation produced an invalid map: " + report.describe());
  }
  result.f = bestF;
  result.score = bestF;
  result.cycles = cycle;
  result.resets = resets;
  return result;
}

}  // namespace vmc
