#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "vmc/aco.hpp"
#include "vmc/cluster_problem.hpp"

namespace vmc {

/// How the cycle-reset counter bounds a run.
enum class ResetRule {
  /// Counter grows on every global-best improvement; stop when it reaches
  /// nResetMax.
  kOnImprovement,
  /// nResetMax caps the total number of cycles instead.
  kTotalCycles,
};

/// Ant Colony System parameters for the overhead-aware consolidator.
struct AcsParams {
  int nAnts = 5;
  int nCycleTerm = 5;    // stop after this many cycles without improvement
  int nResetMax = 100;   // also accepted as nCycleMax in config files
  double beta = 1.0;     // heuristic exponent
  double delta = 0.3;    // global pheromone decay
  double q0 = 0.8;       // exploitation probability
  double omega = 0.5;    // balance vs. overall utilization in the gain
  double lambda = 0.05;  // utilization gain vs. migration overhead
  double phi = 1.0;      // released-PM exponent of the objective
  ResetRule resetRule = ResetRule::kOnImprovement;

  void validate() const;
  ObjectiveParams objective() const { return {phi, 1e-6}; }
};

inline constexpr double kPheromoneFloor = 1e-6;

/// tau0 = f of the first-fit-decreasing map, or 1e-6 when that is 0 or
/// first fit cannot place every VM.
PheromoneMatrix initPheromone(const ClusterProblem& problem, const AcsParams& params);

/// lambda * UG_p(v) + (1 - lambda) * (1 - MO(v, p)), with UG measured on the
/// ant's replica of p. Throws ValidationError when v does not fit on p.
double heuristic(const ClusterProblem& problem, const AntState& ant, int v, int p,
                 const AcsParams& params);

/// Pseudo-random proportional rule: with probability q0 take the move with
/// the largest tau * eta^beta, otherwise sample proportionally to it.
/// Returns nullopt when the ant has no feasible move.
std::optional<Move> chooseMove(const ClusterProblem& problem, const AntState& ant,
                               const MoveWeights& weights, std::mt19937_64& rng,
                               const AcsParams& params);

/// tau <- (1 - delta) tau + delta * dTau, dTau = fBest on the global-best
/// map's pairs and 0 elsewhere.
void pheromoneUpdate(PheromoneMatrix& tau, std::span<const int> bestTargets, double fBest,
                     double delta);

/// Runs the overhead-aware ACS consolidation on one cluster. Deterministic
/// in (problem, params, seed).
ConsolidationResult consolidate(const ClusterProblem& problem, const AcsParams& params,
                                std::uint64_t seed);

}  // namespace vmc
