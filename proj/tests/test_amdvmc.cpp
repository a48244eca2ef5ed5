#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "vmc/amdvmc.hpp"
#include "vmc/error.hpp"

namespace vmc {
namespace {

using testing::forEachValidMap;
using testing::fractions;
using testing::makeToy;

// Brute-force optimum of the objective over every valid map.
double bruteForceBest(const ClusterProblem& p, const ObjectiveParams& obj = {}) {
  double best = 0.0;
  forEachValidMap(p, [&](const std::vector<int>& t) {
    best = std::max(best, objectiveValue(p.releasedCount(t), p.totalOverhead(t), obj));
  });
  return best;
}

TEST(InitPheromone, UsesFirstFitObjective) {
  // Two co-fitting VMs on two PMs: first fit moves VM 1 onto PM 0.
  auto toy = makeToy(2, {fractions(0.2, 0.2, 0.2), fractions(0.2, 0.2, 0.2)}, {0, 1});
  const PheromoneMatrix tau = initPheromone(*toy.problem, AcsParams{});
  const double expected = 1.0 / toy.problem->overhead(1, 0).mo;
  EXPECT_DOUBLE_EQ(tau.min(), expected);
  EXPECT_EQ(tau.max() - tau.min(), 0.0);
  // With a single migration as the only cross move, MO is the full weight sum.
  EXPECT_DOUBLE_EQ(toy.problem->overhead(1, 0).mo, 1.0);
}

TEST(InitPheromone, HalfOverheadGivesTwo) {
  // First fit moves the small VM onto PM 0. Without dirtying, its MD, MT and
  // NC are a third of the big VM's and DT equals it, so MO = 0.5.
  auto toy = makeToy(2, {fractions(0.3, 0.6, 0.3), fractions(0.1, 0.2, 0.1)}, {0, 1});
  ASSERT_DOUBLE_EQ(toy.problem->overhead(1, 0).mo, 0.5);
  const PheromoneMatrix tau = initPheromone(*toy.problem, AcsParams{});
  EXPECT_DOUBLE_EQ(tau(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(tau(1, 1), 2.0);
  EXPECT_EQ(tau.max() - tau.min(), 0.0);
}

TEST(InitPheromone, NothingReleasedGivesFloor) {
  auto toy = makeToy(2, {fractions(0.7, 0.2, 0.2), fractions(0.7, 0.2, 0.2)}, {0, 1});
  const PheromoneMatrix tau = initPheromone(*toy.problem, AcsParams{});
  EXPECT_EQ(tau.min(), kPheromoneFloor);
  EXPECT_EQ(tau.max(), kPheromoneFloor);
}

TEST(Heuristic, HostPairHasNoOverhead) {
  auto toy = makeToy(2, {fractions(0.3, 0.2, 0.1)}, {0});
  std::mt19937_64 rng(1);
  const AntState ant = AntState::start(*toy.problem, rng);
  AcsParams params;
  const double ug = utilizationGain(ResourceVector{}, testing::kCapacity,
                                    toy.problem->vm(0).demand, params.omega);
  EXPECT_DOUBLE_EQ(heuristic(*toy.problem, ant, 0, 0, params), 0.05 * ug + 0.95);
  // The same arithmetic with a gain of 0.75.
  EXPECT_DOUBLE_EQ(0.05 * 0.75 + 0.95 * 1.0, 0.9875);
}

TEST(Heuristic, WorstMoveKeepsOnlyGainTerm) {
  auto toy = makeToy(2, {fractions(0.3, 0.2, 0.1)}, {0});
  std::mt19937_64 rng(1);
  const AntState ant = AntState::start(*toy.problem, rng);
  AcsParams params;
  ASSERT_DOUBLE_EQ(toy.problem->overhead(0, 1).mo, 1.0);
  const double ug = utilizationGain(ResourceVector{}, testing::kCapacity,
                                    toy.problem->vm(0).demand, params.omega);
  EXPECT_NEAR(heuristic(*toy.problem, ant, 0, 1, params), 0.05 * ug, 1e-15);
}

TEST(Heuristic, LambdaOneIsGain) {
  std::mt19937_64 rng(2);
  auto toy = testing::randomToy(rng);
  AcsParams params;
  params.lambda = 1.0;
  const AntState ant = AntState::start(*toy.problem, rng);
  for (int v = 0; v < toy.problem->vmCount(); ++v) {
    for (int p = 0; p < toy.problem->pmCount(); ++p) {
      const double ug = utilizationGain(ResourceVector{}, testing::kCapacity,
                                        toy.problem->vm(v).demand, params.omega);
      EXPECT_EQ(heuristic(*toy.problem, ant, v, p, params), ug);
    }
  }
}

TEST(Heuristic, StaysInUnitInterval) {
  std::mt19937_64 rng(3);
  AcsParams params;
  for (int trial = 0; trial < 100; ++trial) {
    auto toy = testing::randomToy(rng);
    const ClusterProblem& p = *toy.problem;
    AntState ant = AntState::start(p, rng);
    while (!ant.complete()) {
      const auto moves = feasibleMoves(p, ant);
      ASSERT_FALSE(moves.empty());
      for (const Move& m : moves) {
        const double eta = heuristic(p, ant, m.vm, m.pm, params);
        EXPECT_GE(eta, 0.0);
        EXPECT_LE(eta, 1.0);
      }
      ant.place(p, moves.front().vm, moves.front().pm);
    }
  }
}

TEST(Heuristic, InfeasiblePairThrows) {
  auto toy = makeToy(1, {fractions(0.6, 0.1, 0.1), fractions(0.6, 0.1, 0.1)}, {0, 0});
  std::mt19937_64 rng(1);
  AntState ant = AntState::start(*toy.problem, rng);
  ant.place(*toy.problem, 0, 0);
  EXPECT_THROW(heuristic(*toy.problem, ant, 1, 0, AcsParams{}), ValidationError);
}

TEST(ChooseMove, FullExploitationIsArgmax) {
  std::mt19937_64 rng(4);
  auto toy = testing::randomToy(rng);
  const ClusterProblem& p = *toy.problem;
  AcsParams params;
  params.q0 = 1.0;
  const PheromoneMatrix tau = initPheromone(p, params);
  const AntState ant = AntState::start(p, rng);
  MoveWeights w(
      p, tau, [&](int v, int q, const ResourceVector& used) {
        AntState probe = ant;
        probe.used[q] = used;
        return heuristic(p, probe, v, q, params);
      },
      params.beta, ant);
  const auto expected = argmaxMove(ant, w, p);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(chooseMove(p, ant, w, rng, params), expected);
}

TEST(ChooseMove, ExplorationFollowsWeights) {
  auto toy = makeToy(2, {fractions(0.6, 0.1, 0.1), fractions(0.1, 0.1, 0.1)}, {0, 1});
  const ClusterProblem& p = *toy.problem;
  std::mt19937_64 rng(5);
  AntState ant = AntState::start(p, rng);
  ant.place(p, 1, 1);
  PheromoneMatrix tau(2, 2, 1.0);
  tau(0, 0) = 3.0;
  tau(0, 1) = 1.0;
  MoveWeights w(p, tau, [](int, int, const ResourceVector&) { return 1.0; }, 1.0, ant);
  AcsParams params;
  params.q0 = 0.0;
  std::map<int, int> counts;
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[chooseMove(p, ant, w, rng, params)->pm];
  EXPECT_NEAR(counts[0] / double(n), 0.75, 0.005);
  EXPECT_NEAR(counts[1] / double(n), 0.25, 0.005);
}

TEST(ChooseMove, SingleMoveAlwaysReturned) {
  auto toy = makeToy(1, {fractions(0.1, 0.1, 0.1)}, {0});
  const ClusterProblem& p = *toy.problem;
  std::mt19937_64 rng(6);
  const AntState ant = AntState::start(p, rng);
  PheromoneMatrix tau(1, 1, 1.0);
  MoveWeights w(p, tau, [](int, int, const ResourceVector&) { return 0.5; }, 1.0, ant);
  for (double q0 : {0.0, 0.5, 1.0}) {
    AcsParams params;
    params.q0 = q0;
    for (int i = 0; i < 50; ++i) EXPECT_EQ(chooseMove(p, ant, w, rng, params), (Move{0, 0}));
  }
}

TEST(PheromoneUpdate, EvaporatesAndDeposits) {
  PheromoneMatrix tau(2, 2, 1.0);
  const std::vector<int> best{1, 0};
  pheromoneUpdate(tau, best, 2.0, 0.3);
  EXPECT_DOUBLE_EQ(tau(0, 0), 0.7);
  EXPECT_DOUBLE_EQ(tau(0, 1), 1.3);
  EXPECT_DOUBLE_EQ(tau(1, 0), 1.3);
  EXPECT_DOUBLE_EQ(tau(1, 1), 0.7);
}

TEST(PheromoneUpdate, TinyDecayBarelyMoves) {
  PheromoneMatrix tau(1, 2, 1.0);
  pheromoneUpdate(tau, std::vector<int>{0}, 5.0, 1e-12);
  EXPECT_NEAR(tau(0, 0), 1.0, 1e-11);
  EXPECT_NEAR(tau(0, 1), 1.0, 1e-11);
}

TEST(Consolidate, SingleVmSinglePmKeepsIdentity) {
  auto toy = makeToy(1, {fractions(0.2, 0.2, 0.2)}, {0});
  AcsParams params;
  const ConsolidationResult r = consolidate(*toy.problem, params, 1);
  EXPECT_EQ(r.map.entries.size(), 1u);
  EXPECT_EQ(r.map.entries[0].target, 0);
  EXPECT_EQ(r.f, 0.0);
  EXPECT_EQ(r.cycles, params.nCycleTerm);
}

TEST(Consolidate, TwoPmsMergeIntoOne) {
  auto toy = makeToy(2, {fractions(0.2, 0.2, 0.2), fractions(0.2, 0.2, 0.2)}, {0, 1});
  const ConsolidationResult r = consolidate(*toy.problem, AcsParams{}, 9);
  const auto targets = toy.problem->toTargets(r.map);
  EXPECT_EQ(toy.problem->releasedCount(targets), 1);
  EXPECT_EQ(toy.problem->migrationCount(targets), 1);
}

testing::Toy threeVmTwoPm(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> frac(0.05, 0.45);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ResourceVector> demands;
  std::vector<double> dirty;
  for (int v = 0; v < 3; ++v) {
    demands.push_back(fractions(frac(rng), frac(rng), frac(rng)));
    dirty.push_back(unit(rng) * 0.25 * demands.back().mem);
  }
  return makeToy(2, demands, {0, 0, 1}, 0.05 + 0.3 * unit(rng), dirty);
}

TEST(Consolidate, MatchesBruteForceOnThreeVmToys) {
  std::mt19937_64 rng(11);
  int hits = 0;
  const int n = 100;
  for (int seed = 0; seed < n; ++seed) {
    auto toy = threeVmTwoPm(rng);
    const double best = bruteForceBest(*toy.problem);
    const ConsolidationResult r = consolidate(*toy.problem, AcsParams{}, seed);
    if (std::abs(r.f - best) <= 1e-9 * std::max(1.0, best)) ++hits;
    EXPECT_LE(r.f, best * (1 + 1e-12));
  }
  EXPECT_GE(hits, 95);
}

// With five idle cycles the ants often never leave the stay-home moves; a
// longer idle budget lets exploration find the consolidating move.
TEST(Consolidate, LongerIdleBudgetReachesBruteForce) {
  std::mt19937_64 rng(11);
  AcsParams params;
  params.nCycleTerm = 50;
  int hits = 0;
  for (int seed = 0; seed < 100; ++seed) {
    auto toy = threeVmTwoPm(rng);
    const double best = bruteForceBest(*toy.problem);
    const ConsolidationResult r = consolidate(*toy.problem, params, seed);
    if (std::abs(r.f - best) <= 1e-9 * std::max(1.0, best)) ++hits;
  }
  EXPECT_GE(hits, 95);
}

TEST(Consolidate, TraceNeverDecreases) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    auto toy = testing::randomToy(rng);
    const ConsolidationResult r = consolidate(*toy.problem, AcsParams{}, i);
    ASSERT_EQ(static_cast<int>(r.trace.size()), r.cycles);
    for (std::size_t c = 1; c < r.trace.size(); ++c) EXPECT_GE(r.trace[c], r.trace[c - 1]);
    EXPECT_EQ(r.trace.back(), r.f);
  }
}

TEST(Consolidate, ReturnedMapsValidateAndMatchObjective) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    auto toy = testing::randomToy(rng);
    const ConsolidationResult r = consolidate(*toy.problem, AcsParams{}, i);
    EXPECT_TRUE(validateMap(r.map, toy.problem->vms(), toy.problem->pms()).ok());
    EXPECT_DOUBLE_EQ(objective(r.map, *toy.problem), r.f);
  }
}

TEST(Consolidate, DeterministicInSeed) {
  std::mt19937_64 rng(14);
  auto toy = testing::randomToy(rng);
  const ConsolidationResult a = consolidate(*toy.problem, AcsParams{}, 77);
  const ConsolidationResult b = consolidate(*toy.problem, AcsParams{}, 77);
  EXPECT_EQ(a.map, b.map);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.cycles, b.cycles);
}

TEST(Consolidate, StopsAtResetBudget) {
  std::mt19937_64 rng(15);
  auto toy = testing::randomToy(rng);
  AcsParams params;
  params.nResetMax = 1;
  const ConsolidationResult r = consolidate(*toy.problem, params, 3);
  EXPECT_LE(r.resets, 1);
  params.resetRule = ResetRule::kTotalCycles;
  params.nCycleTerm = 1000;
  params.nResetMax = 7;
  EXPECT_EQ(consolidate(*toy.problem, params, 3).cycles, 7);
}

TEST(Consolidate, PheromoneStaysPositive) {
  PheromoneMatrix tau(3, 3, kPheromoneFloor);
  const std::vector<int> best{0, 1, 2};
  for (int c = 0; c < 100; ++c) {
    pheromoneUpdate(tau, best, 0.0, 0.3);
    EXPECT_GT(tau.min(), 0.0);
    EXPECT_TRUE(std::isfinite(tau.max()));
  }
}

TEST(AcsParams, Validation) {
  AcsParams p;
  EXPECT_NO_THROW(p.validate());
  p.delta = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.q0 = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.nAnts = 0;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace vmc
