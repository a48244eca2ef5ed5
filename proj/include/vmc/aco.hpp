#pragma once

#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "vmc/cluster_problem.hpp"

namespace vmc {

/// Dense VM x PM pheromone table in local cluster indexing.
class PheromoneMatrix {
 public:
  PheromoneMatrix() = default;
  PheromoneMatrix(int vmCount, int pmCount, double initial)
      : vms_(vmCount), pms_(pmCount), tau_(static_cast<std::size_t>(vmCount) * pmCount, initial) {}

  int vmCount() const { return vms_; }
  int pmCount() const { return pms_; }
  double operator()(int v, int p) const { return tau_[static_cast<std::size_t>(v) * pms_ + p]; }
  double& operator()(int v, int p) { return tau_[static_cast<std::size_t>(v) * pms_ + p]; }
  std::span<const double> values() const { return tau_; }
  std::span<double> values() { return tau_; }

  double min() const;
  double max() const;

 private:
  int vms_ = 0;
  int pms_ = 0;
  std::vector<double> tau_;
};

struct Move {
  int vm = -1;  // local index
  int pm = -1;  // local index

  friend bool operator==(const Move&, const Move&) = default;
};

/// One ant's partial solution: every VM pulled out into a pool and placed
/// again onto empty replicas of the cluster PMs.
struct AntState {
  std::vector<int> target;           // local PM per VM, -1 while unplaced
  std::vector<int> vmList;           // unplaced VMs, in shuffled order
  std::vector<ResourceVector> used;  // running load of each PM replica

  /// Empty replicas and a Fisher-Yates shuffled VM pool.
  static AntState start(const ClusterProblem& problem, std::mt19937_64& rng);

  bool complete() const { return vmList.empty(); }
  bool fits(const ClusterProblem& problem, int v, int p) const;
  void place(const ClusterProblem& problem, int v, int p);
};

/// Every (unplaced VM, PM) pair whose demand fits the replica's remaining
/// capacity, in vmList order then PM order.
std::vector<Move> feasibleMoves(const ClusterProblem& problem, const AntState& ant);

/// eta(v, p) given the replica's current load.
using HeuristicFn = std::function<double(int v, int p, const ResourceVector& used)>;

/// tau * eta^beta for each feasible move of one ant. Placing a VM only
/// changes the column of the receiving PM, so refreshPm keeps the table
/// consistent in O(#VMs).
class MoveWeights {
 public:
  MoveWeights(const ClusterProblem& problem, const PheromoneMatrix& tau, HeuristicFn eta,
              double beta, const AntState& ant);

  void refreshPm(int p, const AntState& ant);
  void removeVm(int v);

  bool feasible(int v, int p) const { return feasible_[index(v, p)] != 0; }
  double weight(int v, int p) const { return weight_[index(v, p)]; }

 private:
  std::size_t index(int v, int p) const { return static_cast<std::size_t>(v) * pms_ + p; }
  void refreshPair(int v, int p, const AntState& ant);

  const ClusterProblem* problem_;
  const PheromoneMatrix* tau_;
  HeuristicFn eta_;
  double beta_;
  int pms_;
  std::vector<char> feasible_;
  std::vector<double> weight_;
};

/// Feasible move with the largest weight; ties go to the lowest (VM, PM).
std::optional<Move> argmaxMove(const AntState& ant, const MoveWeights& w,
                               const ClusterProblem& problem);

/// Feasible move drawn with probability weight / sum(weights). Falls back to
/// a uniform draw over feasible moves when every weight is zero.
std::optional<Move> sampleMove(const AntState& ant, const MoveWeights& w,
                               const ClusterProblem& problem, std::mt19937_64& rng);

/// Outcome shared by every consolidator.
struct ConsolidationResult {
  MigrationMap map;
  double f = 0.0;      // objective of `map` (released^phi / MO)
  double score = 0.0;  // the algorithm's own fitness of `map`
  std::vector<double> trace;  // global-best score after each cycle
  int cycles = 0;
  int resets = 0;
  int discardedAnts = 0;  // ants that ran out of feasible moves
};

}  // namespace vmc
