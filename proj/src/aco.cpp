#include "vmc/aco.hpp"

#include <algorithm>
#include <cmath>

namespace vmc {

double PheromoneMatrix::min() const {
  return tau_.empty() ? 0.0 : *std::min_element(tau_.begin(), tau_.end());
}

double PheromoneMatrix::max() const {
  return tau_.empty() ? 0.0 : *std::max_element(tau_.begin(), tau_.end());
}

AntState AntState::start(const ClusterProblem& problem, std::mt19937_64& rng) {
  AntState ant;
  ant.target.assign(problem.vmCount(), -1);
  ant.used.assign(problem.pmCount(), ResourceVector{});
  ant.vmList.resize(problem.vmCount());
  for (int v = 0; v < problem.vmCount(); ++v) ant.vmList[v] = v;
  // Fisher-Yates, drawing j uniformly from [0, i].
  for (int i = static_cast<int>(ant.vmList.size()) - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(ant.vmList[i], ant.vmList[j]);
  }
  return ant;
}

bool AntState::fits(const ClusterProblem& problem, int v, int p) const {
  return (used[p] + problem.vm(v).demand).fitsWithin(problem.pm(p).capacity);
}

void AntState::place(const ClusterProblem& problem, int v, int p) {
  target[v] = p;
  used[p] += problem.vm(v).demand;
  vmList.erase(std::find(vmList.begin(), vmList.end(), v));
}

std::vector<Move> feasibleMoves(const ClusterProblem& problem, const AntState& ant) {
  std::vector<Move> moves;
  for (int v : ant.vmList) {
    for (int p = 0; p < problem.pmCount(); ++p) {
      if (ant.fits(problem, v, p)) moves.push_back({v, p});
    }
  }
  return moves;
}

MoveWeights::MoveWeights(const ClusterProblem& problem, const PheromoneMatrix& tau,
                         HeuristicFn eta, double beta, const AntState& ant)
    : problem_(&problem),
      tau_(&tau),
      eta_(std::move(eta)),
      beta_(beta),
      pms_(problem.pmCount()),
      feasible_(static_cast<std::size_t>(problem.vmCount()) * problem.pmCount(), 0),
      weight_(feasible_.size(), 0.0) {
  for (int v : ant.vmList) {
    for (int p = 0; p < pms_; ++p) refreshPair(v, p, ant);
  }
}

void MoveWeights::refreshPair(int v, int p, const AntState& ant) {
  const std::size_t i = index(v, p);
  if (!ant.fits(*problem_, v, p)) {
    feasible_[i] = 0;
    weight_[i] = 0.0;
    return;
  }
  feasible_[i] = 1;
  const double eta = eta_(v, p, ant.used[p]);
  weight_[i] = (*tau_)(v, p) * (beta_ == 1.0 ? eta : std::pow(eta, beta_));
}

void MoveWeights::refreshPm(int p, const AntState& ant) {
  for (int v : ant.vmList) refreshPair(v, p, ant);
}

void MoveWeights::removeVm(int v) {
  for (int p = 0; p < pms_; ++p) {
    feasible_[index(v, p)] = 0;
    weight_[index(v, p)] = 0.0;
  }
}

std::optional<Move> argmaxMove(const AntState& ant, const MoveWeights& w,
                               const ClusterProblem& problem) {
  std::optional<Move> best;
  double bestWeight = -1.0;
  // Local indices follow ascending ids, so scanning in index order and only
  // replacing on a strict improvement keeps the lowest (VM, PM) among ties.
  for (int v = 0; v < problem.vmCount(); ++v) {
    if (ant.target[v] != -1) continue;
    for (int p = 0; p < problem.pmCount(); ++p) {
      if (!w.feasible(v, p)) continue;
      if (w.weight(v, p) > bestWeight) {
        bestWeight = w.weight(v, p);
        best = Move{v, p};
      }
    }
  }
  return best;
}

std::optional<Move> sampleMove(const AntState& ant, const MoveWeights& w,
                               const ClusterProblem& problem, std::mt19937_64& rng) {
  double total = 0.0;
  int feasibleCount = 0;
  for (int v : ant.vmList) {
    for (int p = 0; p < problem.pmCount(); ++p) {
      if (!w.feasible(v, p)) continue;
      total += w.weight(v, p);
      ++feasibleCount;
    }
  }
  if (feasibleCount == 0) return std::nullopt;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  if (!(total > 0.0)) {
    auto pick = static_cast<int>(u * feasibleCount);
    pick = std::min(pick, feasibleCount - 1);
    for (int v : ant.vmList) {
      for (int p = 0; p < problem.pmCount(); ++p) {
        if (w.feasible(v, p) && pick-- == 0) return Move{v, p};
      }
    }
  }
  const double threshold = u * total;
  double acc = 0.0;
  std::optional<Move> last;
  for (int v : ant.vmList) {
    for (int p = 0; p < problem.pmCount(); ++p) {
      if (!w.feasible(v, p)) continue;
      const double wt = w.weight(v, p);
      if (wt <= 0.0) continue;
      acc += wt;
      last = Move{v, p};
      if (threshold < acc) return last;
    }
  }
  return last;  // rounding at the top end
}

}  // namespace vmc
