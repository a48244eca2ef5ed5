#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vmc/cluster_problem.hpp"
#include "vmc/config.hpp"

namespace vmc {

enum class Algorithm { kFfdl1, kMmdvmc, kAmdvmc };

const char* algorithmName(Algorithm algo);
/// Throws ConfigError for names other than ffdl1, mmdvmc and amdvmc.
Algorithm parseAlgorithm(std::string_view name);

/// Decentralized: clusters decide concurrently, so a round takes as long as
/// the slowest cluster. Centralized: one decider handles them in turn.
enum class TimingMode { kDecentralized, kCentralized };

const char* timingModeName(TimingMode mode);
TimingMode parseTimingMode(std::string_view name);

struct ExperimentSpec {
  SweepKind sweep = SweepKind::kNp;
  std::vector<double> values{64};
  int repetitions = 30;
  std::vector<Algorithm> algorithms{Algorithm::kFfdl1, Algorithm::kMmdvmc, Algorithm::kAmdvmc};
  int clusterSize = 8;
  std::uint64_t baseSeed = 1;
  TimingMode timing = TimingMode::kDecentralized;
  int threads = 1;  // repetitions run in parallel; 1 keeps timings uncontended
  ModelConfig model;  // gen.nPm is the PM count for the mean/sd sweeps

  void validate() const;
};

/// Flat key = value spec: sweep, values, repetitions, algorithms,
/// cluster_size, base_seed, timing_mode, threads, plus every ModelConfig key.
ExperimentSpec parseExperimentSpec(std::string_view text, std::string_view source);

/// Seed of one (sweep value, repetition) data center:
/// baseSeed XOR splitmix64(bits(value) XOR splitmix64(rep)).
std::uint64_t runSeed(std::uint64_t baseSeed, double sweepValue, int repetition);

/// Generator settings for one sweep point.
GenConfig sweepConfig(const ExperimentSpec& spec, double sweepValue, std::uint64_t seed);

/// One algorithm's outcome on one cluster.
struct ClusterRun {
  int clusterId = 0;
  ClusterEvaluation eval;
  double seconds = 0.0;
  std::vector<double> trace;  // the algorithm's best score per cycle
  bool failed = false;  // the algorithm threw; the cluster kept its placement
  std::string error;
};

/// Data-center-wide figures of one algorithm on one data center, in the
/// reporting units (TB, hours, kJ, kW).
struct MetricsRow {
  double sweepValue = 0.0;
  Algorithm algorithm = Algorithm::kAmdvmc;
  int nVm = 0;
  double nReleasedPm = 0.0;
  double packingEfficiency = 0.0;
  double powerKw = 0.0;
  double wastage = 0.0;
  double mdTb = 0.0;
  double mtHours = 0.0;
  double dtHours = 0.0;
  double nc = 0.0;
  double mo = 0.0;
  double mecKj = 0.0;
  double msv = 0.0;
  double decisionTimeSec = 0.0;
  int failures = 0;
};

/// Sums the cluster figures, converts units and takes PE over the whole data
/// center. Decision time is the max (decentralized) or sum (centralized) of
/// the cluster times.
MetricsRow aggregateMetrics(std::span<const ClusterRun> clusters, TimingMode timing);

/// Runs one algorithm over every cluster of a data center.
std::vector<ClusterRun> runDataCenter(const DataCenter& dc, Algorithm algo,
                                      const ModelConfig& model, int clusterSize,
                                      std::uint64_t seed);

/// Mean and sample standard deviation of a metric across repetitions.
struct SummaryRow {
  MetricsRow mean;
  MetricsRow sd;
  int repetitions = 0;
  int failures = 0;
};

struct ExperimentResult {
  SweepKind sweep = SweepKind::kNp;
  std::vector<SummaryRow> rows;  // sweep value major, algorithm minor
};

ExperimentResult runExperiment(const ExperimentSpec& spec);

/// Metric columns in CSV order; each appears as <name> and <name>_sd.
const std::vector<std::string>& metricColumns();
/// Columns holding wall-clock figures, excluded from determinism checks.
bool isTimingColumn(std::string_view column);

std::string toCsv(const ExperimentResult& result);

}  // namespace vmc
