#include "vmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "vmc/amdvmc.hpp"
#include "vmc/baselines.hpp"
#include "vmc/error.hpp"
#include "vmc/random.hpp"

namespace vmc {

const char* algorithmName(Algorithm algo) {
  switch (algo) {
    case Algorithm::kFfdl1: return "ffdl1";
    case Algorithm::kMmdvmc: return "mmdvmc";
    case Algorithm::kAmdvmc: return "amdvmc";
  }
  return "?";
}

Algorithm parseAlgorithm(std::string_view name) {
  if (name == "ffdl1") return Algorithm::kFfdl1;
  if (name == "mmdvmc") return Algorithm::kMmdvmc;
  if (name == "amdvmc") return Algorithm::kAmdvmc;
  throw ConfigError(fmt::format("unknown algorithm '{}' (expected ffdl1, mmdvmc or amdvmc)", name));
}

const char* timingModeName(TimingMode mode) {
  return mode == TimingMode::kDecentralized ? "decentralized" : "centralized";
}

TimingMode parseTimingMode(std::string_view name) {
  if (name == "decentralized") return TimingMode::kDecentralized;
  if (name == "centralized") return TimingMode::kCentralized;
  throw ConfigError(
      fmt::format("unknown timing mode '{}' (expected decentralized or centralized)", name));
}

void ExperimentSpec::validate() const {
  if (values.empty()) throw ConfigError("experiment needs at least one sweep value");
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (algorithms.empty()) throw ConfigError("experiment needs at least one algorithm");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  const int ports = model.gen.portsPerSwitch;
  if (clusterSize < 1 || (clusterSize != ports && clusterSize % ports != 0)) {
    throw ConfigError(
        fmt::format("cluster size {} must be a multiple of the {} switch ports", clusterSize, ports));
  }
  for (double v : values) {
    if (sweep == SweepKind::kNp || sweep == SweepKind::kPlain) {
      if (!(v >= 1.0) || v != std::floor(v) || v > 1e6) {
        throw ConfigError(fmt::format("PM count {} is not a positive integer", v));
      }
    } else {
      vmCount(model.gen.nPm, sweep, v);  // range check
    }
  }
  model.validate();
}

ExperimentSpec parseExperimentSpec(std::string_view text, std::string_view source) {
  ExperimentSpec spec;
  std::set<std::string> seen;
  for (const KeyValue& kv : parseKeyValues(text, source)) {
    if (!seen.insert(canonicalKey(kv.key)).second) {
      throw ConfigError(fmt::format("{}:{}: key '{}' set twice", source, kv.line, kv.key));
    }
    auto where = [&] { return fmt::format("{}:{}: ", source, kv.line); };
    try {
      if (kv.key == "sweep") {
        spec.sweep = parseSweepKind(kv.value);
      } else if (kv.key == "values") {
        spec.values = parseDoubleList(kv, source);
      } else if (kv.key == "repetitions") {
        spec.repetitions = parseInt(kv, source);
      } else if (kv.key == "algorithms") {
        spec.algorithms.clear();
        for (const std::string& name : parseWordList(kv, source)) {
          spec.algorithms.push_back(parseAlgorithm(name));
        }
      } else if (kv.key == "cluster_size") {
        spec.clusterSize = parseInt(kv, source);
      } else if (kv.key == "base_seed") {
        spec.baseSeed = parseUint64(kv, source);
      } else if (kv.key == "timing_mode") {
        spec.timing = parseTimingMode(kv.value);
      } else if (kv.key == "threads") {
        spec.threads = parseInt(kv, source);
      } else if (!applyModelKey(spec.model, kv, source)) {
        throw ConfigError(fmt::format("unknown key '{}'", kv.key));
      }
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      // Typed parsers already prefix the location.
      if (msg.starts_with(std::string(source) + ":")) throw;
      throw ConfigError(where() + msg);
    }
  }
  spec.validate();
  return spec;
}

std::uint64_t runSeed(std::uint64_t baseSeed, double sweepValue, int repetition) {
  const auto bits = std::bit_cast<std::uint64_t>(sweepValue);
  return baseSeed ^ splitmix64(bits ^ splitmix64(static_cast<std::uint64_t>(repetition)));
}

GenConfig sweepConfig(const ExperimentSpec& spec, double sweepValue, std::uint64_t seed) {
  GenConfig gen = spec.model.gen;
  gen.seed = seed;
  switch (spec.sweep) {
    case SweepKind::kPlain:
    case SweepKind::kNp:
      gen.nPm = static_cast<int>(sweepValue);
      break;
    case SweepKind::kMeanRsc:
      gen.meanRsc = sweepValue;
      break;
    case SweepKind::kSdRsc:
      gen.sdRsc = sweepValue;
      break;
  }
  gen.nVm = vmCount(gen.nPm, spec.sweep, sweepValue);
  return gen;
}

MetricsRow aggregateMetrics(std::span<const ClusterRun> clusters, TimingMode timing) {
  MetricsRow row;
  int active = 0;
  double mdMB = 0.0;
  double mtSec = 0.0;
  double dtSec = 0.0;
  double mecJ = 0.0;
  double powerW = 0.0;
  for (const ClusterRun& c : clusters) {
    row.nVm += c.eval.vmCount;
    row.nReleasedPm += c.eval.releasedPms;
    active += c.eval.activePmsAfter;
    powerW += c.eval.powerWatts;
    row.wastage += c.eval.wastage;
    mdMB += c.eval.overhead.md;
    mtSec += c.eval.overhead.mt;
    dtSec += c.eval.overhead.dt;
    row.nc += c.eval.overhead.nc;
    row.mo += c.eval.overhead.mo;
    mecJ += c.eval.overhead.mec;
    row.msv += c.eval.overhead.msv;
    if (c.failed) ++row.failures;
    if (timing == TimingMode::kDecentralized) {
      row.decisionTimeSec = std::max(row.decisionTimeSec, c.seconds);
    } else {
      row.decisionTimeSec += c.seconds;
    }
  }
  row.packingEfficiency =
      packingEfficiency(static_cast<std::size_t>(row.nVm), static_cast<std::size_t>(active));
  row.powerKw = powerW / 1000.0;
  row.mdTb = mdMB / (1024.0 * 1024.0);
  row.mtHours = mtSec / 3600.0;
  row.dtHours = dtSec / 3600.0;
  row.mecKj = mecJ / 1000.0;
  return row;
}

namespace {

ConsolidationResult runAlgorithm(Algorithm algo, const ClusterProblem& problem,
                                 const ModelConfig& model, std::uint64_t seed) {
  switch (algo) {
    case Algorithm::kFfdl1: return ffdl1(problem, model.acs.objective());
    case Algorithm::kMmdvmc: return mmdvmc(problem, model.mmdvmc, seed, model.acs.objective());
    case Algorithm::kAmdvmc: return consolidate(problem, model.acs, seed);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace

std::vector<ClusterRun> runDataCenter(const DataCenter& dc, Algorithm algo,
                                      const ModelConfig& model, int clusterSize,
                                      std::uint64_t seed) {
  std::vector<Cluster> clusters = formClusters(dc.network.topology(), clusterSize);
  assignVms(clusters, dc.pms);

  std::vector<ClusterRun> runs;
  runs.reserve(clusters.size());
  for (const Cluster& cluster : clusters) {
    ClusterRun run;
    run.clusterId = cluster.id;
    const auto start = std::chrono::steady_clock::now();
    const ClusterProblem problem(dc, cluster, model.migration);
    MigrationMap map;
    try {
      ConsolidationResult result = runAlgorithm(
          algo, problem, model, deriveSeed(seed, {4, static_cast<std::uint64_t>(cluster.id)}));
      map = std::move(result.map);
      run.trace = std::move(result.trace);
    } catch (const Error& e) {
      run.failed = true;
      run.error = e.what();
      map = identityMap(problem.vms());
    }
    run.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.eval = evaluate(problem, map, model.acs.objective());
    runs.push_back(std::move(run));
  }
  return runs;
}

namespace {

// Field accessors in CSV order, matching metricColumns().
using Field = double MetricsRow::*;
constexpr Field kFields[] = {
    &MetricsRow::nReleasedPm, &MetricsRow::packingEfficiency, &MetricsRow::powerKw,
    &MetricsRow::wastage,     &MetricsRow::mdTb,              &MetricsRow::mtHours,
    &MetricsRow::dtHours,     &MetricsRow::nc,                &MetricsRow::mo,
    &MetricsRow::mecKj,       &MetricsRow::msv,               &MetricsRow::decisionTimeSec,
};

SummaryRow summarize(std::span<const MetricsRow> reps, double sweepValue, Algorithm algo,
                     int failures) {
  SummaryRow out;
  out.mean.sweepValue = out.sd.sweepValue = sweepValue;
  out.mean.algorithm = out.sd.algorithm = algo;
  out.repetitions = static_cast<int>(reps.size());
  out.failures = failures;
  if (reps.empty()) return out;
  const double n = static_cast<double>(reps.size());
  out.mean.nVm = reps.front().nVm;
  for (Field f : kFields) {
    double sum = 0.0;
    for (const MetricsRow& r : reps) sum += r.*f;
    const double mean = sum / n;
    double ss = 0.0;
    for (const MetricsRow& r : reps) ss += (r.*f - mean) * (r.*f - mean);
    out.mean.*f = mean;
    out.sd.*f = reps.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return out;
}

}  // namespace

ExperimentResult runExperiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t nAlgo = spec.algorithms.size();
  const std::size_t nTasks = spec.values.size() * static_cast<std::size_t>(spec.repetitions);

  struct TaskOutcome {
    std::vector<MetricsRow> rows;  // one per algorithm
    bool generated = false;
  };
  std::vector<TaskOutcome> outcomes(nTasks);

  std::atomic<std::size_t> next{0};
  std::mutex errorMutex;
  std::exception_ptr fatal;
  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= nTasks) return;
      const double value = spec.values[t / spec.repetitions];
      const int rep = static_cast<int>(t % spec.repetitions);
      const std::uint64_t seed = runSeed(spec.baseSeed, value, rep);
      try {
        const DataCenter dc = generateDataCenter(sweepConfig(spec, value, seed));
        TaskOutcome& out = outcomes[t];
        for (std::size_t a = 0; a < nAlgo; ++a) {
          const auto runs = runDataCenter(dc, spec.algorithms[a], spec.model, spec.clusterSize,
                                          deriveSeed(seed, {5, a}));
          MetricsRow row = aggregateMetrics(runs, spec.timing);
          row.sweepValue = value;
          row.algorithm = spec.algorithms[a];
          out.rows.push_back(row);
        }
        out.generated = true;
      } catch (const InfeasibleError&) {
        // recorded as a failed repetition
      } catch (...) {
        std::lock_guard lock(errorMutex);
        if (!fatal) fatal = std::current_exception();
        next.store(nTasks);
      }
    }
  };

  const int nThreads = std::min<int>(spec.threads, static_cast<int>(nTasks));
  if (nThreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < nThreads; ++i) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  ExperimentResult result;
  result.sweep = spec.sweep;
  for (std::size_t v = 0; v < spec.values.size(); ++v) {
    for (std::size_t a = 0; a < nAlgo; ++a) {
      std::vector<MetricsRow> reps;
      int failures = 0;
      for (int r = 0; r < spec.repetitions; ++r) {
        const TaskOutcome& out = outcomes[v * spec.repetitions + r];
        if (!out.generated) {
          ++failures;
          continue;
        }
        reps.push_back(out.rows[a]);
        failures += out.rows[a].failures;
      }
      result.rows.push_back(summarize(reps, spec.values[v], spec.algorithms[a], failures));
    }
  }
  return result;
}

const std::vector<std::string>& metricColumns() {
  static const std::vector<std::string> columns = {
      "n_released_pm", "packing_efficiency", "power_kw", "wastage", "md_tb",  "mt_hours",
      "dt_hours",      "nc",                 "mo",       "mec_kj",  "msv",    "decision_time_sec",
  };
  return columns;
}

bool isTimingColumn(std::string_view column) { return column.starts_with("decision_time"); }

std::string toCsv(const ExperimentResult& result) {
  std::string out = "sweep,sweep_value,algorithm,n_vm,repetitions,failures";
  for (const std::string& c : metricColumns()) out += fmt::format(",{},{}_sd", c, c);
  out += '\n';
  for (const SummaryRow& row : result.rows) {
    out += fmt::format("{},{},{},{},{},{}", sweepName(result.sweep), row.mean.sweepValue,
                       algorithmName(row.mean.algorithm), row.mean.nVm, row.repetitions,
                       row.failures);
    for (Field f : kFields) out += fmt::format(",{},{}", row.mean.*f, row.sd.*f);
    out += '\n';
  }
  return out;
}

}  // namespace vmc
