// Command-line front end: generate snapshots, consolidate one, run sweeps
// and draw their figures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "vmc/config.hpp"
#include "vmc/error.hpp"
#include "vmc/experiment.hpp"
#include "vmc/plot.hpp"
#include "vmc/snapshot.hpp"

namespace {

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vmc::ConfigError(fmt::format("cannot write '{}'", path));
  out << text;
}

vmc::ModelConfig loadModel(const std::string& path) {
  if (path.empty()) return {};
  return vmc::parseModelConfig(vmc::readFile(path), path);
}

struct GenerateArgs {
  std::string out;
  std::string config;
  std::optional<int> nPm;
  std::optional<int> nVm;
  std::optional<double> meanRsc;
  std::optional<double> sdRsc;
  std::optional<std::uint64_t> seed;
};

int runGenerate(const GenerateArgs& args) {
  vmc::GenConfig gen = loadModel(args.config).gen;
  if (args.nPm) gen.nPm = *args.nPm;
  if (args.nVm) gen.nVm = *args.nVm;
  if (args.meanRsc) gen.meanRsc = *args.meanRsc;
  if (args.sdRsc) gen.sdRsc = *args.sdRsc;
  if (args.seed) gen.seed = *args.seed;
  const vmc::DataCenter dc = vmc::generateDataCenter(gen);
  vmc::writeSnapshotFile(dc, args.out);
  std::cerr << fmt::format("wrote {} PMs / {} VMs to {}\n", dc.pms.size(), dc.vms.size(),
                           args.out);
  return 0;
}

struct ConsolidateArgs {
  std::string algo = "amdvmc";
  std::string snapshot;
  std::string config;
  std::string traceCsv;
  int clusterSize = 8;
  std::uint64_t seed = 1;
};

int runConsolidate(const ConsolidateArgs& args) {
  const vmc::ModelConfig model = loadModel(args.config);
  const vmc::Algorithm algo = vmc::parseAlgorithm(args.algo);
  const vmc::DataCenter dc = vmc::readSnapshotFile(args.snapshot);
  const auto runs = vmc::runDataCenter(dc, algo, model, args.clusterSize, args.seed);
  const vmc::MetricsRow row = vmc::aggregateMetrics(runs, vmc::TimingMode::kDecentralized);

  std::cout << fmt::format("algorithm {}\n", vmc::algorithmName(algo));
  std::cout << fmt::format("clusters {}\n", runs.size());
  std::cout << fmt::format("n_vm {}\n", row.nVm);
  std::cout << fmt::format("n_released_pm {}\n", row.nReleasedPm);
  std::cout << fmt::format("packing_efficiency {}\n", row.packingEfficiency);
  std::cout << fmt::format("power_kw {}\n", row.powerKw);
  std::cout << fmt::format("wastage {}\n", row.wastage);
  std::cout << fmt::format("md_tb {}\n", row.mdTb);
  std::cout << fmt::format("mt_hours {}\n", row.mtHours);
  std::cout << fmt::format("dt_hours {}\n", row.dtHours);
  std::cout << fmt::format("nc {}\n", row.nc);
  std::cout << fmt::format("mo {}\n", row.mo);
  std::cout << fmt::format("mec_kj {}\n", row.mecKj);
  std::cout << fmt::format("msv {}\n", row.msv);
  std::cout << fmt::format("failures {}\n", row.failures);
  std::cout << fmt::format("decision_time_sec {}\n", row.decisionTimeSec);
  for (const auto& run : runs) {
    if (run.failed) std::cerr << fmt::format("cluster {}: {}\n", run.clusterId, run.error);
  }

  if (!args.traceCsv.empty()) {
    std::string csv = "cluster,cycle,best_score\n";
    for (const auto& run : runs) {
      for (std::size_t c = 0; c < run.trace.size(); ++c) {
        csv += fmt::format("{},{},{}\n", run.clusterId, c + 1, run.trace[c]);
      }
    }
    writeFile(args.traceCsv, csv);
  }
  return 0;
}

struct ExperimentArgs {
  std::string spec;
  std::string out;
  std::optional<int> threads;
  std::optional<int> repetitions;
  std::optional<std::uint64_t> seed;
};

int runExperimentCommand(const ExperimentArgs& args) {
  vmc::ExperimentSpec spec = vmc::parseExperimentSpec(vmc::readFile(args.spec), args.spec);
  if (args.threads) spec.threads = *args.threads;
  if (args.repetitions) spec.repetitions = *args.repetitions;
  if (args.seed) spec.baseSeed = *args.seed;
  const std::string csv = vmc::toCsv(vmc::runExperiment(spec));
  if (args.out.empty()) {
    std::cout << csv;
  } else {
    writeFile(args.out, csv);
  }
  return 0;
}

int runPlot(const std::string& csvPath, const std::string& outDir) {
  const vmc::CsvTable table = vmc::parseCsv(vmc::readFile(csvPath), csvPath);
  const vmc::PlotReport report = vmc::emitPlots(table, outDir);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : report.files) std::cout << f << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Migration-overhead-aware VM consolidation simulator"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a data center snapshot");
  generate->add_option("--out", gen.out, "Snapshot file to write")->required();
  generate->add_option("--config", gen.config, "Flat key = value model config");
  generate->add_option("--n-pm", gen.nPm, "Number of PMs");
  generate->add_option("--n-vm", gen.nVm, "Number of VMs (default 2 x PMs)");
  generate->add_option("--mean-rsc", gen.meanRsc, "Mean demand fraction");
  generate->add_option("--sd-rsc", gen.sdRsc, "Demand fraction standard deviation");
  generate->add_option("--seed", gen.seed, "Generator seed");

  ConsolidateArgs cons;
  auto* consolidate = app.add_subcommand("consolidate", "Consolidate a snapshot once");
  consolidate->add_option("--algo", cons.algo, "ffdl1, mmdvmc or amdvmc")
      ->check(CLI::IsMember({"ffdl1", "mmdvmc", "amdvmc"}));
  consolidate->add_option("--snapshot", cons.snapshot, "Snapshot file")->required();
  consolidate->add_option("--config", cons.config, "Flat key = value model config");
  consolidate->add_option("--cluster-size", cons.clusterSize, "PMs per cluster");
  consolidate->add_option("--seed", cons.seed, "Algorithm seed");
  consolidate->add_option("--trace-csv", cons.traceCsv, "Write per-cycle best scores here");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a parameter sweep");
  experiment->add_option("--spec", exp.spec, "Experiment spec file")->required();
  experiment->add_option("--out", exp.out, "CSV output (default stdout)");
  experiment->add_option("--threads", exp.threads, "Worker threads");
  experiment->add_option("--repetitions", exp.repetitions, "Override the repetition count");
  experiment->add_option("--seed", exp.seed, "Override the base seed");

  std::string csvPath;
  std::string outDir = "figures";
  auto* plot = app.add_subcommand("plot", "Draw SVG figures from an experiment CSV");
  plot->add_option("--csv", csvPath, "Experiment CSV")->required();
  plot->add_option("--out-dir", outDir, "Directory for the SVG files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(vmc::ErrorCategory::kConfig);
  }

  try {
    if (*generate) return runGenerate(gen);
    if (*consolidate) return runConsolidate(cons);
    if (*experiment) return runExperimentCommand(exp);
    if (*plot) return runPlot(csvPath, outDir);
  } catch (const vmc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(vmc::ErrorCategory::kRuntime);
  }
  return 0;
}
