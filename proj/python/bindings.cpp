#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "vmc/config.hpp"
#include "vmc/error.hpp"
#include "vmc/experiment.hpp"
#include "vmc/migration.hpp"
#include "vmc/model.hpp"
#include "vmc/snapshot.hpp"
#include "vmc/workload.hpp"

namespace py = pybind11;

namespace {

py::dict metricsDict(const vmc::MetricsRow& row) {
  py::dict d;
  d["algorithm"] = vmc::algorithmName(row.algorithm);
  d["n_vm"] = row.nVm;
  d["n_released_pm"] = row.nReleasedPm;
  d["packing_efficiency"] = row.packingEfficiency;
  d["power_kw"] = row.powerKw;
  d["wastage"] = row.wastage;
  d["md_tb"] = row.mdTb;
  d["mt_hours"] = row.mtHours;
  d["dt_hours"] = row.dtHours;
  d["nc"] = row.nc;
  d["mo"] = row.mo;
  d["mec_kj"] = row.mecKj;
  d["msv"] = row.msv;
  d["failures"] = row.failures;
  d["decision_time_sec"] = row.decisionTimeSec;
  return d;
}

}  // namespace

PYBIND11_MODULE(_vmc, m) {
  m.doc() = "Migration-overhead-aware VM consolidation simulator";

  auto base = py::register_exception<vmc::Error>(m, "VmcError");
  py::register_exception<vmc::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<vmc::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<vmc::NetworkModelError>(m, "NetworkModelError", base.ptr());
  py::register_exception<vmc::InfeasibleError>(m, "InfeasibleError", base.ptr());

  py::class_<vmc::GenConfig>(m, "GenConfig")
      .def(py::init<>())
      .def_readwrite("n_pm", &vmc::GenConfig::nPm)
      .def_readwrite("n_vm", &vmc::GenConfig::nVm)
      .def_readwrite("mean_rsc", &vmc::GenConfig::meanRsc)
      .def_readwrite("sd_rsc", &vmc::GenConfig::sdRsc)
      .def_readwrite("pr", &vmc::GenConfig::pr)
      .def_readwrite("mean_bw", &vmc::GenConfig::meanBW)
      .def_readwrite("sd_bw", &vmc::GenConfig::sdBW)
      .def_readwrite("df", &vmc::GenConfig::df)
      .def_readwrite("ports_per_switch", &vmc::GenConfig::portsPerSwitch)
      .def_readwrite("seed", &vmc::GenConfig::seed);

  py::class_<vmc::MigrationConfig>(m, "MigrationConfig")
      .def(py::init<>())
      .def_readwrite("dv_threshold_mb", &vmc::MigrationConfig::dvThresholdMB)
      .def_readwrite("max_round", &vmc::MigrationConfig::maxRound)
      .def_readwrite("resume_sec", &vmc::MigrationConfig::resumeSec)
      .def_readwrite("gamma1", &vmc::MigrationConfig::gamma1)
      .def_readwrite("gamma2", &vmc::MigrationConfig::gamma2)
      .def_readwrite("sigma", &vmc::MigrationConfig::sigma);

  py::class_<vmc::MigrationFactors>(m, "MigrationFactors")
      .def_readonly("md", &vmc::MigrationFactors::md)
      .def_readonly("mt", &vmc::MigrationFactors::mt)
      .def_readonly("dt", &vmc::MigrationFactors::dt)
      .def_readonly("nc", &vmc::MigrationFactors::nc);

  py::class_<vmc::DataCenter>(m, "DataCenter")
      .def_property_readonly("n_pm", [](const vmc::DataCenter& dc) { return dc.pms.size(); })
      .def_property_readonly("n_vm", [](const vmc::DataCenter& dc) { return dc.vms.size(); })
      .def_property_readonly("hosts",
                             [](const vmc::DataCenter& dc) {
                               std::vector<int> hosts;
                               for (const auto& vm : dc.vms) hosts.push_back(vm.hostPm);
                               return hosts;
                             })
      .def_property_readonly("demands", [](const vmc::DataCenter& dc) {
        std::vector<std::array<double, 3>> out;
        for (const auto& vm : dc.vms) out.push_back({vm.demand.cpu, vm.demand.mem, vm.demand.net});
        return out;
      });

  m.def("generate_data_center", &vmc::generateDataCenter, py::arg("config"));
  m.def("save_snapshot", &vmc::saveSnapshot, py::arg("data_center"));
  m.def("load_snapshot",
        [](const std::string& text) { return vmc::loadSnapshot(text, "snapshot"); },
        py::arg("text"));

  m.def("estimate_precopy", &vmc::estimatePrecopy, py::arg("mem_mb"), py::arg("dirty_rate_mbps"),
        py::arg("bandwidth_mbps"), py::arg("distance"),
        py::arg("config") = vmc::MigrationConfig{});
  m.def("power_from_cpu_fraction",
        [](double f) { return vmc::powerFromCpuFraction(f); }, py::arg("cpu_fraction"));
  m.def("vm_count",
        [](int nPm, const std::string& sweep, double value) {
          return vmc::vmCount(nPm, vmc::parseSweepKind(sweep), value);
        },
        py::arg("n_pm"), py::arg("sweep") = "np", py::arg("value") = 0.0);

  m.def("consolidate",
        [](const vmc::DataCenter& dc, const std::string& algo, int clusterSize,
           std::uint64_t seed, const std::string& configText) {
          const vmc::ModelConfig model =
              configText.empty() ? vmc::ModelConfig{}
                                 : vmc::parseModelConfig(configText, "config");
          const auto runs =
              vmc::runDataCenter(dc, vmc::parseAlgorithm(algo), model, clusterSize, seed);
          return metricsDict(vmc::aggregateMetrics(runs, vmc::TimingMode::kDecentralized));
        },
        py::arg("data_center"), py::arg("algo") = "amdvmc", py::arg("cluster_size") = 8,
        py::arg("seed") = 1, py::arg("config") = "",
        "Consolidates every cluster and returns data-center-wide metrics.");

  m.def("run_experiment",
        [](const std::string& specText) {
          const vmc::ExperimentSpec spec = vmc::parseExperimentSpec(specText, "spec");
          py::gil_scoped_release release;
          return vmc::toCsv(vmc::runExperiment(spec));
        },
        py::arg("spec"), "Runs a sweep described by flat key = value text; returns CSV.");
}
