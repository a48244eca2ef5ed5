#include "vmc/workload.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "vmc/error.hpp"
#include "vmc/random.hpp"

namespace vmc {

void GenConfig::validate() const {
  if (nPm < 1) throw ConfigError("n_pm must be at least 1");
  if (nVm < 0) throw ConfigError("n_vm must be non-negative");
  if (!(meanRsc > 0.0 && meanRsc < 1.0)) throw ConfigError("mean_rsc must lie in (0, 1)");
  if (!(sdRsc >= 0.0 && sdRsc < 1.0)) throw ConfigError("sd_rsc must lie in [0, 1)");
  if (!(pr >= 0.0 && pr <= 1.0)) throw ConfigError("pr must lie in [0, 1]");
  if (!pmCapacity.valid() || pmCapacity.cpu <= 0 || pmCapacity.mem <= 0 || pmCapacity.net <= 0) {
    throw ConfigError("PM capacity must be positive in every resource");
  }
  if (portsPerSwitch < 2) throw ConfigError("ports must be at least 2");
  if (!std::isfinite(meanBW) || !std::isfinite(sdBW)) throw ConfigError("bad bandwidth params");
}

const char* sweepName(SweepKind kind) {
  switch (kind) {
    case SweepKind::kPlain: return "plain";
    case SweepKind::kNp: return "np";
    case SweepKind::kMeanRsc: return "meanRsc";
    case SweepKind::kSdRsc: return "sdRsc";
  }
  return "?";
}

SweepKind parseSweepKind(const std::string& name) {
  if (name == "plain") return SweepKind::kPlain;
  if (name == "np") return SweepKind::kNp;
  if (name == "meanRsc" || name == "mean_rsc") return SweepKind::kMeanRsc;
  if (name == "sdRsc" || name == "sd_rsc") return SweepKind::kSdRsc;
  throw ConfigError(fmt::format("unknown sweep '{}' (expected np, meanRsc or sdRsc)", name));
}

int vmCount(int nPm, SweepKind kind, double sweepValue) {
  if (nPm < 1) throw ConfigError("n_pm must be at least 1");
  switch (kind) {
    case SweepKind::kPlain:
    case SweepKind::kNp:
      return 2 * nPm;
    case SweepKind::kMeanRsc:
    case SweepKind::kSdRsc: {
      if (sweepValue < 0.05 - 1e-9 || sweepValue > 0.30 + 1e-9) {
        throw ConfigError(fmt::format("{} value {} outside [0.05, 0.30]", sweepName(kind),
                                      sweepValue));
      }
      return static_cast<int>(std::lround(nPm * (0.55 - sweepValue) / 0.25));
    }
  }
  return 0;
}

std::vector<VirtualMachine> generateVms(const GenConfig& cfg, int nVm, std::mt19937_64& rng) {
  std::normal_distribution<double> standard(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<VirtualMachine> vms;
  vms.reserve(static_cast<std::size_t>(std::max(nVm, 0)));
  for (int i = 0; i < nVm; ++i) {
    VirtualMachine vm;
    vm.id = i;
    for (std::size_t r = 0; r < kResourceCount; ++r) {
      const double frac =
          std::clamp(cfg.meanRsc + cfg.sdRsc * standard(rng), kMinDemandFraction, 1.0);
      vm.demand[r] = frac * cfg.pmCapacity[r];
    }
    vm.dirtyRate = unit(rng) * cfg.pr * vm.demand.mem;
    vms.push_back(vm);
  }
  return vms;
}

void initialPlacement(std::vector<PhysicalMachine>& pms, std::vector<VirtualMachine>& vms,
                      std::mt19937_64& rng) {
  if (pms.empty()) throw InfeasibleError("no PMs to place VMs on");
  std::vector<std::size_t> order(vms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<ResourceVector> used(pms.size());
  for (auto& pm : pms) pm.hosted.clear();
  std::size_t cursor = 0;
  for (std::size_t idx : order) {
    VirtualMachine& vm = vms[idx];
    bool placed = false;
    for (std::size_t k = 0; k < pms.size(); ++k) {
      const std::size_t p = (cursor + k) % pms.size();
      if ((used[p] + vm.demand).fitsWithin(pms[p].capacity)) {
        used[p] += vm.demand;
        pms[p].hosted.push_back(vm.id);
        vm.hostPm = pms[p].id;
        cursor = (p + 1) % pms.size();
        placed = true;
        break;
      }
    }
    if (!placed) throw InfeasibleError(fmt::format("VM {} fits on no PM", vm.id));
  }
  for (auto& pm : pms) std::sort(pm.hosted.begin(), pm.hosted.end());
}

DataCenter generateDataCenter(const GenConfig& cfg) {
  cfg.validate();
  DataCenter dc;
  dc.config = cfg;

  TreeTopology topo{cfg.portsPerSwitch, cfg.df, cfg.nPm};
  dc.network = NetworkModel(topo, cfg.linkCapacityMbps);
  std::mt19937_64 bwRng(deriveSeed(cfg.seed, {1}));
  dc.network.sampleBandwidths(bwRng, cfg.meanBW, cfg.sdBW);

  const int nVm = cfg.effectiveVmCount();
  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    std::mt19937_64 vmRng(deriveSeed(cfg.seed, {2, static_cast<std::uint64_t>(attempt)}));
    std::mt19937_64 placeRng(deriveSeed(cfg.seed, {3, static_cast<std::uint64_t>(attempt)}));
    dc.vms = generateVms(cfg, nVm, vmRng);
    dc.pms.assign(static_cast<std::size_t>(cfg.nPm), {});
    for (int p = 0; p < cfg.nPm; ++p) {
      dc.pms[p].id = p;
      dc.pms[p].capacity = cfg.pmCapacity;
    }
    try {
      initialPlacement(dc.pms, dc.vms, placeRng);
      return dc;
    } catch (const InfeasibleError&) {
      // next derived seed
    }
  }
  throw InfeasibleError(fmt::format("no feasible initial placement after {} attempts",
                                    kPlacementAttempts));
}

}  // namespace vmc
