#include "vmc/migration.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vmc/error.hpp"
#include "vmc/model.hpp"

namespace vmc {

void MigrationConfig::validate() const {
  double sum = 0.0;
  for (double a : alpha) {
    if (a < 0.0 || a > 1.0) throw ConfigError("overhead weights must lie in [0, 1]");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("overhead weights must sum to 1");
  if (maxRound < 1) throw ConfigError("max_round must be at least 1");
  if (!(dvThresholdMB > 0.0)) throw ConfigError("dirty memory threshold must be positive");
  if (sigma < 0.0 || sigma > 1.0) throw ConfigError("sigma must lie in [0, 1]");
  if (resumeSec < 0.0) throw ConfigError("resume time must be non-negative");
}

OverheadReport& OverheadReport::operator+=(const OverheadReport& o) {
  md += o.md;
  mt += o.mt;
  dt += o.dt;
  nc += o.nc;
  mo += o.mo;
  mec += o.mec;
  msv += o.msv;
  migrations += o.migrations;
  return *this;
}

MigrationFactors estimatePrecopy(double memMB, double dirtyRateMBps, double bandwidthMBps,
                                 double distance, const MigrationConfig& cfg) {
  if (!(bandwidthMBps > 0.0)) {
    throw NetworkModelError(fmt::format("migration bandwidth must be positive, got {}",
                                        bandwidthMBps));
  }
  MigrationFactors out;
  double dv = memMB;  // data sent in the current round
  for (int round = 0;; ++round) {
    const double t = dv / bandwidthMBps;
    out.md += dv;
    out.mt += t;

    const double dirtied = t * dirtyRateMBps;
    const double kappa = cfg.mu1 * t + cfg.mu2 * dirtyRateMBps + cfg.mu3;
    const double wws = kappa * t * dirtyRateMBps;
    const double next = std::max(0.0, dirtied - wws);

    if (next <= cfg.dvThresholdMB || next > dv || round + 1 >= cfg.maxRound) {
      // Stop-and-copy: the hot pages skipped so far go out too.
      const double tFinal = dirtied / bandwidthMBps;
      out.md += dirtied;
      out.mt += tFinal;
      out.dt = tFinal + cfg.resumeSec;
      break;
    }
    dv = next;
  }
  out.nc = out.md * distance;
  return out;
}

MigrationFactors estimateMigration(const VirtualMachine& vm, PmId dst, const NetworkModel& net,
                                   const MigrationConfig& cfg) {
  if (vm.hostPm == dst) return {};
  return estimatePrecopy(vm.demand.mem, vm.dirtyRate, net.bandwidthMBps(vm.hostPm, dst),
                         net.distance(vm.hostPm, dst), cfg);
}

double unifiedOverhead(const MigrationFactors& f, const NormalizationCaps& caps,
                       const MigrationConfig& cfg) {
  double mo = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (f[i] == 0.0) continue;
    mo += cfg.alpha[i] * std::clamp(f[i] / caps[i], 0.0, 1.0);
  }
  return mo;
}

double migrationEnergy(double mdMB, const MigrationConfig& cfg) {
  return cfg.gamma1 * mdMB + cfg.gamma2;
}

double slaViolation(const VirtualMachine& vm, double mtSec, const MigrationConfig& cfg) {
  return cfg.sigma * vm.demand.cpu * mtSec;
}

OverheadReport migrationOverhead(const VirtualMachine& vm, PmId dst, const NetworkModel& net,
                                 const MigrationConfig& cfg, const NormalizationCaps& caps) {
  if (vm.hostPm == dst) return {};
  const MigrationFactors f = estimateMigration(vm, dst, net, cfg);
  OverheadReport r;
  r.md = f.md;
  r.mt = f.mt;
  r.dt = f.dt;
  r.nc = f.nc;
  r.mo = unifiedOverhead(f, caps, cfg);
  r.mec = migrationEnergy(f.md, cfg);
  r.msv = slaViolation(vm, f.mt, cfg);
  r.migrations = 1;
  return r;
}

NormalizationCaps computeCaps(std::span<const VirtualMachine> vms, std::span<const PmId> pmIds,
                              const NetworkModel& net, const MigrationConfig& cfg) {
  double mx[4] = {0.0, 0.0, 0.0, 0.0};
  for (const auto& vm : vms) {
    for (PmId p : pmIds) {
      if (p == vm.hostPm) continue;
      const MigrationFactors f = estimateMigration(vm, p, net, cfg);
      for (int i = 0; i < 4; ++i) mx[i] = std::max(mx[i], f[i]);
    }
  }
  auto orOne = [](double x) { return x > 0.0 ? x : 1.0; };
  return {orOne(mx[0]), orOne(mx[1]), orOne(mx[2]), orOne(mx[3])};
}

OverheadReport aggregate(const MigrationMap& mm, std::span<const VirtualMachine> vms,
                         const NetworkModel& net, const MigrationConfig& cfg,
                         const NormalizationCaps& caps) {
  OverheadReport total;
  for (const auto& m : mm.entries) {
    const VirtualMachine* vm = findVm(vms, m.vm);
    if (vm == nullptr) throw ValidationError(fmt::format("map names unknown VM {}", m.vm));
    total += migrationOverhead(*vm, m.target, net, cfg, caps);
  }
  return total;
}

}  // namespace vmc
