#pragma once

#include <span>

#include "vmc/resource.hpp"
#include "vmc/topology.hpp"

namespace vmc {

/// Pre-copy migration and overhead-model constants. Defaults are the
/// reference hypervisor and energy-model values.
struct MigrationConfig {
  double dvThresholdMB = 200.0;  // remaining dirty memory that triggers stop-and-copy
  int maxRound = 20;
  double mu1 = -0.0463;  // writable working set coefficients
  double mu2 = -0.0001;
  double mu3 = 0.3586;
  double resumeSec = 0.020;
  double alpha[4] = {0.25, 0.25, 0.25, 0.25};  // MD, MT, DT, NC weights
  double gamma1 = 0.512;   // J per MB
  double gamma2 = 20.165;  // J per migration
  double sigma = 0.1;      // fraction of CPU lost while migrating

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

/// The four per-migration overhead factors.
struct MigrationFactors {
  double md = 0.0;  // MB transferred
  double mt = 0.0;  // s
  double dt = 0.0;  // s
  double nc = 0.0;  // MB x distance

  double operator[](int i) const { return i == 0 ? md : i == 1 ? mt : i == 2 ? dt : nc; }
  friend bool operator==(const MigrationFactors&, const MigrationFactors&) = default;
};

struct OverheadReport {
  double md = 0.0;
  double mt = 0.0;
  double dt = 0.0;
  double nc = 0.0;
  double mo = 0.0;   // normalized unified overhead
  double mec = 0.0;  // J
  double msv = 0.0;  // GHz x s
  int migrations = 0;

  OverheadReport& operator+=(const OverheadReport& o);
};

struct NormalizationCaps {
  double md = 1.0;
  double mt = 1.0;
  double dt = 1.0;
  double nc = 1.0;

  double operator[](int i) const { return i == 0 ? md : i == 1 ? mt : i == 2 ? dt : nc; }
};

/// Pre-copy trace for one cross-PM move with a fixed link. Rounds continue
/// until the next round's dirty data drops to the threshold, grows, or the
/// round budget runs out; a final stop-and-copy round then sends everything
/// dirtied during the last round. Throws NetworkModelError when
/// bandwidthMBps <= 0.
MigrationFactors estimatePrecopy(double memMB, double dirtyRateMBps, double bandwidthMBps,
                                 double distance, const MigrationConfig& cfg);

/// Same as estimatePrecopy with the link taken from the network model; all
/// zero when dst is the VM's current host.
MigrationFactors estimateMigration(const VirtualMachine& vm, PmId dst, const NetworkModel& net,
                                   const MigrationConfig& cfg);

/// sum_i alpha_i * clamp(factor_i / cap_i, 0, 1).
double unifiedOverhead(const MigrationFactors& f, const NormalizationCaps& caps,
                       const MigrationConfig& cfg);

/// gamma1 * md + gamma2, in Joules.
double migrationEnergy(double mdMB, const MigrationConfig& cfg);

/// sigma * cpu demand * mt.
double slaViolation(const VirtualMachine& vm, double mtSec, const MigrationConfig& cfg);

/// Every overhead figure for a single move; all zero when dst is the host.
OverheadReport migrationOverhead(const VirtualMachine& vm, PmId dst, const NetworkModel& net,
                                 const MigrationConfig& cfg, const NormalizationCaps& caps);

/// Per-factor maxima over every cross-PM (vm, pm) pair; zero maxima become 1.
NormalizationCaps computeCaps(std::span<const VirtualMachine> vms, std::span<const PmId> pmIds,
                              const NetworkModel& net, const MigrationConfig& cfg);

/// Component-wise sums over a map's entries. Throws ValidationError when an
/// entry names an unknown VM.
OverheadReport aggregate(const MigrationMap& mm, std::span<const VirtualMachine> vms,
                         const NetworkModel& net, const MigrationConfig& cfg,
                         const NormalizationCaps& caps);

}  // namespace vmc
