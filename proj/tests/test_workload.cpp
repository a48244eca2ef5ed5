#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vmc/error.hpp"
#include "vmc/model.hpp"
#include "vmc/workload.hpp"

namespace vmc {
namespace {

TEST(VmCount, Examples) {
  EXPECT_EQ(vmCount(1024, SweepKind::kMeanRsc, 0.05), 2048);
  EXPECT_EQ(vmCount(1024, SweepKind::kMeanRsc, 0.30), 1024);
  EXPECT_EQ(vmCount(64, SweepKind::kPlain), 128);
  EXPECT_EQ(vmCount(64, SweepKind::kNp), 128);
}

TEST(VmCount, SweepTable) {
  // nPm = 1024 across the sweep grid: 2048, 1843, 1638, 1434, 1229, 1024.
  const int expected[] = {2048, 1843, 1638, 1434, 1229, 1024};
  const double values[] = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(vmCount(1024, SweepKind::kMeanRsc, values[i]), expected[i]) << values[i];
    EXPECT_EQ(vmCount(1024, SweepKind::kSdRsc, values[i]), expected[i]) << values[i];
  }
}

TEST(VmCount, OutOfRangeIsConfigError) {
  EXPECT_THROW(vmCount(64, SweepKind::kMeanRsc, 0.04), ConfigError);
  EXPECT_THROW(vmCount(64, SweepKind::kSdRsc, 0.31), ConfigError);
  EXPECT_THROW(vmCount(0, SweepKind::kNp), ConfigError);
}

TEST(GenerateVms, ZeroSpreadGivesExactMean) {
  GenConfig cfg;
  cfg.sdRsc = 0.0;
  for (double mean : {0.05, 0.1, 0.3}) {
    cfg.meanRsc = mean;
    std::mt19937_64 rng(1);
    for (const auto& vm : generateVms(cfg, 50, rng)) {
      EXPECT_EQ(vm.demand.cpu, mean * 5.0);
      EXPECT_EQ(vm.demand.mem, mean * 10240.0);
      EXPECT_EQ(vm.demand.net, mean * 1000.0);
    }
  }
}

TEST(GenerateVms, DrawsAreClamped) {
  GenConfig cfg;
  cfg.meanRsc = 0.3;
  cfg.sdRsc = 5.0;  // most draws land outside [0.005, 1]
  std::mt19937_64 rng(2);
  bool sawCeiling = false, sawFloor = false;
  for (const auto& vm : generateVms(cfg, 500, rng)) {
    EXPECT_GE(vm.demand.cpu, 0.005 * 5.0);
    EXPECT_LE(vm.demand.cpu, 5.0);
    sawCeiling |= vm.demand.cpu == 5.0;
    sawFloor |= vm.demand.cpu == 0.005 * 5.0;
  }
  EXPECT_TRUE(sawCeiling);
  EXPECT_TRUE(sawFloor);
}

TEST(GenerateVms, DirtyRateBounds) {
  GenConfig cfg;
  std::mt19937_64 rng(3);
  for (const auto& vm : generateVms(cfg, 2000, rng)) {
    EXPECT_GE(vm.dirtyRate, 0.0);
    EXPECT_LE(vm.dirtyRate, 0.25 * vm.demand.mem);
  }
  cfg.pr = 0.0;
  for (const auto& vm : generateVms(cfg, 100, rng)) EXPECT_EQ(vm.dirtyRate, 0.0);
}

TEST(GenerateVms, SampleMeanWithinThreeStandardErrors) {
  for (double mean : {0.1, 0.2, 0.3}) {
    for (double sd : {0.05, 0.1, 0.3}) {
      GenConfig cfg;
      cfg.meanRsc = mean;
      cfg.sdRsc = sd;
      std::mt19937_64 rng(static_cast<std::uint64_t>(mean * 1000 + sd * 100));
      const int n = 4000;
      const auto vms = generateVms(cfg, n, rng);
      // Clamping into [0.005, 1] shifts the mean; expectation of a clamped
      // normal in closed form.
      const double lo = 0.005, hi = 1.0;
      const double a = (lo - mean) / sd, b = (hi - mean) / sd;
      auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI); };
      auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
      const double expected = lo * cdf(a) + hi * (1 - cdf(b)) +
                              mean * (cdf(b) - cdf(a)) + sd * (pdf(a) - pdf(b));
      double sum = 0.0;
      for (const auto& vm : vms) sum += vm.demand.cpu / 5.0;
      const double se = sd / std::sqrt(static_cast<double>(n));
      EXPECT_NEAR(sum / n, expected, 3 * se) << mean << " " << sd;
    }
  }
}

std::vector<PhysicalMachine> emptyPms(int n) {
  std::vector<PhysicalMachine> pms(n);
  for (int i = 0; i < n; ++i) {
    pms[i].id = i;
    pms[i].capacity = {5.0, 10240.0, 1000.0};
  }
  return pms;
}

TEST(Placement, UniformSmallVmsTwoPerPm) {
  std::vector<VirtualMachine> vms(16);
  for (int i = 0; i < 16; ++i) {
    vms[i].id = i;
    vms[i].demand = {0.5, 512, 50};
  }
  auto pms = emptyPms(8);
  std::mt19937_64 rng(4);
  initialPlacement(pms, vms, rng);
  for (const auto& pm : pms) EXPECT_EQ(pm.hosted.size(), 2u);
}

TEST(Placement, OneVmOnePmActive) {
  std::vector<VirtualMachine> vms(1);
  vms[0].demand = {0.5, 512, 50};
  auto pms = emptyPms(4);
  std::mt19937_64 rng(5);
  initialPlacement(pms, vms, rng);
  int active = 0;
  for (const auto& pm : pms) active += pm.active();
  EXPECT_EQ(active, 1);
}

TEST(Placement, OversizedVmIsHardError) {
  GenConfig cfg;
  cfg.nPm = 2;
  cfg.nVm = 5;
  cfg.meanRsc = 0.9;
  cfg.sdRsc = 0.0;
  EXPECT_THROW(generateDataCenter(cfg), InfeasibleError);
}

TEST(DataCenter, SameSeedIsBitIdentical) {
  GenConfig cfg;
  cfg.nPm = 48;
  cfg.seed = 99;
  const DataCenter a = generateDataCenter(cfg);
  const DataCenter b = generateDataCenter(cfg);
  ASSERT_EQ(a.vms.size(), b.vms.size());
  for (std::size_t i = 0; i < a.vms.size(); ++i) {
    EXPECT_EQ(a.vms[i].demand, b.vms[i].demand);
    EXPECT_EQ(a.vms[i].dirtyRate, b.vms[i].dirtyRate);
    EXPECT_EQ(a.vms[i].hostPm, b.vms[i].hostPm);
  }
  EXPECT_TRUE(std::equal(a.network.bandwidthTable().begin(), a.network.bandwidthTable().end(),
                         b.network.bandwidthTable().begin()));
  cfg.seed = 100;
  const DataCenter c = generateDataCenter(cfg);
  EXPECT_NE(a.vms[0].demand, c.vms[0].demand);
}

TEST(DataCenter, PlacementsPassValidation) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenConfig cfg;
    cfg.nPm = 32;
    cfg.seed = seed;
    cfg.meanRsc = 0.05 + 0.0125 * (seed % 20);
    cfg.nVm = vmCount(32, SweepKind::kMeanRsc, cfg.meanRsc);
    const DataCenter dc = generateDataCenter(cfg);
    EXPECT_TRUE(validateMap(identityMap(dc.vms), dc.vms, dc.pms).ok()) << seed;
    EXPECT_EQ(static_cast<int>(dc.vms.size()), cfg.nVm);
  }
}

TEST(GenConfig, ValidationRejectsBadValues) {
  GenConfig cfg;
  cfg.nPm = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.pr = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.meanRsc = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace vmc
