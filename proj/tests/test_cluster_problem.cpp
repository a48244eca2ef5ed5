#include <gtest/gtest.h>

#include "helpers.hpp"
#include "vmc/error.hpp"

namespace vmc {
namespace {

using testing::fractions;
using testing::makeToy;

TEST(ClusterProblem, TableMatchesDirectEstimates) {
  auto toy = makeToy(3, {fractions(0.1, 0.2, 0.1), fractions(0.2, 0.1, 0.3)}, {0, 2}, 0.3,
                     {20.0, 80.0});
  const ClusterProblem& p = *toy.problem;
  for (int v = 0; v < p.vmCount(); ++v) {
    for (int q = 0; q < p.pmCount(); ++q) {
      const OverheadReport r = migrationOverhead(p.vm(v), p.pm(q).id, *toy.net, p.config(), p.caps());
      EXPECT_EQ(p.overhead(v, q).mo, r.mo);
      EXPECT_EQ(p.overhead(v, q).mec, r.mec);
      EXPECT_EQ(p.overhead(v, q).factors.md, r.md);
    }
    EXPECT_EQ(p.overhead(v, p.hostIndex(v)).mo, 0.0);
  }
}

TEST(ClusterProblem, MapConversionsRoundTrip) {
  auto toy = makeToy(3, {fractions(0.1, 0.1, 0.1), fractions(0.1, 0.1, 0.1)}, {1, 2});
  const ClusterProblem& p = *toy.problem;
  const std::vector<int> targets{0, 0};
  const MigrationMap mm = p.toMap(targets);
  EXPECT_EQ(p.toTargets(mm), targets);
  EXPECT_EQ(p.releasedCount(targets), 2);
  EXPECT_EQ(p.migrationCount(targets), 2);
  EXPECT_EQ(p.releasedCount(p.identityTargets()), 0);
  EXPECT_EQ(p.totalOverhead(p.identityTargets()), 0.0);
}

TEST(ClusterProblem, ForeignIdsAreRejected) {
  auto toy = makeToy(2, {fractions(0.1, 0.1, 0.1)}, {0});
  MigrationMap mm{{{0, 5}}};
  EXPECT_THROW(toy.problem->toTargets(mm), ValidationError);
}

TEST(Evaluate, ScoresAndMetrics) {
  // Two half-loaded PMs whose VMs co-fit on one.
  auto toy = makeToy(2, {fractions(0.4, 0.4, 0.4), fractions(0.4, 0.4, 0.4)}, {0, 1}, 0.5);
  const ClusterProblem& p = *toy.problem;
  const std::vector<int> merged{0, 0};
  const ClusterEvaluation e = evaluate(p, p.toMap(merged));
  EXPECT_EQ(e.releasedPms, 1);
  EXPECT_EQ(e.activePmsAfter, 1);
  EXPECT_EQ(e.vmCount, 2);
  EXPECT_DOUBLE_EQ(e.powerWatts, 162.0 + 53.0 * 0.8);
  EXPECT_EQ(e.overhead.migrations, 1);
  EXPECT_DOUBLE_EQ(e.f, 1.0 / p.overhead(1, 0).mo);
  EXPECT_DOUBLE_EQ(objective(p.toMap(merged), p), e.f);
}

TEST(Evaluate, InvalidMapListsViolations) {
  auto toy = makeToy(2, {fractions(0.6, 0.1, 0.1), fractions(0.6, 0.1, 0.1)}, {0, 1});
  const std::vector<int> merged{0, 0};
  try {
    evaluate(*toy.problem, toy.problem->toMap(merged));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("PM 0"), std::string::npos) << e.what();
  }
}

}  // namespace
}  // namespace vmc
