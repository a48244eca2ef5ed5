#include <gtest/gtest.h>

#include "vmc/error.hpp"
#include "vmc/experiment.hpp"
#include "vmc/snapshot.hpp"

namespace vmc {
namespace {

DataCenter smallDc(std::uint64_t seed = 5) {
  GenConfig gen;
  gen.nPm = 16;
  gen.nVm = 32;
  gen.seed = seed;
  return generateDataCenter(gen);
}

std::string errorOf(const std::string& text) {
  try {
    loadSnapshot(text, "snap");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Snapshot, RoundTripIsByteIdentical) {
  const std::string text = saveSnapshot(smallDc());
  EXPECT_EQ(saveSnapshot(loadSnapshot(text)), text);
}

TEST(Snapshot, RoundTripPreservesState) {
  const DataCenter dc = smallDc();
  const DataCenter back = loadSnapshot(saveSnapshot(dc));
  ASSERT_EQ(back.vms.size(), dc.vms.size());
  for (std::size_t v = 0; v < dc.vms.size(); ++v) {
    EXPECT_EQ(back.vms[v].demand, dc.vms[v].demand);
    EXPECT_EQ(back.vms[v].dirtyRate, dc.vms[v].dirtyRate);
    EXPECT_EQ(back.vms[v].hostPm, dc.vms[v].hostPm);
  }
  for (PmId a = 0; a < 16; ++a) {
    for (PmId b = 0; b < 16; ++b) {
      if (a != b) {
        EXPECT_EQ(back.network.bandwidthFraction(a, b), dc.network.bandwidthFraction(a, b));
      }
    }
  }
}

TEST(Snapshot, TruncationNamesMissingSection) {
  const std::string text = saveSnapshot(smallDc());
  const std::string cut = text.substr(0, text.find("[placement]"));
  const std::string err = errorOf(cut);
  EXPECT_NE(err.find("truncated"), std::string::npos) << err;
  EXPECT_NE(err.find("placement"), std::string::npos) << err;
}

TEST(Snapshot, VersionMismatchIsRejected) {
  std::string text = saveSnapshot(smallDc());
  text.replace(0, text.find('\n'), "vmc-snapshot 99");
  EXPECT_NE(errorOf(text).find("version"), std::string::npos) << errorOf(text);
  EXPECT_FALSE(errorOf("hello\n").empty());
}

TEST(Snapshot, BadRowsNameTheLine) {
  std::string text = saveSnapshot(smallDc());
  const auto at = text.find("[placement]");
  const auto rowStart = text.find('\n', text.find('\n', at) + 1) + 1;
  text.replace(rowStart, text.find('\n', rowStart) - rowStart, "0 999");
  const std::string err = errorOf(text);
  EXPECT_NE(err.find("snap:"), std::string::npos) << err;
}

TEST(Snapshot, ReconsolidationIsDeterministic) {
  const DataCenter dc = loadSnapshot(saveSnapshot(smallDc(8)));
  const ModelConfig model;
  const auto a = runDataCenter(dc, Algorithm::kAmdvmc, model, 8, 4);
  const auto b = runDataCenter(dc, Algorithm::kAmdvmc, model, 8, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].eval.releasedPms, b[i].eval.releasedPms);
    EXPECT_EQ(a[i].eval.overhead.mo, b[i].eval.overhead.mo);
    EXPECT_EQ(a[i].trace, b[i].trace);
  }
}

}  // namespace
}  // namespace vmc
