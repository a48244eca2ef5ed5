#pragma once

#include <string>
#include <string_view>

#include "vmc/workload.hpp"

namespace vmc {

inline constexpr int kSnapshotVersion = 1;

/// Text snapshot of a data center:
///
///   vmc-snapshot 1
///   [config]      generator settings, key = value
///   [pms]         id cpu mem net
///   [vms]         id cpu mem net dirty_rate
///   [bandwidth]   one row per PM a, link fractions to every b > a
///   [placement]   vm host
///
/// Numbers use the shortest text that reads back to the same double, so
/// save(load(save(dc))) == save(dc) byte for byte.
std::string saveSnapshot(const DataCenter& dc);

/// Throws ConfigError naming the line and field on malformed input, a
/// version mismatch or a missing section.
DataCenter loadSnapshot(std::string_view text, std::string_view source = "snapshot");

void writeSnapshotFile(const DataCenter& dc, const std::string& path);
DataCenter readSnapshotFile(const std::string& path);

}  // namespace vmc
