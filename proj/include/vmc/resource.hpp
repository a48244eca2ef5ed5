#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace vmc {

using VmId = std::int32_t;
using PmId = std::int32_t;

/// Number of resource dimensions: CPU, memory, network I/O.
inline constexpr std::size_t kResourceCount = 3;

enum class Resource : std::size_t { kCpu = 0, kMem = 1, kNet = 2 };

const char* resourceName(std::size_t r);

/// CPU in GHz, memory in MB, network in Mbps. Used both for capacities and
/// demands.
struct ResourceVector {
  double cpu = 0.0;
  double mem = 0.0;
  double net = 0.0;

  double operator[](std::size_t r) const {
    return r == 0 ? cpu : (r == 1 ? mem : net);
  }
  double& operator[](std::size_t r) { return r == 0 ? cpu : (r == 1 ? mem : net); }

  ResourceVector& operator+=(const ResourceVector& o) {
    cpu += o.cpu;
    mem += o.mem;
    net += o.net;
    return *this;
  }
  ResourceVector& operator-=(const ResourceVector& o) {
    cpu -= o.cpu;
    mem -= o.mem;
    net -= o.net;
    return *this;
  }
  friend ResourceVector operator+(ResourceVector a, const ResourceVector& b) { return a += b; }
  friend ResourceVector operator-(ResourceVector a, const ResourceVector& b) { return a -= b; }
  friend bool operator==(const ResourceVector&, const ResourceVector&) = default;

  /// Component-wise a <= b.
  bool fitsWithin(const ResourceVector& limit) const {
    return cpu <= limit.cpu && mem <= limit.mem && net <= limit.net;
  }

  /// True when every component is finite and non-negative.
  bool valid() const;
};

struct VirtualMachine {
  VmId id = 0;
  ResourceVector demand;
  double dirtyRate = 0.0;  // MB/s
  PmId hostPm = 0;
};

struct PhysicalMachine {
  PmId id = 0;
  ResourceVector capacity;
  std::vector<VmId> hosted;  // kept sorted

  bool active() const { return !hosted.empty(); }
};

struct Migration {
  VmId vm = 0;
  PmId target = 0;

  friend bool operator==(const Migration&, const Migration&) = default;
};

/// A consolidation decision: one target PM per VM. Entries whose target is
/// the current host are non-moves.
struct MigrationMap {
  std::vector<Migration> entries;

  friend bool operator==(const MigrationMap&, const MigrationMap&) = default;
};

}  // namespace vmc
