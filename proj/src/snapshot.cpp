#include "vmc/snapshot.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>

#include "vmc/config.hpp"
#include "vmc/error.hpp"

namespace vmc {

namespace {

constexpr std::string_view kMagic = "vmc-snapshot";
constexpr std::string_view kSections[] = {"config", "pms", "vms", "bandwidth", "placement"};

struct Line {
  int number = 0;
  std::string_view text;
};

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(int line, std::string_view what) const {
    throw ConfigError(fmt::format("{}:{}: {}", source_, line, what));
  }

  template <typename T>
  T number(const Line& line, std::string_view token, std::string_view field) const {
    T out{};
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, out);
    if (ec != std::errc() || ptr != end) {
      fail(line.number, fmt::format("field '{}': cannot parse '{}'", field, token));
    }
    return out;
  }

  std::vector<std::string_view> fields(const Line& line, std::size_t expected,
                                       std::string_view section) const {
    auto t = tokens(line.text);
    if (t.size() != expected) {
      fail(line.number, fmt::format("[{}] row needs {} fields, found {}", section, expected,
                                    t.size()));
    }
    return t;
  }

 private:
  std::string_view source_;
};

bool isGenKey(const std::string& key) {
  static const std::set<std::string> keys = {
      "n_pm",    "n_vm",  "mean_rsc", "sd_rsc",           "pr",
      "pm_cpu_ghz", "pm_mem_mb", "pm_net_mbps", "mean_bw", "sd_bw",
      "df",      "ports_per_switch", "link_capacity_mbps", "seed"};
  return keys.contains(key);
}

}  // namespace

std::string saveSnapshot(const DataCenter& dc) {
  std::string out = fmt::format("{} {}\n", kMagic, kSnapshotVersion);

  out += "[config]\n";
  out += formatGenConfig(dc.config);

  out += "[pms]\n# id cpu_ghz mem_mb net_mbps\n";
  for (const PhysicalMachine& pm : dc.pms) {
    out += fmt::format("{} {} {} {}\n", pm.id, pm.capacity.cpu, pm.capacity.mem, pm.capacity.net);
  }

  out += "[vms]\n# id cpu_ghz mem_mb net_mbps dirty_rate_mbps\n";
  for (const VirtualMachine& vm : dc.vms) {
    out += fmt::format("{} {} {} {} {}\n", vm.id, vm.demand.cpu, vm.demand.mem, vm.demand.net,
                       vm.dirtyRate);
  }

  out += "[bandwidth]\n# row a: link fractions to PMs a+1 .. n-1\n";
  const int n = static_cast<int>(dc.pms.size());
  for (int a = 0; a + 1 < n; ++a) {
    std::string row;
    for (int b = a + 1; b < n; ++b) {
      if (b > a + 1) row += ' ';
      row += fmt::format("{}", dc.network.bandwidthFraction(a, b));
    }
    out += row;
    out += '\n';
  }

  out += "[placement]\n# vm host_pm\n";
  for (const VirtualMachine& vm : dc.vms) out += fmt::format("{} {}\n", vm.id, vm.hostPm);
  return out;
}

DataCenter loadSnapshot(std::string_view text, std::string_view source) {
  Parser parser(source);

  std::map<std::string, std::vector<Line>, std::less<>> sections;
  std::vector<Line>* current = nullptr;
  bool sawHeader = false;
  int number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    if (!sawHeader) {
      const auto t = tokens(line);
      if (t.size() != 2 || t[0] != kMagic) parser.fail(number, "not a vmc snapshot");
      const int version = parser.number<int>({number, line}, t[1], "version");
      if (version != kSnapshotVersion) {
        parser.fail(number, fmt::format("snapshot version {} is not supported (expected {})",
                                        version, kSnapshotVersion));
      }
      sawHeader = true;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') parser.fail(number, "unterminated section header");
      const std::string name(line.substr(1, line.size() - 2));
      if (std::find(std::begin(kSections), std::end(kSections), name) == std::end(kSections)) {
        parser.fail(number, fmt::format("unknown section [{}]", name));
      }
      if (sections.contains(name)) parser.fail(number, fmt::format("section [{}] repeated", name));
      current = &sections[name];
      continue;
    }
    if (current == nullptr) parser.fail(number, "data before the first section");
    current->push_back({number, line});
  }
  if (!sawHeader) parser.fail(number, "empty snapshot");
  for (std::string_view name : kSections) {
    if (!sections.contains(name)) {
      throw ConfigError(fmt::format("{}: truncated snapshot, missing section [{}]", source, name));
    }
  }

  DataCenter dc;
  ModelConfig model;
  for (const Line& line : sections.find("config")->second) {
    const auto eq = line.text.find('=');
    if (eq == std::string_view::npos) parser.fail(line.number, "expected 'key = value'");
    const auto t = tokens(line.text.substr(0, eq));
    const auto v = tokens(line.text.substr(eq + 1));
    if (t.size() != 1 || v.size() != 1) parser.fail(line.number, "expected 'key = value'");
    KeyValue kv{std::string(t[0]), std::string(v[0]), line.number};
    if (!isGenKey(kv.key)) parser.fail(line.number, fmt::format("unknown key '{}'", kv.key));
    applyModelKey(model, kv, source);
  }
  dc.config = model.gen;
  dc.config.validate();

  const int nPm = dc.config.nPm;
  const auto& pmLines = sections.find("pms")->second;
  if (static_cast<int>(pmLines.size()) != nPm) {
    throw ConfigError(fmt::format("{}: [pms] has {} rows, n_pm is {}", source, pmLines.size(), nPm));
  }
  dc.pms.resize(nPm);
  for (int p = 0; p < nPm; ++p) {
    const Line& line = pmLines[p];
    const auto f = parser.fields(line, 4, "pms");
    PhysicalMachine& pm = dc.pms[p];
    pm.id = parser.number<PmId>(line, f[0], "id");
    if (pm.id != p) parser.fail(line.number, fmt::format("field 'id': expected {}", p));
    pm.capacity = {parser.number<double>(line, f[1], "cpu_ghz"),
                   parser.number<double>(line, f[2], "mem_mb"),
                   parser.number<double>(line, f[3], "net_mbps")};
  }

  const auto& vmLines = sections.find("vms")->second;
  const int nVm = static_cast<int>(vmLines.size());
  if (dc.config.nVm != 0 && dc.config.nVm != nVm) {
    throw ConfigError(fmt::format("{}: [vms] has {} rows, n_vm is {}", source, nVm, dc.config.nVm));
  }
  dc.vms.resize(nVm);
  for (int v = 0; v < nVm; ++v) {
    const Line& line = vmLines[v];
    const auto f = parser.fields(line, 5, "vms");
    VirtualMachine& vm = dc.vms[v];
    vm.id = parser.number<VmId>(line, f[0], "id");
    if (vm.id != v) parser.fail(line.number, fmt::format("field 'id': expected {}", v));
    vm.demand = {parser.number<double>(line, f[1], "cpu_ghz"),
                 parser.number<double>(line, f[2], "mem_mb"),
                 parser.number<double>(line, f[3], "net_mbps")};
    vm.dirtyRate = parser.number<double>(line, f[4], "dirty_rate_mbps");
  }

  dc.network = NetworkModel(TreeTopology{dc.config.portsPerSwitch, dc.config.df, nPm},
                            dc.config.linkCapacityMbps);
  const auto& bwLines = sections.find("bandwidth")->second;
  if (static_cast<int>(bwLines.size()) != nPm - 1) {
    throw ConfigError(fmt::format("{}: [bandwidth] has {} rows, expected {}", source,
                                  bwLines.size(), nPm - 1));
  }
  for (int a = 0; a + 1 < nPm; ++a) {
    const Line& line = bwLines[a];
    const auto f = parser.fields(line, static_cast<std::size_t>(nPm - 1 - a), "bandwidth");
    for (int b = a + 1; b < nPm; ++b) {
      const double x = parser.number<double>(line, f[b - a - 1], fmt::format("bw[{}][{}]", a, b));
      if (!(x > 0.0 && x <= 1.0)) {
        parser.fail(line.number, fmt::format("field 'bw[{}][{}]': fraction outside (0, 1]", a, b));
      }
      dc.network.setBandwidthFraction(a, b, x);
    }
  }

  const auto& placeLines = sections.find("placement")->second;
  if (static_cast<int>(placeLines.size()) != nVm) {
    throw ConfigError(fmt::format("{}: [placement] has {} rows, expected {}", source,
                                  placeLines.size(), nVm));
  }
  for (int v = 0; v < nVm; ++v) {
    const Line& line = placeLines[v];
    const auto f = parser.fields(line, 2, "placement");
    if (parser.number<VmId>(line, f[0], "vm") != v) {
      parser.fail(line.number, fmt::format("field 'vm': expected {}", v));
    }
    const PmId host = parser.number<PmId>(line, f[1], "host_pm");
    if (host < 0 || host >= nPm) {
      parser.fail(line.number, fmt::format("field 'host_pm': unknown PM {}", host));
    }
    dc.vms[v].hostPm = host;
    dc.pms[host].hosted.push_back(v);  // ascending since v ascends
  }
  return dc;
}

void writeSnapshotFile(const DataCenter& dc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path));
  out << saveSnapshot(dc);
  if (!out) throw ConfigError(fmt::format("failed writing '{}'", path));
}

DataCenter readSnapshotFile(const std::string& path) {
  return loadSnapshot(readFile(path), path);
}

}  // namespace vmc
