#include "vmc/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "vmc/error.hpp"

namespace vmc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void badValue(const KeyValue& kv, std::string_view source, std::string_view what) {
  throw ConfigError(fmt::format("{}:{}: key '{}': {} (got '{}')", source, kv.line, kv.key, what,
                                kv.value));
}

template <typename T>
T parseNumber(std::string_view text, const KeyValue& kv, std::string_view source,
              std::string_view what) {
  T out{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end || text.empty()) badValue(kv, source, what);
  return out;
}

std::vector<std::string_view> splitList(std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto stop = comma == std::string_view::npos ? text.size() : comma;
    items.push_back(trim(text.substr(start, stop - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

using Setter = std::function<void(ModelConfig&, const KeyValue&, std::string_view)>;

template <typename Section>
Setter doubleField(Section ModelConfig::*section, double Section::*field) {
  return [=](ModelConfig& c, const KeyValue& kv, std::string_view src) {
    (c.*section).*field = parseDouble(kv, src);
  };
}

template <typename Section>
Setter intField(Section ModelConfig::*section, int Section::*field) {
  return [=](ModelConfig& c, const KeyValue& kv, std::string_view src) {
    (c.*section).*field = parseInt(kv, src);
  };
}

Setter capacityField(double ResourceVector::*field) {
  return [=](ModelConfig& c, const KeyValue& kv, std::string_view src) {
    c.gen.pmCapacity.*field = parseDouble(kv, src);
  };
}

Setter alphaField(int i) {
  return [=](ModelConfig& c, const KeyValue& kv, std::string_view src) {
    c.migration.alpha[i] = parseDouble(kv, src);
  };
}

const std::vector<std::pair<std::string, Setter>>& modelKeys() {
  static const std::vector<std::pair<std::string, Setter>> keys = {
      // generator
      {"n_pm", intField(&ModelConfig::gen, &GenConfig::nPm)},
      {"n_vm", intField(&ModelConfig::gen, &GenConfig::nVm)},
      {"mean_rsc", doubleField(&ModelConfig::gen, &GenConfig::meanRsc)},
      {"sd_rsc", doubleField(&ModelConfig::gen, &GenConfig::sdRsc)},
      {"pr", doubleField(&ModelConfig::gen, &GenConfig::pr)},
      {"pm_cpu_ghz", capacityField(&ResourceVector::cpu)},
      {"pm_mem_mb", capacityField(&ResourceVector::mem)},
      {"pm_net_mbps", capacityField(&ResourceVector::net)},
      {"mean_bw", doubleField(&ModelConfig::gen, &GenConfig::meanBW)},
      {"sd_bw", doubleField(&ModelConfig::gen, &GenConfig::sdBW)},
      {"df", doubleField(&ModelConfig::gen, &GenConfig::df)},
      {"ports_per_switch", intField(&ModelConfig::gen, &GenConfig::portsPerSwitch)},
      {"link_capacity_mbps", doubleField(&ModelConfig::gen, &GenConfig::linkCapacityMbps)},
      {"seed",
       [](ModelConfig& c, const KeyValue& kv, std::string_view src) {
         c.gen.seed = parseUint64(kv, src);
       }},
      // pre-copy and overhead model
      {"dv_threshold_mb", doubleField(&ModelConfig::migration, &MigrationConfig::dvThresholdMB)},
      {"max_round", intField(&ModelConfig::migration, &MigrationConfig::maxRound)},
      {"mu1", doubleField(&ModelConfig::migration, &MigrationConfig::mu1)},
      {"mu2", doubleField(&ModelConfig::migration, &MigrationConfig::mu2)},
      {"mu3", doubleField(&ModelConfig::migration, &MigrationConfig::mu3)},
      {"resume_sec", doubleField(&ModelConfig::migration, &MigrationConfig::resumeSec)},
      {"alpha_md", alphaField(0)},
      {"alpha_mt", alphaField(1)},
      {"alpha_dt", alphaField(2)},
      {"alpha_nc", alphaField(3)},
      {"gamma1", doubleField(&ModelConfig::migration, &MigrationConfig::gamma1)},
      {"gamma2", doubleField(&ModelConfig::migration, &MigrationConfig::gamma2)},
      {"sigma", doubleField(&ModelConfig::migration, &MigrationConfig::sigma)},
      // overhead-aware ACS
      {"n_ants", intField(&ModelConfig::acs, &AcsParams::nAnts)},
      {"n_cycle_term", intField(&ModelConfig::acs, &AcsParams::nCycleTerm)},
      {"n_reset_max", intField(&ModelConfig::acs, &AcsParams::nResetMax)},
      {"beta", doubleField(&ModelConfig::acs, &AcsParams::beta)},
      {"delta", doubleField(&ModelConfig::acs, &AcsParams::delta)},
      {"q0", doubleField(&ModelConfig::acs, &AcsParams::q0)},
      {"omega", doubleField(&ModelConfig::acs, &AcsParams::omega)},
      {"lambda", doubleField(&ModelConfig::acs, &AcsParams::lambda)},
      {"phi", doubleField(&ModelConfig::acs, &AcsParams::phi)},
      {"reset_rule",
       [](ModelConfig& c, const KeyValue& kv, std::string_view src) {
         if (kv.value == "on_improvement") {
           c.acs.resetRule = ResetRule::kOnImprovement;
         } else if (kv.value == "total_cycles") {
           c.acs.resetRule = ResetRule::kTotalCycles;
         } else {
           badValue(kv, src, "expected on_improvement or total_cycles");
         }
       }},
      // MMAS baseline
      {"mmdvmc_n_cycles", intField(&ModelConfig::mmdvmc, &MmdvmcParams::nCycles)},
      {"mmdvmc_n_ants", intField(&ModelConfig::mmdvmc, &MmdvmcParams::nAnts)},
      {"mmdvmc_tau_min", doubleField(&ModelConfig::mmdvmc, &MmdvmcParams::tauMin)},
      {"mmdvmc_tau_max", doubleField(&ModelConfig::mmdvmc, &MmdvmcParams::tauMax)},
      {"mmdvmc_rho", doubleField(&ModelConfig::mmdvmc, &MmdvmcParams::rho)},
      {"mmdvmc_beta", doubleField(&ModelConfig::mmdvmc, &MmdvmcParams::beta)},
      {"mmdvmc_stay_bonus", doubleField(&ModelConfig::mmdvmc, &MmdvmcParams::stayBonus)},
      {"mmdvmc_omega", doubleField(&ModelConfig::mmdvmc, &MmdvmcParams::omega)},
  };
  return keys;
}

}  // namespace

std::vector<KeyValue> parseKeyValues(std::string_view text, std::string_view source) {
  std::vector<KeyValue> out;
  int lineNo = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineNo;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, lineNo));
    }
    KeyValue kv{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
                lineNo};
    if (kv.key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", source, lineNo));
    out.push_back(std::move(kv));
  }
  return out;
}

double parseDouble(const KeyValue& kv, std::string_view source) {
  return parseNumber<double>(kv.value, kv, source, "expected a number");
}

int parseInt(const KeyValue& kv, std::string_view source) {
  return parseNumber<int>(kv.value, kv, source, "expected an integer");
}

std::uint64_t parseUint64(const KeyValue& kv, std::string_view source) {
  return parseNumber<std::uint64_t>(kv.value, kv, source, "expected an unsigned 64-bit integer");
}

std::vector<double> parseDoubleList(const KeyValue& kv, std::string_view source) {
  std::vector<double> out;
  for (std::string_view item : splitList(kv.value)) {
    out.push_back(parseNumber<double>(item, kv, source, "expected a comma-separated number list"));
  }
  return out;
}

std::vector<std::string> parseWordList(const KeyValue& kv, std::string_view source) {
  std::vector<std::string> out;
  for (std::string_view item : splitList(kv.value)) {
    if (item.empty()) badValue(kv, source, "empty list item");
    out.emplace_back(item);
  }
  return out;
}

void ModelConfig::validate() const {
  gen.validate();
  migration.validate();
  acs.validate();
  mmdvmc.validate();
}

std::string canonicalKey(const std::string& key) {
  return key == "n_cycle_max" ? "n_reset_max" : key;
}

bool applyModelKey(ModelConfig& cfg, const KeyValue& kv, std::string_view source) {
  const std::string key = canonicalKey(kv.key);
  for (const auto& [name, set] : modelKeys()) {
    if (name == key) {
      set(cfg, kv, source);
      return true;
    }
  }
  return false;
}

ModelConfig parseModelConfig(std::string_view text, std::string_view source, ModelConfig base) {
  std::set<std::string> seen;
  for (const KeyValue& kv : parseKeyValues(text, source)) {
    if (!seen.insert(canonicalKey(kv.key)).second) {
      throw ConfigError(fmt::format("{}:{}: key '{}' set twice", source, kv.line, kv.key));
    }
    if (!applyModelKey(base, kv, source)) {
      throw ConfigError(fmt::format("{}:{}: unknown key '{}'", source, kv.line, kv.key));
    }
  }
  base.validate();
  return base;
}

std::string formatGenConfig(const GenConfig& gen) {
  std::string out;
  auto line = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  line("n_pm", gen.nPm);
  line("n_vm", gen.nVm);
  line("mean_rsc", gen.meanRsc);
  line("sd_rsc", gen.sdRsc);
  line("pr", gen.pr);
  line("pm_cpu_ghz", gen.pmCapacity.cpu);
  line("pm_mem_mb", gen.pmCapacity.mem);
  line("pm_net_mbps", gen.pmCapacity.net);
  line("mean_bw", gen.meanBW);
  line("sd_bw", gen.sdBW);
  line("df", gen.df);
  line("ports_per_switch", gen.portsPerSwitch);
  line("link_capacity_mbps", gen.linkCapacityMbps);
  line("seed", gen.seed);
  return out;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace vmc
