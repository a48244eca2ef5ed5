#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vmc/amdvmc.hpp"
#include "vmc/baselines.hpp"
#include "vmc/migration.hpp"
#include "vmc/workload.hpp"

namespace vmc {

/// One `key = value` line of a flat config file.
struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

/// Splits flat config text into entries. Blank lines and lines starting
/// with '#' are skipped; a '#' after the value starts a trailing comment.
/// Throws ConfigError on a line without '=' or with an empty key.
std::vector<KeyValue> parseKeyValues(std::string_view text, std::string_view source);

/// Typed value parsers. Errors name the source, line and key.
double parseDouble(const KeyValue& kv, std::string_view source);
int parseInt(const KeyValue& kv, std::string_view source);
std::uint64_t parseUint64(const KeyValue& kv, std::string_view source);
std::vector<double> parseDoubleList(const KeyValue& kv, std::string_view source);
std::vector<std::string> parseWordList(const KeyValue& kv, std::string_view source);

/// Every tunable of the model: generator, pre-copy/overhead constants and
/// both ant-colony consolidators.
struct ModelConfig {
  GenConfig gen;
  MigrationConfig migration;
  AcsParams acs;
  MmdvmcParams mmdvmc;

  void validate() const;
};

/// Applies one entry if its key belongs to ModelConfig. Returns false for
/// keys it does not know, so callers can layer their own keys on top.
bool applyModelKey(ModelConfig& cfg, const KeyValue& kv, std::string_view source);

/// Parses a file that may contain only ModelConfig keys. Unknown and
/// repeated keys are errors.
ModelConfig parseModelConfig(std::string_view text, std::string_view source,
                             ModelConfig base = {});

/// Canonical key = value lines for the generator section, in a fixed order.
std::string formatGenConfig(const GenConfig& gen);

/// Keys that name the same setting (n_cycle_max is an alias of n_reset_max).
std::string canonicalKey(const std::string& key);

/// Reads a whole file. Throws ConfigError when it cannot be opened.
std::string readFile(const std::string& path);

}  // namespace vmc
