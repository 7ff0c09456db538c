#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corrobench/kinds.hpp"

namespace corrobench {

/// Ordered named parameters for one (kind, severity) cell.
class ParamTuple {
 public:
  ParamTuple() = default;
  ParamTuple(std::initializer_list<std::pair<std::string, double>> values) : values_(values) {}

  double get(std::string_view name) const;
  bool has(std::string_view name) const;
  void set(std::string_view name, double value);  // existing names only
  ParamTuple& add(std::string name, double value);
  const std::vector<std::pair<std::string, double>>& values() const { return values_; }

  bool operator==(const ParamTuple&) const = default;

 private:
  std::vector<std::pair<std::string, double>> values_;
};

class SeverityTable {
 public:
  /// Built-in parameterization (documented in docs/severity_tables.md).
  static SeverityTable defaults();

  const ParamTuple& at(std::string_view kind, int severity) const;
  const ParamTuple& at(const CorruptionKind& kind, int severity) const {
    return at(kind.base_name(), severity);
  }
  /// Unknown kind, severity or parameter -> ConfigError.
  void set(std::string_view kind, int severity, std::string_view param, double value);

  /// `kind.severity.param = value` lines; `#`/`;` comments; optional `[prefix]`
  /// sections prepend `prefix.` to the keys that follow.
  void apply_overrides(std::string_view text);
  void load_overrides(const std::filesystem::path& path);

  /// One `kind.severity.param=value` line per entry in catalog order, values
  /// printed with 17 significant digits.
  std::string canonical() const;
  /// FNV-1a 64 of canonical().
  std::uint64_t hash() const;

  bool operator==(const SeverityTable&) const = default;

 private:
  std::map<std::string, std::array<ParamTuple, kSeverityLevels>, std::less<>> cells_;
};

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

}  // namespace corrobench
