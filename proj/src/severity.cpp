#include "corrobench/severity.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "corrobench/errors.hpp"

namespace corrobench {
namespace {

using Row = std::array<double, kSeverityLevels>;

std::array<ParamTuple, kSeverityLevels> columns(
    std::initializer_list<std::pair<std::string, Row>> params) {
  std::array<ParamTuple, kSeverityLevels> out;
  for (int s = 0; s < kSeverityLevels; ++s) {
    for (const auto& [name, row] : params) out[s].add(name, row[s]);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

double ParamTuple::get(std::string_view name) const {
  for (const auto& [n, v] : values_) {
    if (n == name) return v;
  }
  throw ConfigError("missing severity parameter '" + std::string(name) + "'");
}

bool ParamTuple::has(std::string_view name) const {
  for (const auto& [n, v] : values_) {
    if (n == name) return true;
  }
  return false;
}

void ParamTuple::set(std::string_view name, double value) {
  for (auto& [n, v] : values_) {
    if (n == name) {
      v = value;
      return;
    }
  }
  throw ConfigError("unknown severity parameter '" + std::string(name) + "'");
}

ParamTuple& ParamTuple::add(std::string name, double value) {
  values_.emplace_back(std::move(name), value);
  return *this;
}

SeverityTable SeverityTable::defaults() {
  SeverityTable t;
  auto& c = t.cells_;
  c["motion"] = columns({{"length", {7, 11, 15, 21, 29}}});
  c["defocus"] = columns({{"radius", {2, 3, 4.5, 6, 8}}});
  c["frosted-glass"] = columns({{"max_shift", {1, 1, 2, 3, 4}},
                                {"iterations", {1, 2, 2, 2, 3}},
                                {"post_sigma", {0.6, 0.8, 1.0, 1.2, 1.5}}});
  c["gaussian-blur"] = columns({{"sigma", {1, 2, 3, 4, 6}}});
  c["psf"] = columns({{"rows", {5, 5, 5, 5, 5}},
                      {"cols", {9, 9, 9, 9, 9}},
                      {"kernel_size", {17, 17, 17, 17, 17}},
                      {"sigma_center", {0.3, 0.35, 0.4, 0.45, 0.5}},
                      {"sigma_edge_1", {0.8, 1.2, 1.6, 2.0, 2.4}},
                      {"sigma_edge_2", {1.0, 1.5, 2.0, 2.5, 3.0}},
                      {"sigma_edge_3", {1.2, 1.8, 2.4, 3.0, 3.6}}});
  c["gaussian-noise"] = columns({{"sigma", {0.08, 0.12, 0.18, 0.26, 0.38}}});
  c["impulse"] = columns({{"fraction", {0.03, 0.06, 0.09, 0.17, 0.27}}});
  c["shot"] = columns({{"photon_scale", {60, 25, 12, 5, 3}}});
  c["speckle"] = columns({{"sigma", {0.15, 0.2, 0.35, 0.45, 0.6}}});
  c["intensity"] = columns({{"sigma_lum", {0.02, 0.035, 0.05, 0.07, 0.1}},
                            {"sigma_chroma", {0.01, 0.0175, 0.025, 0.035, 0.05}},
                            {"alpha", {2, 2, 2, 2, 2}}});
  c["brightness"] = columns({{"delta", {0.1, 0.2, 0.3, 0.4, 0.5}}});
  c["contrast"] = columns({{"factor", {0.4, 0.3, 0.2, 0.1, 0.05}}});
  c["saturate"] = columns({{"scale", {1.5, 2, 3, 5, 10}}, {"offset", {0, 0, 0.05, 0.1, 0.2}}});
  c["jpeg"] = columns({{"quality", {25, 18, 15, 10, 7}}});
  c["snow"] = columns({{"density", {0.0015, 0.0025, 0.0035, 0.0045, 0.006}},
                       {"length", {9, 13, 17, 21, 25}},
                       {"angle_deg", {60, 62, 65, 68, 70}},
                       {"intensity", {0.8, 0.85, 0.9, 0.95, 1.0}},
                       {"whitening", {0.1, 0.2, 0.3, 0.4, 0.5}}});
  c["spatter"] = columns({{"density", {0.05, 0.1, 0.15, 0.2, 0.3}},
                          {"blob_sigma", {3, 3.5, 4, 4.5, 5}},
                          {"opacity", {0.5, 0.6, 0.7, 0.8, 0.9}}});
  c["fog"] = columns({{"thickness", {0.2, 0.35, 0.5, 0.65, 0.8}},
                      {"roughness", {0.55, 0.55, 0.55, 0.55, 0.55}}});
  c["frost"] = columns({{"w_image", {0.8, 0.725, 0.65, 0.6, 0.55}},
                        {"w_overlay", {0.4, 0.55, 0.7, 0.8, 0.9}}});
  c["geometric-distortion"] = columns({{"k1", {0, 0, 0, 0, 0}},
                                       {"k2", {0.04, 0.08, 0.12, 0.16, 0.2}},
                                       {"k3", {0, 0, 0, 0, 0}},
                                       {"k4", {0.02, 0.04, 0.06, 0.08, 0.1}}});
  return t;
}

const ParamTuple& SeverityTable::at(std::string_view kind, int severity) const {
  const auto it = cells_.find(kind);
  if (it == cells_.end()) throw ConfigError("no severity table for '" + std::string(kind) + "'");
  if (severity < 1 || severity > kSeverityLevels) {
    throw InvalidSpecError("severity must be in 1..5, got " + std::to_string(severity));
  }
  return it->second[severity - 1];
}

void SeverityTable::set(std::string_view kind, int severity, std::string_view param,
                        double value) {
  const auto it = cells_.find(kind);
  if (it == cells_.end()) {
    throw ConfigError("severity override names unknown corruption '" + std::string(kind) + "'");
  }
  if (severity < 1 || severity > kSeverityLevels) {
    throw ConfigError("severity override uses severity " + std::to_string(severity) +
                      " outside 1..5");
  }
  if (!std::isfinite(value)) throw ConfigError("severity override value must be finite");
  it->second[severity - 1].set(param, value);
}

void SeverityTable::apply_overrides(std::string_view text) {
  std::string prefix;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) -> ConfigError {
      return ConfigError("severity overrides line " + std::to_string(line_no) + ": " + why);
    };
    if (line.front() == '[') {
      if (line.back() != ']') throw fail("unterminated section header");
      prefix = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw fail("expected key = value");
    std::string key(trim(line.substr(0, eq)));
    const std::string_view value_text = trim(line.substr(eq + 1));
    if (!prefix.empty()) key = prefix + "." + key;
    const std::size_t d1 = key.find('.');
    const std::size_t d2 = d1 == std::string::npos ? d1 : key.find('.', d1 + 1);
    if (d2 == std::string::npos || key.find('.', d2 + 1) != std::string::npos) {
      throw fail("key must be kind.severity.param");
    }
    const std::string kind = key.substr(0, d1);
    const std::string sev_text = key.substr(d1 + 1, d2 - d1 - 1);
    const std::string param = key.substr(d2 + 1);
    int severity = 0;
    auto [p1, e1] = std::from_chars(sev_text.data(), sev_text.data() + sev_text.size(), severity);
    if (e1 != std::errc() || p1 != sev_text.data() + sev_text.size()) {
      throw fail("severity '" + sev_text + "' is not an integer");
    }
    double value = 0.0;
    auto [p2, e2] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (e2 != std::errc() || p2 != value_text.data() + value_text.size()) {
      throw fail("value '" + std::string(value_text) + "' is not a number");
    }
    try {
      set(kind, severity, param, value);
    } catch (const ConfigError& e) {
      throw fail(e.what());
    }
  }
}

void SeverityTable::load_overrides(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open severity table '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_overrides(ss.str());
}

std::string SeverityTable::canonical() const {
  std::string out;
  char buf[64];
  for (Corruption c : all_corruptions()) {
    const CorruptionKind kind{c, 1};
    const auto it = cells_.find(kind.base_name());
    for (int s = 0; s < kSeverityLevels; ++s) {
      for (const auto& [name, value] : it->second[s].values()) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        out += std::string(kind.base_name()) + "." + std::to_string(s + 1) + "." + name + "=" +
               buf + "\n";
      }
    }
  }
  return out;
}

std::uint64_t SeverityTable::hash() const { return fnv1a64(canonical()); }

}  // namespace corrobench
