#include "corrobench/kinds.hpp"

#include <algorithm>

#include "corrobench/errors.hpp"

namespace corrobench {
namespace {

struct KindInfo {
  Corruption id;
  Family family;
  std::string_view name;
};

constexpr std::array<KindInfo, kCorruptionCount> kKinds = {{
    {Corruption::motion, Family::blur, "motion"},
    {Corruption::defocus, Family::blur, "defocus"},
    {Corruption::frosted_glass, Family::blur, "frosted-glass"},
    {Corruption::gaussian_blur, Family::blur, "gaussian-blur"},
    {Corruption::psf, Family::blur, "psf"},
    {Corruption::gaussian_noise, Family::noise, "gaussian-noise"},
    {Corruption::impulse, Family::noise, "impulse"},
    {Corruption::shot, Family::noise, "shot"},
    {Corruption::speckle, Family::noise, "speckle"},
    {Corruption::intensity, Family::noise, "intensity"},
    {Corruption::brightness, Family::digital, "brightness"},
    {Corruption::contrast, Family::digital, "contrast"},
    {Corruption::saturate, Family::digital, "saturate"},
    {Corruption::jpeg, Family::digital, "jpeg"},
    {Corruption::snow, Family::weather, "snow"},
    {Corruption::spatter, Family::weather, "spatter"},
    {Corruption::fog, Family::weather, "fog"},
    {Corruption::frost, Family::weather, "frost"},
    {Corruption::geometric_distortion, Family::geometric, "geometric-distortion"},
}};

const KindInfo& info(Corruption c) { return kKinds[static_cast<std::size_t>(c)]; }

constexpr std::array<std::string_view, 5> kFamilyNames = {"blur", "noise", "digital", "weather",
                                                          "geometric"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Family CorruptionKind::family() const { return info(id).family; }

std::string_view CorruptionKind::base_name() const { return info(id).name; }

std::string CorruptionKind::name() const {
  std::string n(info(id).name);
  if (id == Corruption::psf && variant != 1) n += "-" + std::to_string(variant);
  return n;
}

std::string_view family_name(Family f) { return kFamilyNames[static_cast<std::size_t>(f)]; }

const std::array<Corruption, kCorruptionCount>& all_corruptions() {
  static const auto all = [] {
    std::array<Corruption, kCorruptionCount> a{};
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = kKinds[i].id;
    return a;
  }();
  return all;
}

CorruptionKind parse_kind(std::string_view name) {
  name = trim(name);
  for (const auto& k : kKinds) {
    if (k.name == name) return {k.id, 1};
  }
  for (int v = 1; v <= kPsfVariants; ++v) {
    if (name == "psf-" + std::to_string(v)) return {Corruption::psf, v};
  }
  throw InvalidSpecError("unknown corruption '" + std::string(name) +
                         "'; valid names: " + valid_kind_names());
}

std::vector<CorruptionKind> parse_kind_filter(std::string_view filter) {
  std::vector<CorruptionKind> out;
  auto add = [&out](CorruptionKind k) {
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  };
  std::size_t start = 0;
  while (start <= filter.size()) {
    const std::size_t comma = std::min(filter.find(',', start), filter.size());
    const std::string_view token = trim(filter.substr(start, comma - start));
    start = comma + 1;
    if (token.empty()) continue;
    if (token == "all") {
      for (const auto& k : kKinds) add({k.id, 1});
      continue;
    }
    const auto fam = std::find(kFamilyNames.begin(), kFamilyNames.end(), token);
    if (fam != kFamilyNames.end()) {
      const auto f = static_cast<Family>(fam - kFamilyNames.begin());
      for (const auto& k : kKinds) {
        if (k.family == f) add({k.id, 1});
      }
      continue;
    }
    add(parse_kind(token));
  }
  if (out.empty()) throw InvalidSpecError("corruption filter selects nothing");
  // Keep catalog order regardless of how the filter was written.
  std::stable_sort(out.begin(), out.end(), [](const CorruptionKind& a, const CorruptionKind& b) {
    return a.id != b.id ? a.id < b.id : a.variant < b.variant;
  });
  return out;
}

std::string valid_kind_names() {
  std::string s;
  for (const auto& k : kKinds) {
    if (!s.empty()) s += ", ";
    s += k.name;
  }
  return s + ", psf-2, psf-3";
}

bool is_noise(const CorruptionKind& k) { return k.family() == Family::noise; }
bool is_psf(const CorruptionKind& k) { return k.id == Corruption::psf; }

}  // namespace corrobench
