#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hetwet/model.hpp"

namespace hetwet {

enum class ScenarioKind { UniformClasses, ProportionClasses, ThetaSweep };

inline std::string_view to_string(ScenarioKind k) noexcept {
  switch (k) {
    case ScenarioKind::UniformClasses: return "uniform";
    case ScenarioKind::ProportionClasses: return "proportion";
    case ScenarioKind::ThetaSweep: return "theta";
  }
  return "unknown";
}

inline std::optional<ScenarioKind> parse_scenario_kind(std::string_view s) noexcept {
  if (s == "uniform") return ScenarioKind::UniformClasses;
  if (s == "proportion") return ScenarioKind::ProportionClasses;
  if (s == "theta") return ScenarioKind::ThetaSweep;
  return std::nullopt;
}

struct HardwareClass {
  double capacity_mah{0.0};
  double qi_capacity_wh{0.0};

  friend bool operator==(const HardwareClass&, const HardwareClass&) = default;
};

/// The three smartphone classes used throughout the evaluation.
inline const std::vector<HardwareClass>& reference_classes() {
  static const std::vector<HardwareClass> classes{{5000.0, 5.0}, {4500.0, 4.0}, {4000.0, 3.0}};
  return classes;
}

struct ScenarioSpec {
  ScenarioKind kind{ScenarioKind::UniformClasses};
  std::vector<HardwareClass> classes{reference_classes()};
  std::vector<double> proportions;
  double theta{0.0};
  double delta_c{500.0};
  double delta_q{1.0};
  double voltage_v{3.85};

  static ScenarioSpec uniform() { return {}; }

  static ScenarioSpec proportion(std::vector<double> fractions) {
    ScenarioSpec s;
    s.kind = ScenarioKind::ProportionClasses;
    s.proportions = std::move(fractions);
    return s;
  }

  static ScenarioSpec theta_sweep(double theta, double delta_c = 500.0, double delta_q = 1.0) {
    ScenarioSpec s;
    s.kind = ScenarioKind::ThetaSweep;
    s.theta = theta;
    s.delta_c = delta_c;
    s.delta_q = delta_q;
    return s;
  }

  /// Short name for output directories, e.g. "proportion_50_25_25", "theta_1.5".
  std::string label() const;
};

struct ProfileClass {
  DeviceProfile profile;
  double fraction{0.0};
};

inline constexpr double kFractionTolerance = 1e-9;

inline std::vector<std::string> validate_scenario(const ScenarioSpec& s) {
  std::vector<std::string> out;
  if (!(s.voltage_v > 0.0)) out.emplace_back("scenario.voltage_v must be > 0");
  if (s.kind == ScenarioKind::ThetaSweep) {
    if (!(s.theta >= 0.0)) out.emplace_back("scenario.theta must be >= 0");
    if (!(s.delta_c >= 0.0) || !(s.delta_q >= 0.0))
      out.emplace_back("scenario.delta_c and scenario.delta_q must be >= 0");
    if (!(4500.0 - s.theta * s.delta_c > 0.0) || !(4.0 - s.theta * s.delta_q > 0.0))
      out.emplace_back("scenario.theta spread yields a non-positive capacity or Qi output");
    return out;
  }
  if (s.classes.empty()) out.emplace_back("scenario.classes must not be empty");
  for (const auto& c : s.classes)
    if (!(c.capacity_mah > 0.0) || !(c.qi_capacity_wh > 0.0)) {
      out.emplace_back("scenario.classes entries must be positive");
      break;
    }
  if (s.kind == ScenarioKind::ProportionClasses) {
    if (s.proportions.size() != s.classes.size())
      out.emplace_back("scenario.proportions needs one entry per class");
    if (std::any_of(s.proportions.begin(), s.proportions.end(),
                    [](double p) { return !(p >= 0.0); }))
      out.emplace_back("scenario.proportions must be non-negative");
    const double sum = std::accumulate(s.proportions.begin(), s.proportions.end(), 0.0);
    if (!(std::abs(sum - 1.0) <= kFractionTolerance))
      out.emplace_back("scenario.proportions must sum to 1");
  }
  return out;
}

/// Device classes with their allocation fractions.
inline std::vector<ProfileClass> scenario_classes(const ScenarioSpec& s) {
  if (auto errs = validate_scenario(s); !errs.empty())
    throw std::invalid_argument("invalid scenario: " + errs.front());

  std::vector<HardwareClass> hw;
  std::vector<double> fractions;
  switch (s.kind) {
    case ScenarioKind::UniformClasses:
      hw = s.classes;
      fractions.assign(hw.size(), 1.0 / static_cast<double>(hw.size()));
      break;
    case ScenarioKind::ProportionClasses:
      hw = s.classes;
      fractions = s.proportions;
      break;
    case ScenarioKind::ThetaSweep:
      hw = {{4500.0 + s.theta * s.delta_c, 4.0 + s.theta * s.delta_q},
            {4500.0, 4.0},
            {4500.0 - s.theta * s.delta_c, 4.0 - s.theta * s.delta_q}};
      fractions.assign(3, 1.0 / 3.0);
      break;
  }
  std::vector<ProfileClass> out;
  for (std::size_t k = 0; k < hw.size(); ++k)
    out.push_back({DeviceProfile{hw[k].capacity_mah, s.voltage_v, hw[k].qi_capacity_wh},
                   fractions[k]});
  return out;
}

/// Largest-remainder apportionment of `total` items over `fractions`.
/// Remainder ties go to the lower index.
inline std::vector<std::size_t> apportion(std::span<const double> fractions, std::size_t total) {
  std::vector<std::size_t> counts(fractions.size(), 0);
  std::vector<double> remainder(fractions.size(), 0.0);
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < fractions.size(); ++k) {
    const double quota = fractions[k] * static_cast<double>(total);
    counts[k] = static_cast<std::size_t>(std::floor(quota));
    remainder[k] = quota - static_cast<double>(counts[k]);
    assigned += counts[k];
  }
  std::vector<std::size_t> idx(fractions.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t l, std::size_t r) { return remainder[l] > remainder[r]; });
  for (std::size_t k = 0; assigned < total && !idx.empty(); ++k, ++assigned)
    ++counts[idx[k % idx.size()]];
  return counts;
}

inline std::string ScenarioSpec::label() const {
  auto pct = [](double f) { return std::to_string(static_cast<long>(std::lround(f * 100.0))); };
  switch (kind) {
    case ScenarioKind::UniformClasses: return "uniform";
    case ScenarioKind::ProportionClasses: {
      std::string s = "proportion";
      for (double p : proportions) s += "_" + pct(p);
      return s;
    }
    case ScenarioKind::ThetaSweep: {
      std::string t = std::to_string(theta);
      t.erase(t.find_last_not_of('0') + 1);
      if (!t.empty() && t.back() == '.') t += '0';
      return "theta_" + t;
    }
  }
  return "scenario";
}

/// The six heterogeneity scenarios of the sweep: three skewed allocations of
/// the reference classes, then three widening capacity spreads.
inline std::vector<ScenarioSpec> sweep_scenarios() {
  return {ScenarioSpec::proportion({0.50, 0.25, 0.25}),
          ScenarioSpec::proportion({0.25, 0.50, 0.25}),
          ScenarioSpec::proportion({0.25, 0.25, 0.50}),
          ScenarioSpec::theta_sweep(0.5),
          ScenarioSpec::theta_sweep(1.5),
          ScenarioSpec::theta_sweep(2.0)};
}

}  // namespace hetwet
