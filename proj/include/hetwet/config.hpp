#pragma once

// Flat `key = value` configuration files. Blank lines and lines starting with
// '#' are ignored; a key may appear at most once; unknown keys are rejected.
//
//   num_nodes = 100
//   beta = 0.2
//   evd_mode = literal
//   scenario.kind = proportion
//   scenario.proportions = 0.5, 0.25, 0.25

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hetwet/csv.hpp"
#include "hetwet/model.hpp"
#include "hetwet/scenario.hpp"

namespace hetwet {

class ConfigParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  SimConfig sim;
  ScenarioSpec scenario;
  std::size_t repetitions{50};
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw ConfigParseError("invalid value for '" + std::string(key) + "': '" +
                           std::string(text) + "'");
  return value;
}

inline std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_number<double>(key, trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace detail

/// Raw key/value pairs, keyed by name.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ConfigParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string value(detail::trim(body.substr(eq + 1)));
    if (key.empty()) throw ConfigParseError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return kv;
}

inline ExperimentConfig experiment_config_from(const std::map<std::string, std::string>& kv) {
  ExperimentConfig ec;
  SimConfig& c = ec.sim;
  ScenarioSpec& s = ec.scenario;
  using detail::parse_number;
  for (const auto& [key, v] : kv) {
    if (key == "num_nodes") c.num_nodes = parse_number<std::size_t>(key, v);
    else if (key == "num_locations") c.num_locations = parse_number<std::size_t>(key, v);
    else if (key == "stay_min_minutes") c.stay_min_minutes = parse_number<double>(key, v);
    else if (key == "stay_max_minutes") c.stay_max_minutes = parse_number<double>(key, v);
    else if (key == "beta") c.beta = parse_number<double>(key, v);
    else if (key == "t_min_minutes") c.t_min_minutes = parse_number<double>(key, v);
    else if (key == "w_el") c.w_el = parse_number<double>(key, v);
    else if (key == "w_evd") c.w_evd = parse_number<double>(key, v);
    else if (key == "iterations") c.iterations = parse_number<std::size_t>(key, v);
    else if (key == "completion_tolerance") c.completion_tolerance = parse_number<double>(key, v);
    else if (key == "rng_seed") c.rng_seed = parse_number<std::uint64_t>(key, v);
    else if (key == "energy_scale") c.energy_scale = parse_number<double>(key, v);
    else if (key == "evd_mode") {
      auto m = parse_evd_mode(v);
      if (!m) throw ConfigParseError("evd_mode must be 'literal' or 'absolute'");
      c.evd_mode = *m;
    } else if (key == "repetitions") {
      ec.repetitions = parse_number<std::size_t>(key, v);
    } else if (key == "scenario.kind") {
      auto k = parse_scenario_kind(v);
      if (!k) throw ConfigParseError("scenario.kind must be 'uniform', 'proportion' or 'theta'");
      s.kind = *k;
    } else if (key == "scenario.proportions") s.proportions = detail::parse_list(key, v);
    else if (key == "scenario.theta") s.theta = parse_number<double>(key, v);
    else if (key == "scenario.delta_c") s.delta_c = parse_number<double>(key, v);
    else if (key == "scenario.delta_q") s.delta_q = parse_number<double>(key, v);
    else if (key == "scenario.voltage_v") s.voltage_v = parse_number<double>(key, v);
    else throw ConfigParseError("unknown key '" + key + "'");
  }
  return ec;
}

inline ExperimentConfig load_experiment_config(std::istream& in) {
  return experiment_config_from(parse_key_values(in));
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open config file '" + path + "'");
  return load_experiment_config(in);
}

/// Canonical text form; feeding it back through load_experiment_config
/// reproduces `ec` exactly.
inline void write_experiment_config(std::ostream& os, const ExperimentConfig& ec) {
  const auto& c = ec.sim;
  const auto& s = ec.scenario;
  os << "num_nodes = " << c.num_nodes << '\n'
     << "num_locations = " << c.num_locations << '\n'
     << "stay_min_minutes = " << format_double(c.stay_min_minutes) << '\n'
     << "stay_max_minutes = " << format_double(c.stay_max_minutes) << '\n'
     << "beta = " << format_double(c.beta) << '\n'
     << "t_min_minutes = " << format_double(c.t_min_minutes) << '\n'
     << "w_el = " << format_double(c.w_el) << '\n'
     << "w_evd = " << format_double(c.w_evd) << '\n'
     << "iterations = " << c.iterations << '\n'
     << "completion_tolerance = " << format_double(c.completion_tolerance) << '\n'
     << "evd_mode = " << to_string(c.evd_mode) << '\n'
     << "rng_seed = " << c.rng_seed << '\n'
     << "energy_scale = " << format_double(c.energy_scale) << '\n'
     << "repetitions = " << ec.repetitions << '\n'
     << "scenario.kind = " << to_string(s.kind) << '\n';
  if (!s.proportions.empty()) {
    os << "scenario.proportions = ";
    for (std::size_t k = 0; k < s.proportions.size(); ++k)
      os << (k ? ", " : "") << format_double(s.proportions[k]);
    os << '\n';
  }
  os << "scenario.theta = " << format_double(s.theta) << '\n'
     << "scenario.delta_c = " << format_double(s.delta_c) << '\n'
     << "scenario.delta_q = " << format_double(s.delta_q) << '\n'
     << "scenario.voltage_v = " << format_double(s.voltage_v) << '\n';
}

}  // namespace hetwet
