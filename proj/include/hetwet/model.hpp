#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hetwet {

using NodeId = std::size_t;
using LocationId = std::size_t;

/// Full-charge span of the abstract energy unit. Every node holds an energy
/// level in [0, kMaxEnergy].
inline constexpr double kMaxEnergy = 100.0;

/// Hardware parameters of one device. Immutable once assigned to a node.
struct DeviceProfile {
  double capacity_mah{0.0};
  double voltage_v{3.85};
  double qi_capacity_wh{0.0};

  bool valid() const noexcept {
    return capacity_mah > 0.0 && voltage_v > 0.0 && qi_capacity_wh > 0.0;
  }

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

enum class Status { Incomplete, Complete };

struct NodeState {
  NodeId id{0};
  DeviceProfile profile{};
  double energy{0.0};
  LocationId location{0};
  double stay_remaining{0.0};
  Status status{Status::Incomplete};

  bool complete() const noexcept { return status == Status::Complete; }
};

/// A valid co-location opportunity between two distinct nodes. Only
/// constructible through make_contact, which enforces a < b and the minimum
/// overlap requirement.
class Contact {
 public:
  NodeId a() const noexcept { return a_; }
  NodeId b() const noexcept { return b_; }
  double overlap_minutes() const noexcept { return overlap_; }

  bool involves(NodeId n) const noexcept { return n == a_ || n == b_; }
  NodeId other(NodeId n) const noexcept { return n == a_ ? b_ : a_; }

  friend bool operator==(const Contact&, const Contact&) = default;

  friend std::optional<Contact> make_contact(NodeId, NodeId, double, double);

 private:
  Contact(NodeId a, NodeId b, double overlap) : a_(a), b_(b), overlap_(overlap) {}

  NodeId a_;
  NodeId b_;
  double overlap_;
};

/// Returns nullopt when a == b, or when the overlap is shorter than t_min.
/// The endpoints are stored in ascending order.
inline std::optional<Contact> make_contact(NodeId a, NodeId b, double overlap_minutes,
                                           double t_min_minutes) {
  if (a == b || !(overlap_minutes >= t_min_minutes)) return std::nullopt;
  if (b < a) std::swap(a, b);
  return Contact{a, b, overlap_minutes};
}

struct ExchangeRecord {
  NodeId sender{0};
  NodeId receiver{0};
  double sent{0.0};
  double received{0.0};
  double loss{0.0};
  std::size_t iteration{0};
};

enum class EvdMode { Literal, Absolute };

struct SimConfig {
  std::size_t num_nodes{100};
  std::size_t num_locations{5};
  double stay_min_minutes{10.0};
  double stay_max_minutes{30.0};
  double beta{0.2};
  double t_min_minutes{1.0};
  double w_el{0.5};
  double w_evd{0.5};
  std::size_t iterations{50};
  double completion_tolerance{1e-6};
  EvdMode evd_mode{EvdMode::Literal};
  std::uint64_t rng_seed{1};
  double energy_scale{100.0};
};

/// One entry per violated invariant. An empty result means the config is usable.
inline std::vector<std::string> validate_config(const SimConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.num_nodes == 0) out.emplace_back("num_nodes must be > 0");
  if (cfg.num_locations == 0) out.emplace_back("num_locations must be > 0");
  if (!(cfg.stay_min_minutes >= 0.0)) out.emplace_back("stay_min_minutes must be >= 0");
  if (!(cfg.stay_min_minutes <= cfg.stay_max_minutes))
    out.emplace_back("stay_min_minutes must be <= stay_max_minutes");
  if (!(cfg.beta >= 0.0)) out.emplace_back("beta must be >= 0");
  if (!(cfg.beta < 1.0)) out.emplace_back("beta must be < 1");
  if (!(cfg.t_min_minutes >= 0.0)) out.emplace_back("t_min_minutes must be >= 0");
  if (!(cfg.w_el >= 0.0)) out.emplace_back("w_el must be >= 0");
  if (!(cfg.w_evd >= 0.0)) out.emplace_back("w_evd must be >= 0");
  if (cfg.w_el == 0.0 && cfg.w_evd == 0.0) out.emplace_back("weights must not both be zero");
  if (!(cfg.completion_tolerance >= 0.0))
    out.emplace_back("completion_tolerance must be >= 0");
  if (!(cfg.energy_scale > 0.0) || !std::isfinite(cfg.energy_scale))
    out.emplace_back("energy_scale must be a positive finite number");
  return out;
}

inline std::string_view to_string(EvdMode m) noexcept {
  return m == EvdMode::Literal ? "literal" : "absolute";
}

inline std::optional<EvdMode> parse_evd_mode(std::string_view s) noexcept {
  if (s == "literal") return EvdMode::Literal;
  if (s == "absolute") return EvdMode::Absolute;
  return std::nullopt;
}

}  // namespace hetwet
