#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>

#include "hetwet/csv.hpp"
#include "hetwet/model.hpp"

namespace hetwet {

struct MetricsRow {
  std::size_t iteration{0};
  double total_energy{0.0};
  double variation_distance{0.0};
  std::size_t meetings{0};
  std::size_t balanced_count{0};
  double cumulative_loss{0.0};
};

inline double total_energy(std::span<const NodeState> nodes) noexcept {
  double sum = 0.0;
  for (const auto& n : nodes) sum += n.energy;
  return sum;
}

/// Mean energy; nullopt for an empty network.
inline std::optional<double> average_energy(std::span<const NodeState> nodes) noexcept {
  if (nodes.empty()) return std::nullopt;
  return total_energy(nodes) / static_cast<double>(nodes.size());
}

/// Sum over nodes of |E(u)/E_total - 1/m|: the distance between the normalised
/// energy distribution and the uniform one, without the conventional 1/2, so
/// the range is [0, 2]. nullopt when the network holds no energy.
inline std::optional<double> variation_distance(std::span<const NodeState> nodes) noexcept {
  const double total = total_energy(nodes);
  if (nodes.empty() || !(total > 0.0)) return std::nullopt;
  const double uniform = 1.0 / static_cast<double>(nodes.size());
  double sum = 0.0;
  for (const auto& n : nodes) sum += std::abs(n.energy / total - uniform);
  return sum;
}

/// Nodes whose status is Complete. Status is sticky, so this counts nodes that
/// reached the balance level at some point, not nodes currently near it.
/// `e_star` and `tolerance` are accepted for interface symmetry with the
/// protocol steps, which are the only place status changes.
inline std::size_t balanced_count(std::span<const NodeState> nodes, double /*e_star*/ = 0.0,
                                  double /*tolerance*/ = 0.0) noexcept {
  std::size_t c = 0;
  for (const auto& n : nodes) c += n.complete() ? 1 : 0;
  return c;
}

inline constexpr std::string_view kMetricsCsvHeader =
    "run_id,protocol,iteration,total_energy,variation_distance,meetings,balanced_count,"
    "cumulative_loss";

inline void write_metrics_row(std::ostream& os, std::size_t run_id, std::string_view protocol,
                              const MetricsRow& r) {
  os << run_id << ',' << protocol << ',' << r.iteration << ',' << format_double(r.total_energy)
     << ',' << format_double(r.variation_distance) << ',' << r.meetings << ','
     << r.balanced_count << ',' << format_double(r.cumulative_loss) << '\n';
}

}  // namespace hetwet
