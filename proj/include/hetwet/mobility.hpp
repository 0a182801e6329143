#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <random>
#include <vector>

#include "hetwet/csv.hpp"
#include "hetwet/model.hpp"
#include "hetwet/rng.hpp"

namespace hetwet {

struct Assignment {
  LocationId location{0};
  double stay_minutes{0.0};
};

/// Where every node sits during one iteration. `assignments[id]` belongs to
/// node `id`, so each node appears exactly once.
struct IterationPlacement {
  std::size_t iteration{0};
  std::vector<Assignment> assignments;
};

/// Uniform relocation: every node independently draws a location and a stay
/// duration. Draw order is (location, stay) per node in id order.
inline IterationPlacement place_nodes(Rng& rng, const SimConfig& cfg, std::size_t iteration = 0) {
  std::uniform_int_distribution<LocationId> pick_location(0, cfg.num_locations - 1);
  std::uniform_real_distribution<double> pick_stay(cfg.stay_min_minutes, cfg.stay_max_minutes);
  IterationPlacement p;
  p.iteration = iteration;
  p.assignments.reserve(cfg.num_nodes);
  for (std::size_t i = 0; i < cfg.num_nodes; ++i) {
    Assignment a;
    a.location = pick_location(rng);
    // uniform_real_distribution is half-open; a degenerate range yields the bound.
    a.stay_minutes =
        cfg.stay_min_minutes == cfg.stay_max_minutes ? cfg.stay_min_minutes : pick_stay(rng);
    p.assignments.push_back(a);
  }
  return p;
}

/// All valid contacts of an iteration, ordered by (a, b). Both nodes are taken
/// to arrive at iteration start, so a pair overlaps for the shorter of the two
/// stays.
inline std::vector<Contact> derive_contacts(const IterationPlacement& p, double t_min_minutes) {
  std::vector<std::vector<NodeId>> by_location;
  for (NodeId id = 0; id < p.assignments.size(); ++id) {
    const auto loc = p.assignments[id].location;
    if (loc >= by_location.size()) by_location.resize(loc + 1);
    by_location[loc].push_back(id);
  }

  std::vector<Contact> contacts;
  for (const auto& members : by_location) {
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const auto a = members[x];
        const auto b = members[y];
        const double overlap =
            std::min(p.assignments[a].stay_minutes, p.assignments[b].stay_minutes);
        if (auto c = make_contact(a, b, overlap, t_min_minutes)) contacts.push_back(*c);
      }
    }
  }
  std::sort(contacts.begin(), contacts.end(), [](const Contact& l, const Contact& r) {
    return l.a() != r.a() ? l.a() < r.a() : l.b() < r.b();
  });
  return contacts;
}

inline void write_placement_trace_header(std::ostream& os) {
  os << "iteration,node_id,location,stay_minutes\n";
}

inline void write_placement_trace(std::ostream& os, const IterationPlacement& p) {
  for (NodeId id = 0; id < p.assignments.size(); ++id) {
    const auto& a = p.assignments[id];
    os << p.iteration << ',' << id << ',' << a.location << ',' << format_double(a.stay_minutes)
       << '\n';
  }
}

}  // namespace hetwet
