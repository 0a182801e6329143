#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <utility>

#include "hetwet/engine.hpp"
#include "hetwet/mobility.hpp"

using namespace hetwet;

namespace {

IterationPlacement manual(std::vector<Assignment> a) {
  IterationPlacement p;
  p.assignments = std::move(a);
  return p;
}

}  // namespace

TEST(PlaceNodes, SingleLocationCoLocatesEveryone) {
  SimConfig cfg;
  cfg.num_locations = 1;
  Rng rng(5);
  const auto p = place_nodes(rng, cfg);
  ASSERT_EQ(p.assignments.size(), cfg.num_nodes);
  for (const auto& a : p.assignments) EXPECT_EQ(a.location, 0u);
}

TEST(PlaceNodes, StaysWithinBounds) {
  SimConfig cfg;
  Rng rng(9);
  for (int it = 0; it < 50; ++it)
    for (const auto& a : place_nodes(rng, cfg).assignments) {
      EXPECT_GE(a.stay_minutes, cfg.stay_min_minutes);
      EXPECT_LE(a.stay_minutes, cfg.stay_max_minutes);
      EXPECT_LT(a.location, cfg.num_locations);
    }
}

TEST(PlaceNodes, DeterministicForSeed) {
  SimConfig cfg;
  Rng a(42), b(42);
  const auto pa = place_nodes(a, cfg);
  const auto pb = place_nodes(b, cfg);
  for (std::size_t i = 0; i < cfg.num_nodes; ++i) {
    EXPECT_EQ(pa.assignments[i].location, pb.assignments[i].location);
    EXPECT_EQ(pa.assignments[i].stay_minutes, pb.assignments[i].stay_minutes);
  }
  EXPECT_EQ(placement_for(cfg, 42, 3).assignments[17].stay_minutes,
            placement_for(cfg, 42, 3).assignments[17].stay_minutes);
}

TEST(PlaceNodes, OccupancyAveragesTwentyPerLocation) {
  SimConfig cfg;
  std::vector<double> occupancy(cfg.num_locations, 0.0);
  const int iterations = 10000;
  for (int t = 0; t < iterations; ++t)
    for (const auto& a : placement_for(cfg, 42, t).assignments) occupancy[a.location] += 1.0;
  for (double o : occupancy) {
    const double mean = o / iterations;
    EXPECT_GE(mean, 15.0);
    EXPECT_LE(mean, 25.0);
    EXPECT_NEAR(mean, 20.0, 0.5);
  }
}

TEST(DeriveContacts, DifferentLocationsNeverMeet) {
  EXPECT_TRUE(derive_contacts(manual({{0, 20}, {1, 20}}), 1.0).empty());
}

TEST(DeriveContacts, OverlapIsShorterStay) {
  const auto c = derive_contacts(manual({{2, 12}, {2, 25}}), 1.0);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].a(), 0u);
  EXPECT_EQ(c[0].b(), 1u);
  EXPECT_DOUBLE_EQ(c[0].overlap_minutes(), 12.0);
}

TEST(DeriveContacts, ShortStayExcluded) {
  EXPECT_TRUE(derive_contacts(manual({{0, 0.5}, {0, 30}}), 1.0).empty());
}

TEST(DeriveContacts, PairCountAndSymmetry) {
  SimConfig cfg;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto p = placement_for(cfg, seed, 1);
    const auto contacts = derive_contacts(p, cfg.t_min_minutes);
    std::vector<std::size_t> per_location(cfg.num_locations, 0);
    for (const auto& a : p.assignments) ++per_location[a.location];
    std::size_t expected = 0;
    for (auto k : per_location) expected += k * (k - 1) / 2;
    EXPECT_EQ(contacts.size(), expected);

    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& c : contacts) {
      EXPECT_LT(c.a(), c.b());
      EXPECT_EQ(p.assignments[c.a()].location, p.assignments[c.b()].location);
      EXPECT_TRUE(seen.emplace(c.a(), c.b()).second);
      EXPECT_FALSE(seen.count({c.b(), c.a()}));
    }
  }
}

TEST(PlacementTrace, OneRowPerNode) {
  std::ostringstream os;
  write_placement_trace_header(os);
  auto p = manual({{0, 12.5}, {3, 20}});
  p.iteration = 4;
  write_placement_trace(os, p);
  EXPECT_EQ(os.str(), "iteration,node_id,location,stay_minutes\n4,0,0,12.5\n4,1,3,20\n");
}
