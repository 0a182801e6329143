#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <vector>

#include "hetwet/metrics.hpp"
#include "hetwet/protocols.hpp"

using namespace hetwet;

namespace {

std::vector<NodeState> with_energies(std::vector<double> e) {
  std::vector<NodeState> nodes(e.size());
  for (NodeId i = 0; i < e.size(); ++i) {
    nodes[i].id = i;
    nodes[i].profile = {4500, 3.85, 4};
    nodes[i].energy = e[i];
  }
  return nodes;
}

}  // namespace

TEST(TotalEnergy, Examples) {
  EXPECT_DOUBLE_EQ(total_energy(with_energies({10, 20, 30, 40})), 100.0);
  EXPECT_DOUBLE_EQ(total_energy(std::vector<NodeState>{}), 0.0);
}

TEST(TotalEnergy, OneExchangeLosesBetaShare) {
  // Uncapped P_OA pair large enough to move exactly 10 units.
  auto nodes = with_energies({70, 30});
  nodes[0].profile = nodes[1].profile = {1000, 5, 5};  // 1.6667 %/min
  const double before = total_energy(nodes);
  SimConfig cfg;
  Rng rng(0);
  const auto c = *make_contact(0, 1, 6.0, 1.0);  // cap 10 < (70-30)/1.8
  const auto out = poa_step(nodes, std::vector<Contact>{c}, cfg, 50.0, 47.0, rng);
  ASSERT_EQ(out.exchanges.size(), 1u);
  EXPECT_NEAR(out.exchanges[0].sent, 10.0, 1e-9);
  EXPECT_NEAR(total_energy(nodes), before - 2.0, 1e-9);
}

TEST(VariationDistance, Examples) {
  EXPECT_NEAR(*variation_distance(with_energies({10, 20, 30, 40})), 0.4, 1e-12);
  EXPECT_NEAR(*variation_distance(with_energies({25, 25, 25, 25})), 0.0, 1e-15);
  EXPECT_NEAR(*variation_distance(with_energies({100, 0, 0, 0})), 1.5, 1e-12);
}

TEST(VariationDistance, DegenerateInputs) {
  EXPECT_FALSE(variation_distance(with_energies({0, 0, 0})));
  EXPECT_FALSE(variation_distance(std::vector<NodeState>{}));
}

TEST(VariationDistance, RangeAndScaleInvariance) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> e(0, 100), k(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> energies(1 + trial % 40);
    for (auto& x : energies) x = e(rng);
    auto a = with_energies(energies);
    const double vd = *variation_distance(a);
    EXPECT_GE(vd, 0.0);
    EXPECT_LE(vd, 2.0);
    const double s = k(rng);
    for (auto& n : a) n.energy *= s;
    EXPECT_NEAR(*variation_distance(a), vd, 1e-12);
  }
}

TEST(AverageEnergy, Examples) {
  EXPECT_DOUBLE_EQ(*average_energy(with_energies({10, 20, 30, 40})), 25.0);
  EXPECT_DOUBLE_EQ(*average_energy(with_energies({0, 0})), 0.0);
  EXPECT_FALSE(average_energy(std::vector<NodeState>{}));
}

TEST(BalancedCount, CountsCompleteStatus) {
  auto nodes = with_energies({47.2, 10, 90});
  EXPECT_EQ(balanced_count(nodes, 47.2, 1e-6), 0u);
  nodes[1].status = Status::Complete;
  EXPECT_EQ(balanced_count(nodes, 47.2, 1e-6), 1u);
  for (auto& n : nodes) n.status = Status::Complete;
  EXPECT_EQ(balanced_count(nodes, 47.2, 1e-6), 3u);
}

TEST(MetricsCsv, RowFormat) {
  std::ostringstream os;
  MetricsRow r{3, 4808.5, 0.08, 12, 40, 1.25};
  write_metrics_row(os, 7, "hetwet", r);
  EXPECT_EQ(os.str(), "7,hetwet,3,4808.5,0.08,12,40,1.25\n");
  EXPECT_EQ(kMetricsCsvHeader,
            "run_id,protocol,iteration,total_energy,variation_distance,meetings,balanced_count,"
            "cumulative_loss");
}
