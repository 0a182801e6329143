#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "hetwet/config.hpp"
#include "hetwet/model.hpp"

using namespace hetwet;

namespace {

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST(ValidateConfig, DefaultsAreValid) {
  SimConfig cfg;
  EXPECT_EQ(cfg.beta, 0.2);
  EXPECT_TRUE(validate_config(cfg).empty());
}

TEST(ValidateConfig, BetaOneIsRejected) {
  SimConfig cfg;
  cfg.beta = 1.0;
  const auto errs = validate_config(cfg);
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_EQ(errs[0], "beta must be < 1");
}

TEST(ValidateConfig, BothWeightsZeroIsRejected) {
  SimConfig cfg;
  cfg.w_el = 0.0;
  cfg.w_evd = 0.0;
  const auto errs = validate_config(cfg);
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_EQ(errs[0], "weights must not both be zero");
}

TEST(ValidateConfig, ReportsEveryViolation) {
  SimConfig cfg;
  cfg.beta = -0.1;
  cfg.w_el = -1.0;
  cfg.stay_min_minutes = 40.0;
  const auto errs = validate_config(cfg);
  EXPECT_EQ(errs.size(), 3u);
  EXPECT_TRUE(has(errs, "beta must be >= 0"));
  EXPECT_TRUE(has(errs, "w_el must be >= 0"));
  EXPECT_TRUE(has(errs, "stay_min_minutes must be <= stay_max_minutes"));
}

TEST(Contact, RejectsSelfAndShortOverlap) {
  EXPECT_FALSE(make_contact(3, 3, 20.0, 1.0));
  EXPECT_FALSE(make_contact(1, 2, 0.5, 1.0));
  EXPECT_TRUE(make_contact(1, 2, 1.0, 1.0));
}

TEST(Contact, StoresEndpointsInOrder) {
  const auto c = make_contact(7, 2, 12.0, 1.0);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->a(), 2u);
  EXPECT_EQ(c->b(), 7u);
  EXPECT_EQ(c->other(7), 2u);
  EXPECT_DOUBLE_EQ(c->overlap_minutes(), 12.0);
}

TEST(ConfigFile, ParsesKnownKeys) {
  std::istringstream in(R"(# comment
num_nodes = 40
beta=0.3
evd_mode = absolute
scenario.kind = proportion
scenario.proportions = 0.5, 0.25 ,0.25
repetitions = 7
)");
  const auto ec = load_experiment_config(in);
  EXPECT_EQ(ec.sim.num_nodes, 40u);
  EXPECT_DOUBLE_EQ(ec.sim.beta, 0.3);
  EXPECT_EQ(ec.sim.evd_mode, EvdMode::Absolute);
  EXPECT_EQ(ec.scenario.kind, ScenarioKind::ProportionClasses);
  EXPECT_EQ(ec.scenario.proportions, (std::vector<double>{0.5, 0.25, 0.25}));
  EXPECT_EQ(ec.repetitions, 7u);
  EXPECT_EQ(ec.sim.num_locations, 5u);
}

TEST(ConfigFile, UnknownKeyIsAnError) {
  std::istringstream in("num_nodes = 10\nbeta_typo = 0.2\n");
  EXPECT_THROW(load_experiment_config(in), ConfigParseError);
}

TEST(ConfigFile, MalformedLinesAreErrors) {
  std::istringstream dup("beta = 0.2\nbeta = 0.3\n");
  EXPECT_THROW(load_experiment_config(dup), ConfigParseError);
  std::istringstream noeq("beta 0.2\n");
  EXPECT_THROW(load_experiment_config(noeq), ConfigParseError);
  std::istringstream badnum("num_nodes = ten\n");
  EXPECT_THROW(load_experiment_config(badnum), ConfigParseError);
  std::istringstream badmode("evd_mode = signed\n");
  EXPECT_THROW(load_experiment_config(badmode), ConfigParseError);
}

TEST(ConfigFile, CanonicalFormReloadsIdentically) {
  ExperimentConfig ec;
  ec.sim.num_nodes = 37;
  ec.sim.beta = 0.1 + 0.2;  // not exactly representable in short decimal
  ec.sim.w_el = 1.0 / 3.0;
  ec.sim.rng_seed = 0xFFFFFFFFFFFFFFFFULL;
  ec.sim.evd_mode = EvdMode::Absolute;
  ec.scenario = ScenarioSpec::proportion({0.2, 0.3, 0.5});
  ec.repetitions = 3;

  std::ostringstream out;
  write_experiment_config(out, ec);
  std::istringstream in(out.str());
  const auto back = load_experiment_config(in);
  EXPECT_EQ(back.sim.num_nodes, ec.sim.num_nodes);
  EXPECT_EQ(back.sim.beta, ec.sim.beta);
  EXPECT_EQ(back.sim.w_el, ec.sim.w_el);
  EXPECT_EQ(back.sim.rng_seed, ec.sim.rng_seed);
  EXPECT_EQ(back.sim.evd_mode, ec.sim.evd_mode);
  EXPECT_EQ(back.scenario.proportions, ec.scenario.proportions);
  EXPECT_EQ(back.repetitions, ec.repetitions);
}
