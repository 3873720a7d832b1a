// Copyright 2026 The choicoh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "choicoh/harness.hpp"

namespace choicoh {
namespace {

EnsembleConfig small_config(std::uint64_t seed = 5, int trials = 30) {
  EnsembleConfig cfg;
  cfg.seed = seed;
  cfg.trials = trials;
  cfg.images_per_superchannel = 5;
  return cfg;
}

void expect_same(const PropertyReport& a, const PropertyReport& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.trials, b.trials);
  EXPECT_EQ(a.failures, b.failures);
  EXPECT_EQ(a.worst_residual, b.worst_residual);
  EXPECT_EQ(a.offending_seeds, b.offending_seeds);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(a.pass, b.pass);
}

TEST(HarnessTest, PropertyNamesRoundTrip) {
  for (Property p : all_properties()) EXPECT_EQ(parse_property(to_string(p)), p);
  EXPECT_THROW(parse_property("nope"), InvalidInputError);
}

TEST(HarnessTest, DeterministicForFixedSeed) {
  const EnsembleConfig cfg = small_config();
  const auto a = run_suite(cfg);
  const auto b = run_suite(cfg);
  ASSERT_EQ(a.size(), all_properties().size());
  for (std::size_t i = 0; i < a.size(); ++i) expect_same(a[i], b[i]);
}

TEST(HarnessTest, RejectsEmptyConfigs) {
  EnsembleConfig cfg = small_config();
  cfg.trials = 0;
  EXPECT_THROW(run_property(cfg, Property::convexity_l1), InvalidInputError);
  cfg.trials = 5;
  cfg.dims.clear();
  EXPECT_THROW(run_property(cfg, Property::convexity_l1), InvalidInputError);
}

TEST(HarnessTest, SkippingDephasingBreaksFaithfulness) {
  EnsembleConfig cfg = small_config();
  EXPECT_TRUE(run_property(cfg, Property::faithfulness_l1).pass);
  cfg.inject_skip_dephasing = true;
  const PropertyReport l1 = run_property(cfg, Property::faithfulness_l1);
  const PropertyReport re = run_property(cfg, Property::faithfulness_rel_ent);
  EXPECT_FALSE(l1.pass);
  EXPECT_FALSE(re.pass);
  EXPECT_GT(l1.failures, 0);
  EXPECT_FALSE(l1.offending_seeds.empty());
}

// Properties whose verdicts are expected to hold on every sample; checked
// across several seeds.
TEST(HarnessTest, VerdictsStableAcrossSeeds) {
  const std::vector<Property> stable = {
      Property::superchannel_soundness,   Property::incoherent_fixed_point,
      Property::stochastic_decomposition, Property::preunitary_factorization,
      Property::maximal_coherence,        Property::faithfulness_l1,
      Property::faithfulness_rel_ent,     Property::convexity_l1,
      Property::convexity_rel_ent,        Property::post_composition_l1,
      Property::post_composition_rel_ent, Property::mixture_additivity,
      Property::state_degeneration,       Property::scaled_state_not_choi,
      Property::isc_within_misc,          Property::monotonicity_implication,
  };
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    for (const PropertyReport& r : run_suite(small_config(seed, 20), stable)) {
      EXPECT_TRUE(r.pass) << r.name << " seed " << seed << " worst " << r.worst_residual;
      EXPECT_EQ(r.generator_failures, 0) << r.name;
    }
  }
}

TEST(HarnessTest, BalancedMonotonicitySuitesPass) {
  EnsembleConfig cfg = small_config(9, 100);
  cfg.shrink = InputShrink::forbidden;
  for (Property p : {Property::isc_monotonicity_l1, Property::isc_monotonicity_rel_ent,
                     Property::selective_monotonicity_l1, Property::selective_monotonicity_rel_ent,
                     Property::pre_composition_l1, Property::pre_composition_rel_ent}) {
    const PropertyReport r = run_property(cfg, p);
    EXPECT_TRUE(r.pass) << r.name << " worst " << r.worst_residual;
  }
}

TEST(HarnessTest, StateDegenerationRecordsPairs) {
  const PropertyReport r = run_property(small_config(), Property::state_degeneration);
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.records.size(), 30u);
  for (const auto& rec : r.records) {
    ASSERT_EQ(rec.size(), 2u);
    EXPECT_GE(rec[0], 0.0);
    EXPECT_GE(rec[1], 0.0);
  }
}

TEST(HarnessTest, TrialCountsFollowConfig) {
  const PropertyReport r = run_property(small_config(5, 12), Property::convexity_rel_ent);
  EXPECT_EQ(r.trials, 12);
  EXPECT_EQ(r.name, "convexity_rel_ent");
}

}  // namespace
}  // namespace choicoh
