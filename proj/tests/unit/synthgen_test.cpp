// Copyright 2026 The subjidx Authors
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

#include <algorithm>
#include <set>

#include "subjidx/distfit.hpp"
#include "subjidx/metrics.hpp"
#include "subjidx/synthgen.hpp"
#include "subjidx/typology.hpp"

namespace subjidx::synthgen {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(Rng, DeterministicAndBounded) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(Rng(42).next(), c.next());
  Rng r(7);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) {
    double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    ++seen[r.below(7)];
  }
  for (int s : seen) EXPECT_GT(s, 800);
}

TEST(Rng, SplitMixKnownValue) {
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
}

TEST(Sampler, FollowsWeights) {
  DiscreteSampler s({1.0, 0.0, 3.0});
  Rng r(1);
  std::vector<int> n(3, 0);
  for (int i = 0; i < 40000; ++i) ++n[s(r)];
  EXPECT_EQ(n[1], 0);
  EXPECT_NEAR(static_cast<double>(n[2]) / n[0], 3.0, 0.2);
}

TEST(Generate, SameSeedSameSystem) {
  GenSpec spec{.seed = 9, .record_count = 500, .vocab_size = 100, .hierarchy = Hierarchy::dag(0.5)};
  IndexingSystem a = generate(spec);
  IndexingSystem b = generate(spec);
  typology::SystemReport ra = typology::build_report(a, validate(a));
  typology::SystemReport rb = typology::build_report(b, validate(b));
  EXPECT_EQ(typology::render_report(ra, typology::Format::kJson),
            typology::render_report(rb, typology::Format::kJson));
  spec.seed = 10;
  IndexingSystem c = generate(spec);
  EXPECT_NE(metrics::records_per_tag(a).entries, metrics::records_per_tag(c).entries);
}

TEST(Generate, TreeShape) {
  IndexingSystem s = generate({.record_count = 50, .hierarchy = Hierarchy::tree(2, 3)});
  EXPECT_EQ(s.descriptor_count(), 15u);
  metrics::LevelHistogram h = metrics::level_histogram(s);
  EXPECT_EQ(h.hist.bins, (std::map<std::uint64_t, std::uint64_t>{{0, 1}, {1, 2}, {2, 4}, {3, 8}}));
  EXPECT_EQ(typology::classify(s).kind, typology::Kind::kClassification);
}

TEST(Generate, FlatHasNoHierarchy) {
  IndexingSystem s = generate({.record_count = 200, .vocab_size = 50});
  EXPECT_EQ(s.bt_edge_count(), 0u);
  EXPECT_EQ(s.record_count(), 200u);
  EXPECT_EQ(typology::classify(s).kind, typology::Kind::kFlatTagging);
  for (std::uint32_t r = 0; r < s.record_count(); ++r) {
    auto tags = s.record_descriptors(RecordId{r});
    EXPECT_GE(tags.size(), 1u);
    EXPECT_LE(tags.size(), 50u);
  }
}

TEST(Generate, DagIsAcyclicAndRecoversLambda) {
  IndexingSystem s = generate({.seed = 4, .record_count = 100, .vocab_size = 30000,
                               .hierarchy = Hierarchy::dag(0.4)});
  EXPECT_TRUE(bt_cycle_members(s).empty());
  distfit::ExponentialFit f = distfit::fit_exponential(metrics::broader_terms_per_term(s));
  EXPECT_NEAR(f.lambda, 0.4, 0.05);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return (v[v.size() / 2] + v[(v.size() - 1) / 2]) / 2;
}

TEST(Generate, MedianRecoveryOverSeeds) {
  std::vector<double> tags, pop;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    IndexingSystem s = generate({.seed = seed, .record_count = 20000, .vocab_size = 2000,
                                 .tags_lambda = 0.6, .popularity_exponent = 1.0});
    tags.push_back(distfit::fit_exponential(metrics::tags_per_record(s)).lambda);
    pop.push_back(distfit::fit_power_law_ranks(metrics::records_per_tag(s, 25)).exponent);
  }
  EXPECT_NEAR(median(tags), 0.6, 0.06);
  EXPECT_NEAR(median(pop), 1.0, 0.1);
}

TEST(Generate, Labels) {
  EXPECT_EQ(descriptor_label(42), "t0000042");
  EXPECT_EQ(record_label(7), "r000000007");
}

TEST(Spec, Validation) {
  EXPECT_EQ(code_of([] { generate({.vocab_size = 0}); }), ErrorCode::kSpecInvalid);
  EXPECT_EQ(code_of([] { generate({.tags_lambda = 0}); }), ErrorCode::kSpecInvalid);
  EXPECT_EQ(code_of([] { generate({.popularity_exponent = -1}); }), ErrorCode::kSpecInvalid);
  EXPECT_EQ(code_of([] { generate({.hierarchy = Hierarchy::dag(0)}); }), ErrorCode::kSpecInvalid);
  EXPECT_EQ(code_of([] { generate({.hierarchy = Hierarchy::tree(0, 3)}); }), ErrorCode::kSpecInvalid);
  EXPECT_EQ(code_of([] { generate_growth_series(0.1, 1, 10); }), ErrorCode::kSpecInvalid);
}

TEST(Growth, SeriesShape) {
  auto g = generate_growth_series(0.081, 12, 100);
  ASSERT_EQ(g.size(), 13u);
  EXPECT_DOUBLE_EQ(g.front().count, 100);
  EXPECT_DOUBLE_EQ(g.back().month, 12);
}

}  // namespace
}  // namespace subjidx::synthgen
