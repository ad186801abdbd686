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

#include <map>
#include <set>

#include "subjidx/ingest.hpp"
#include "subjidx/metrics.hpp"
#include "subjidx/synthgen.hpp"
#include "test_support.hpp"

namespace subjidx::metrics {
namespace {

using testing::fixture;
using testing::generated;
using testing::id;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

IndexingSystem tagged(const testing::Edges& pairs, const std::vector<std::string>& bare = {}) {
  SystemBuilder b("t");
  for (const auto& [r, d] : pairs) b.assign(r, d);
  for (const auto& r : bare) b.intern_record(r);
  return b.build();
}

TEST(TagsPerRecord, CountsZeroBucket) {
  IndexingSystem s = tagged({{"a", "x"}, {"a", "y"}, {"b", "x"}, {"a", "x"}}, {"c"});
  Histogram h = tags_per_record(s);
  EXPECT_EQ(h.count(0), 1u);
  EXPECT_EQ(h.count(1), 1u);
  EXPECT_EQ(h.count(2), 1u);
  EXPECT_EQ(h.total, 3u);
  EXPECT_EQ(h.weighted_sum(), s.assignment_count());
  EXPECT_EQ(h.percent(0), 33u);
}

TEST(TagsPerRecord, ResolveUseMergesSynonyms) {
  SystemBuilder b("t");
  b.assign("p", "Carcinoma");
  b.assign("p", "Neoplasms");
  b.add_use("Carcinoma", "Neoplasms");
  IndexingSystem s = b.build();
  EXPECT_EQ(tags_per_record(s).count(2), 1u);
  EXPECT_EQ(tags_per_record(s, {.resolve_use = true}).count(1), 1u);
  RankTable t = records_per_tag(s, std::nullopt, {.resolve_use = true});
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(t.entries[0].label, "Neoplasms");
  EXPECT_EQ(t.unused_descriptors, 0u);
}

TEST(RecordsPerTag, RankingAndTies) {
  IndexingSystem s = tagged({{"1", "b"}, {"2", "b"}, {"1", "a"}, {"2", "a"}, {"3", "c"}, {"4", "z"}});
  RankTable t = records_per_tag(s);
  ASSERT_EQ(t.entries.size(), 4u);
  EXPECT_EQ(t.entries[0].label, "a");
  EXPECT_EQ(t.entries[1].label, "b");
  EXPECT_EQ(t.entries[2].label, "c");
  EXPECT_EQ(t.entries[3].label, "z");
  EXPECT_EQ(records_per_tag(s, 2).entries.size(), 2u);
  EXPECT_EQ(records_per_tag(s, 2).truncation, std::optional<std::size_t>{2});
  std::uint64_t sum = 0;
  for (auto c : t.counts()) sum += c;
  EXPECT_EQ(sum, s.assignment_count());
}

TEST(RecordsPerTag, EmptyTaggingFails) {
  SystemBuilder b("t");
  b.intern_record("r");
  IndexingSystem s = b.build();
  EXPECT_EQ(code_of([&] { records_per_tag(s); }), ErrorCode::kEmptySystem);
  EXPECT_EQ(code_of([&] { tags_per_record(SystemBuilder("e").build()); }), ErrorCode::kEmptySystem);
  EXPECT_EQ(code_of([&] { cooccurrence_top(s, 3); }), ErrorCode::kEmptySystem);
}

TEST(TagSizes, MatchesRankTable) {
  IndexingSystem s = tagged({{"1", "a"}, {"2", "a"}, {"3", "b"}});
  TagSizeHistogram h = tag_size_histogram(s);
  EXPECT_EQ(h.hist.count(1), 1u);
  EXPECT_EQ(h.hist.count(2), 1u);
  EXPECT_EQ(h.hist.weighted_sum(), s.assignment_count());
}

TEST(BroaderTerms, IncludesRoots) {
  IndexingSystem s = testing::hierarchy({{"Moon", "Moons"}, {"Moon", "Solar System"}, {"Moons", "AO"}});
  Histogram h = broader_terms_per_term(s);
  EXPECT_EQ(h.count(0), 2u);
  EXPECT_EQ(h.count(1), 1u);
  EXPECT_EQ(h.count(2), 1u);
  EXPECT_EQ(h.weighted_sum(), s.bt_edge_count());
  EXPECT_EQ(h.total, s.descriptor_count());
}

TEST(Levels, UnreachableInLevelZero) {
  IndexingSystem s = testing::hierarchy({{"b", "a"}, {"c", "b"}, {"x", "y"}, {"y", "x"}}, {"a"});
  LevelHistogram h = level_histogram(s);
  EXPECT_EQ(h.hist.count(0), 3u);
  EXPECT_EQ(h.hist.count(1), 1u);
  EXPECT_EQ(h.hist.count(2), 1u);
  EXPECT_EQ(h.unreachable_in_level0, 2u);
  EXPECT_EQ(h.hist.total, s.descriptor_count());
}

TEST(Coverage, RatioAndEmpty) {
  IndexingSystem s = tagged({{"a", "x"}}, {"b", "c", "d"});
  Coverage c = coverage(s);
  EXPECT_EQ(c.categorized, 1u);
  EXPECT_DOUBLE_EQ(*c.ratio, 0.25);
  EXPECT_FALSE(coverage(SystemBuilder("e").build()).ratio.has_value());
}

TEST(Cooccurrence, AppleExample) {
  ingest::LoadedBundle b = ingest::load_bundle(fixture("wikipedia-sample"));
  auto top = cooccurrence_top(b.system, 10);
  bool found = false;
  for (const auto& c : top) {
    if (c.first_label == "Agriculture" && c.second_label == "Apples") {
      found = true;
      EXPECT_EQ(c.count, 1u);
    }
    EXPECT_LT(c.first_label, c.second_label);
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(code_of([&] { cooccurrence_top(b.system, 0); }), ErrorCode::kInsufficientData);
}

TEST(Cooccurrence, NaiveOracleOnSyntheticData) {
  IndexingSystem s = synthgen::generate({.seed = 3, .record_count = 2000, .vocab_size = 60,
                                         .tags_lambda = 0.3});
  std::map<std::pair<std::string, std::string>, std::uint64_t> naive;
  for (std::uint32_t r = 0; r < s.record_count(); ++r) {
    std::set<std::string> tags;
    for (DescriptorId d : s.record_descriptors(RecordId{r})) tags.insert(s.descriptor(d).label);
    for (auto i = tags.begin(); i != tags.end(); ++i) {
      for (auto j = std::next(i); j != tags.end(); ++j) ++naive[{*i, *j}];
    }
  }
  std::vector<std::pair<std::uint64_t, std::pair<std::string, std::string>>> sorted;
  for (const auto& [k, c] : naive) sorted.push_back({c, k});
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  auto top = cooccurrence_top(s, 15);
  ASSERT_EQ(top.size(), 15u);
  for (std::size_t i = 0; i < top.size(); ++i) {
    EXPECT_EQ(top[i].count, sorted[i].first) << i;
    EXPECT_EQ(top[i].first_label, sorted[i].second.first) << i;
    EXPECT_EQ(top[i].second_label, sorted[i].second.second) << i;
  }
}

TEST(Identities, SyntheticSystems) {
  for (std::uint64_t seed : {1, 2, 3}) {
    IndexingSystem s = synthgen::generate({.seed = seed, .record_count = 3000, .vocab_size = 500,
                                           .hierarchy = synthgen::Hierarchy::dag(0.6)});
    Histogram per_record = tags_per_record(s);
    EXPECT_EQ(per_record.weighted_sum(), s.assignment_count());
    EXPECT_EQ(per_record.total, s.record_count());
    EXPECT_EQ(tag_size_histogram(s).hist.weighted_sum(), s.assignment_count());
    RankTable t = records_per_tag(s);
    EXPECT_EQ(t.used_descriptors + t.unused_descriptors, s.descriptor_count());
    EXPECT_EQ(broader_terms_per_term(s).weighted_sum(), s.bt_edge_count());
    EXPECT_EQ(level_histogram(s).hist.total, s.descriptor_count());
  }
}

std::map<std::uint64_t, std::uint64_t> as_map(const std::filesystem::path& p) {
  std::map<std::uint64_t, std::uint64_t> m;
  for (auto [k, v] : testing::table(p)) m[k] = v;
  return m;
}

class GeneratedWikipedia : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    bundle_ = new ingest::LoadedBundle(ingest::load_bundle(generated("wikipedia")));
  }
  static void TearDownTestSuite() {
    delete bundle_;
    bundle_ = nullptr;
  }
  static ingest::LoadedBundle* bundle_;
};
ingest::LoadedBundle* GeneratedWikipedia::bundle_ = nullptr;

TEST_F(GeneratedWikipedia, TagsPerRecordMatchesTable) {
  Histogram h = tags_per_record(bundle_->system);
  EXPECT_EQ(h.total, 923196u);
  for (auto [n, c] : as_map(fixture("tables/tags_wikipedia.tsv"))) EXPECT_EQ(h.count(n), c) << n;
}

TEST_F(GeneratedWikipedia, LevelsMatchTable) {
  LevelHistogram h = level_histogram(bundle_->system);
  auto want = as_map(fixture("tables/levels_wikipedia.tsv"));
  EXPECT_EQ(h.hist.bins.size(), want.size());
  for (auto [l, c] : want) EXPECT_EQ(h.hist.count(l), c) << l;
}

TEST_F(GeneratedWikipedia, PopularCountsMatchTable) {
  RankTable t = records_per_tag(bundle_->system, 25);
  auto want = testing::table(fixture("tables/popular_wikipedia.tsv"));
  ASSERT_EQ(t.entries.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(t.entries[i].count, want[i].second) << i;
}

TEST(GeneratedDdc, LevelsMatchTable) {
  ingest::LoadedBundle b = ingest::load_bundle(generated("ddc"));
  LevelHistogram h = level_histogram(b.system);
  auto want = as_map(fixture("tables/levels_ddc.tsv"));
  for (auto [l, c] : want) EXPECT_EQ(h.hist.count(l), c) << l;
  EXPECT_EQ(h.hist.total, b.system.descriptor_count());
  EXPECT_EQ(h.unreachable_in_level0, 0u);
}

}  // namespace
}  // namespace subjidx::metrics
