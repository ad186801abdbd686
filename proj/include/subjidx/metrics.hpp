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

#ifndef SUBJIDX_METRICS_HPP_
#define SUBJIDX_METRICS_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subjidx/error.hpp"
#include "subjidx/model.hpp"
#include "subjidx/text.hpp"

namespace subjidx::metrics {

/// Integer-keyed counts. Absent keys mean zero; present keys are > 0.
struct Histogram {
  std::map<std::uint64_t, std::uint64_t> bins;
  std::uint64_t total = 0;

  void add(std::uint64_t key, std::uint64_t count = 1) {
    if (count == 0) return;
    bins[key] += count;
    total += count;
  }
  std::uint64_t count(std::uint64_t key) const {
    auto it = bins.find(key);
    return it == bins.end() ? 0 : it->second;
  }
  /// Σ key·count.
  std::uint64_t weighted_sum() const {
    std::uint64_t s = 0;
    for (auto [k, c] : bins) s += k * c;
    return s;
  }
  std::uint64_t sum_range(std::uint64_t lo, std::uint64_t hi) const {
    std::uint64_t s = 0;
    for (auto it = bins.lower_bound(lo); it != bins.end() && it->first <= hi; ++it) {
      s += it->second;
    }
    return s;
  }
  /// Round-half-up integer percent of the total.
  std::uint64_t percent(std::uint64_t key) const {
    return total == 0 ? 0 : text::percent_half_up(count(key), total);
  }

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

struct RankEntry {
  DescriptorId id;
  std::string label;
  std::uint64_t count = 0;

  friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

/// Descending by count, ties by label.
struct RankTable {
  std::vector<RankEntry> entries;
  std::optional<std::size_t> truncation;
  std::uint64_t used_descriptors = 0;
  std::uint64_t unused_descriptors = 0;

  std::vector<std::uint64_t> counts() const {
    std::vector<std::uint64_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.count);
    return out;
  }
  friend bool operator==(const RankTable&, const RankTable&) = default;
};

struct TagSizeHistogram {
  Histogram hist;  // k -> descriptors used by exactly k records, k >= 1
  std::uint64_t unused_descriptors = 0;
};

struct LevelHistogram {
  Histogram hist;
  std::uint64_t unreachable_in_level0 = 0;

  friend bool operator==(const LevelHistogram&, const LevelHistogram&) = default;
};

struct Coverage {
  std::uint64_t records = 0;
  std::uint64_t categorized = 0;
  std::uint64_t descriptors = 0;
  std::optional<double> ratio;  // undefined for an empty system
};

struct Cooccurrence {
  DescriptorId first;
  DescriptorId second;
  std::string first_label;
  std::string second_label;
  std::uint64_t count = 0;

  friend bool operator==(const Cooccurrence&, const Cooccurrence&) = default;
};

struct MetricOptions {
  bool resolve_use = false;  // count USE targets instead of non-preferred terms
};

namespace detail {

/// Descriptors of record `r`, optionally USE-resolved (sorted, unique).
inline std::span<const DescriptorId> record_tags(const IndexingSystem& sys, RecordId r,
                                                 const MetricOptions& opts,
                                                 std::vector<DescriptorId>& scratch) {
  auto ds = sys.record_descriptors(r);
  if (!opts.resolve_use) return ds;
  scratch.clear();
  for (DescriptorId d : ds) scratch.push_back(resolve(sys, d));
  std::sort(scratch.begin(), scratch.end());
  scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
  return scratch;
}

inline std::vector<std::uint64_t> usage_counts(const IndexingSystem& sys,
                                               const MetricOptions& opts) {
  std::vector<std::uint64_t> counts(sys.descriptor_count(), 0);
  std::vector<DescriptorId> scratch;
  for (std::uint32_t r = 0; r < sys.record_count(); ++r) {
    for (DescriptorId d : record_tags(sys, RecordId{r}, opts, scratch)) ++counts[d.value];
  }
  return counts;
}

inline void require_assignments(const IndexingSystem& sys) {
  if (sys.assignment_count() == 0) {
    throw Error(ErrorCode::kEmptySystem, "no record-descriptor assignments");
  }
}

}  // namespace detail

/// bins[n] = records carrying exactly n descriptors (n = 0 included).
inline Histogram tags_per_record(const IndexingSystem& sys, const MetricOptions& opts = {}) {
  if (sys.record_count() == 0) throw Error(ErrorCode::kEmptySystem, "no records");
  Histogram h;
  std::vector<DescriptorId> scratch;
  for (std::uint32_t r = 0; r < sys.record_count(); ++r) {
    h.add(detail::record_tags(sys, RecordId{r}, opts, scratch).size());
  }
  return h;
}

inline RankTable records_per_tag(const IndexingSystem& sys,
                                 std::optional<std::size_t> k = std::nullopt,
                                 const MetricOptions& opts = {}) {
  detail::require_assignments(sys);
  auto counts = detail::usage_counts(sys, opts);
  RankTable t;
  t.truncation = k;
  for (std::uint32_t i = 0; i < counts.size(); ++i) {
    const Descriptor& d = sys.descriptor(DescriptorId{i});
    if (counts[i] > 0) {
      t.entries.push_back({d.id, d.label, counts[i]});
      ++t.used_descriptors;
    } else if (!opts.resolve_use || d.preferred()) {
      ++t.unused_descriptors;
    }
  }
  // Entries are in id order, which is label order; stable sort keeps ties so.
  std::stable_sort(t.entries.begin(), t.entries.end(),
                   [](const RankEntry& a, const RankEntry& b) { return a.count > b.count; });
  if (k && t.entries.size() > *k) t.entries.resize(*k);
  return t;
}

inline TagSizeHistogram tag_size_histogram(const IndexingSystem& sys,
                                           const MetricOptions& opts = {}) {
  detail::require_assignments(sys);
  TagSizeHistogram out;
  auto counts = detail::usage_counts(sys, opts);
  for (std::uint32_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) {
      out.hist.add(counts[i]);
    } else if (!opts.resolve_use || sys.descriptor(DescriptorId{i}).preferred()) {
      ++out.unused_descriptors;
    }
  }
  return out;
}

/// bins[b] = descriptors with exactly b broader terms (b = 0 included).
inline Histogram broader_terms_per_term(const IndexingSystem& sys) {
  if (sys.descriptor_count() == 0) throw Error(ErrorCode::kEmptySystem, "no descriptors");
  Histogram h;
  for (std::uint32_t i = 0; i < sys.descriptor_count(); ++i) {
    h.add(sys.broader_of(DescriptorId{i}).size());
  }
  return h;
}

inline LevelHistogram level_histogram(const IndexingSystem& sys,
                                      std::span<const DescriptorId> tops) {
  if (sys.descriptor_count() == 0) throw Error(ErrorCode::kEmptySystem, "no descriptors");
  LevelMap lv = levels(sys, tops);
  LevelHistogram out;
  for (std::uint32_t l : lv.level) out.hist.add(l);
  out.unreachable_in_level0 = lv.unreachable_count;
  return out;
}

inline LevelHistogram level_histogram(const IndexingSystem& sys) {
  return level_histogram(sys, sys.top_terms());
}

inline Coverage coverage(const IndexingSystem& sys) {
  Coverage c;
  c.records = sys.record_count();
  c.descriptors = sys.descriptor_count();
  for (std::uint32_t r = 0; r < sys.record_count(); ++r) {
    if (!sys.record_descriptors(RecordId{r}).empty()) ++c.categorized;
  }
  if (c.records > 0) {
    c.ratio = static_cast<double>(c.categorized) / static_cast<double>(c.records);
  }
  return c;
}

/// Unordered descriptor pairs co-assigned to a record, top `m` by count.
inline std::vector<Cooccurrence> cooccurrence_top(const IndexingSystem& sys, std::size_t m,
                                                  const MetricOptions& opts = {}) {
  if (m == 0) throw Error(ErrorCode::kInsufficientData, "m must be >= 1");
  detail::require_assignments(sys);
  std::vector<std::uint64_t> keys;
  std::vector<DescriptorId> scratch;
  for (std::uint32_t r = 0; r < sys.record_count(); ++r) {
    auto tags = detail::record_tags(sys, RecordId{r}, opts, scratch);
    for (std::size_t i = 0; i < tags.size(); ++i) {
      for (std::size_t j = i + 1; j < tags.size(); ++j) {
        keys.push_back((std::uint64_t{tags[i].value} << 32) | tags[j].value);
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> runs;  // key, count
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    runs.emplace_back(keys[i], j - i);
    i = j;
  }
  // Keys are id pairs and ids follow label order, so key order is the
  // lexicographic tie-break.
  auto by_count = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  std::size_t keep = std::min(m, runs.size());
  std::partial_sort(runs.begin(), runs.begin() + static_cast<std::ptrdiff_t>(keep),
                    runs.end(), by_count);
  std::vector<Cooccurrence> out;
  for (std::size_t i = 0; i < keep; ++i) {
    DescriptorId a{static_cast<std::uint32_t>(runs[i].first >> 32)};
    DescriptorId b{static_cast<std::uint32_t>(runs[i].first & 0xffffffffu)};
    out.push_back({a, b, sys.descriptor(a).label, sys.descriptor(b).label, runs[i].second});
  }
  return out;
}

}  // namespace subjidx::metrics

#endif  // SUBJIDX_METRICS_HPP_
