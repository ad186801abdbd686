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

#ifndef SUBJIDX_MODEL_HPP_
#define SUBJIDX_MODEL_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subjidx/error.hpp"
#include "subjidx/text.hpp"

namespace subjidx {

template <class Tag>
struct Id {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(Id, Id) = default;
};

using DescriptorId = Id<struct DescriptorIdTag>;
using RecordId = Id<struct RecordIdTag>;

/// Label given to the synthetic top term. Sorts before letters and digits.
inline constexpr std::string_view kVirtualRootLabel = "(virtual root)";

struct Descriptor {
  DescriptorId id;
  std::string label;
  std::string caption;  // classification captions; empty otherwise
  std::optional<DescriptorId> use_target;
  bool implicit = false;

  bool preferred() const { return !use_target.has_value(); }
};

struct RecordView {
  RecordId id;
  std::string_view label;
  std::span<const DescriptorId> descriptors;  // sorted, unique
};

/// Counters collected while a builder normalizes its input.
struct BuildStats {
  std::uint64_t duplicate_assignments = 0;
  std::uint64_t duplicate_bt_edges = 0;
  std::uint64_t duplicate_rt_pairs = 0;
  std::uint64_t self_loops_dropped = 0;
  std::uint64_t related_self_pairs_dropped = 0;
  std::uint64_t equivalence_self_loops_dropped = 0;
  std::uint64_t conflicting_use_links = 0;
};

class SystemBuilder;

/// Records, descriptors and BT/RT/USE relations. Immutable once built; every
/// accessor is a const read. Descriptor and record ids follow the byte order
/// of their labels, so id order is the deterministic tie-break order.
class IndexingSystem {
 public:
  IndexingSystem() : bt_offsets_(1, 0), nt_offsets_(1, 0), rec_offsets_(1, 0) {}

  const std::string& name() const { return name_; }

  std::size_t descriptor_count() const { return descriptors_.size(); }
  std::size_t record_count() const { return record_labels_.size(); }
  std::size_t assignment_count() const { return rec_targets_.size(); }
  std::size_t bt_edge_count() const { return bt_targets_.size(); }
  std::size_t rt_pair_count() const { return related_.size(); }
  std::size_t use_link_count() const {
    return static_cast<std::size_t>(std::count_if(
        descriptors_.begin(), descriptors_.end(),
        [](const Descriptor& d) { return d.use_target.has_value(); }));
  }

  bool contains(DescriptorId d) const { return d.value < descriptors_.size(); }
  bool contains(RecordId r) const { return r.value < record_labels_.size(); }

  const Descriptor& descriptor(DescriptorId d) const {
    check(d);
    return descriptors_[d.value];
  }
  std::span<const Descriptor> descriptors() const { return descriptors_; }

  std::optional<DescriptorId> find_descriptor(std::string_view label) const {
    std::string key = text::normalize_label(label);
    auto it = std::lower_bound(
        descriptors_.begin(), descriptors_.end(), key,
        [](const Descriptor& d, const std::string& k) { return d.label < k; });
    if (it == descriptors_.end() || it->label != key) return std::nullopt;
    return it->id;
  }

  DescriptorId descriptor_id(std::string_view label) const {
    if (auto id = find_descriptor(label)) return *id;
    throw Error(ErrorCode::kUnknownDescriptor, std::string(label));
  }

  std::optional<RecordId> find_record(std::string_view label) const {
    std::string key = text::normalize_label(label);
    auto it = std::lower_bound(record_labels_.begin(), record_labels_.end(), key);
    if (it == record_labels_.end() || *it != key) return std::nullopt;
    return RecordId{static_cast<std::uint32_t>(it - record_labels_.begin())};
  }

  RecordView record(RecordId r) const {
    if (!contains(r)) {
      throw Error(ErrorCode::kUnknownDescriptor,
                  "record id " + std::to_string(r.value));
    }
    return {r, record_labels_[r.value], record_descriptors(r)};
  }

  std::span<const DescriptorId> record_descriptors(RecordId r) const {
    return std::span<const DescriptorId>(rec_targets_)
        .subspan(rec_offsets_[r.value],
                 rec_offsets_[r.value + 1] - rec_offsets_[r.value]);
  }

  /// Unchecked adjacency; the free functions `broader`/`narrower` validate.
  std::span<const DescriptorId> broader_of(DescriptorId d) const {
    return std::span<const DescriptorId>(bt_targets_)
        .subspan(bt_offsets_[d.value],
                 bt_offsets_[d.value + 1] - bt_offsets_[d.value]);
  }
  std::span<const DescriptorId> narrower_of(DescriptorId d) const {
    return std::span<const DescriptorId>(nt_targets_)
        .subspan(nt_offsets_[d.value],
                 nt_offsets_[d.value + 1] - nt_offsets_[d.value]);
  }

  /// Related-term pairs, each stored once with first < second.
  std::span<const std::pair<DescriptorId, DescriptorId>> related_pairs() const {
    return related_;
  }

  std::span<const DescriptorId> top_terms() const { return tops_; }
  bool tops_declared() const { return tops_declared_; }
  std::optional<DescriptorId> virtual_root() const { return virtual_root_; }

  void check(DescriptorId d) const {
    if (!contains(d)) {
      throw Error(ErrorCode::kUnknownDescriptor,
                  "descriptor id " + std::to_string(d.value));
    }
  }

 private:
  friend class SystemBuilder;

  std::string name_;
  std::vector<Descriptor> descriptors_;
  std::vector<std::string> record_labels_;
  std::vector<std::size_t> bt_offsets_;
  std::vector<DescriptorId> bt_targets_;
  std::vector<std::size_t> nt_offsets_;
  std::vector<DescriptorId> nt_targets_;
  std::vector<std::size_t> rec_offsets_;
  std::vector<DescriptorId> rec_targets_;
  std::vector<std::pair<DescriptorId, DescriptorId>> related_;
  std::vector<DescriptorId> tops_;
  bool tops_declared_ = false;
  std::optional<DescriptorId> virtual_root_;
};

/// Single-writer accumulator for an IndexingSystem. Labels are normalized and
/// interned on entry; `build()` dedupes, canonicalizes ids and builds the
/// narrower-term index.
class SystemBuilder {
 public:
  explicit SystemBuilder(std::string name = {}) : name_(std::move(name)) {}

  void set_name(std::string name) { name_ = std::move(name); }
  void set_virtual_root(bool on) { virtual_root_ = on; }

  std::uint32_t intern_descriptor(std::string_view label) {
    std::string key = checked_label(label);
    auto [it, inserted] = descriptor_index_.try_emplace(
        key, static_cast<std::uint32_t>(pending_.size()));
    if (inserted) pending_.push_back({key, {}, std::nullopt, true});
    return it->second;
  }

  /// Declares an explicit descriptor (not merely referenced).
  std::uint32_t declare_descriptor(std::string_view label,
                                   std::string_view caption = {}) {
    std::uint32_t d = intern_descriptor(label);
    pending_[d].implicit = false;
    if (!caption.empty()) pending_[d].caption = text::normalize_label(caption);
    return d;
  }

  std::uint32_t intern_record(std::string_view label) {
    std::string key = checked_label(label);
    auto [it, inserted] = record_index_.try_emplace(
        key, static_cast<std::uint32_t>(records_.size()));
    if (inserted) records_.push_back(key);
    return it->second;
  }

  void assign(std::string_view record, std::string_view descriptor) {
    std::uint32_t r = intern_record(record);
    std::uint32_t d = intern_descriptor(descriptor);
    assignments_.emplace_back(r, d);
  }

  /// child BT parent. Returns false (and counts) for a self-loop.
  bool add_broader(std::string_view child, std::string_view parent) {
    std::uint32_t c = intern_descriptor(child);
    std::uint32_t p = intern_descriptor(parent);
    if (c == p) {
      ++stats_.self_loops_dropped;
      return false;
    }
    bt_.emplace_back(c, p);
    return true;
  }

  bool add_related(std::string_view a, std::string_view b) {
    std::uint32_t x = intern_descriptor(a);
    std::uint32_t y = intern_descriptor(b);
    if (x == y) {
      ++stats_.related_self_pairs_dropped;
      return false;
    }
    rt_.emplace_back(x, y);
    return true;
  }

  /// from USE to. The first link for a given `from` wins.
  bool add_use(std::string_view from, std::string_view to) {
    std::uint32_t f = intern_descriptor(from);
    std::uint32_t t = intern_descriptor(to);
    if (f == t) {
      ++stats_.equivalence_self_loops_dropped;
      return false;
    }
    if (pending_[f].use_target) {
      if (*pending_[f].use_target != t) ++stats_.conflicting_use_links;
      return false;
    }
    pending_[f].use_target = t;
    return true;
  }

  void add_top(std::string_view label) { tops_.push_back(intern_descriptor(label)); }

  const BuildStats& stats() const { return stats_; }
  std::size_t pending_descriptor_count() const { return pending_.size(); }

  IndexingSystem build() {
    if (virtual_root_) attach_virtual_root();

    // Canonical ids: label byte order.
    const std::uint32_t n = static_cast<std::uint32_t>(pending_.size());
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return pending_[a].label < pending_[b].label;
    });
    std::vector<std::uint32_t> remap(n);
    for (std::uint32_t i = 0; i < n; ++i) remap[order[i]] = i;

    IndexingSystem sys;
    sys.name_ = name_;
    sys.descriptors_.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      Pending& p = pending_[order[i]];
      Descriptor d;
      d.id = DescriptorId{i};
      d.label = std::move(p.label);
      d.caption = std::move(p.caption);
      d.implicit = p.implicit;
      if (p.use_target) d.use_target = DescriptorId{remap[*p.use_target]};
      sys.descriptors_.push_back(std::move(d));
    }

    const std::uint32_t nr = static_cast<std::uint32_t>(records_.size());
    std::vector<std::uint32_t> rorder(nr);
    std::iota(rorder.begin(), rorder.end(), 0u);
    std::sort(rorder.begin(), rorder.end(), [&](std::uint32_t a, std::uint32_t b) {
      return records_[a] < records_[b];
    });
    std::vector<std::uint32_t> rremap(nr);
    for (std::uint32_t i = 0; i < nr; ++i) rremap[rorder[i]] = i;
    sys.record_labels_.reserve(nr);
    for (std::uint32_t i = 0; i < nr; ++i) {
      sys.record_labels_.push_back(std::move(records_[rorder[i]]));
    }

    for (auto& [r, d] : assignments_) {
      r = rremap[r];
      d = remap[d];
    }
    stats_.duplicate_assignments += sort_unique(assignments_);
    to_csr(assignments_, nr, sys.rec_offsets_, sys.rec_targets_);

    for (auto& [c, p] : bt_) {
      c = remap[c];
      p = remap[p];
    }
    stats_.duplicate_bt_edges += sort_unique(bt_);
    to_csr(bt_, n, sys.bt_offsets_, sys.bt_targets_);
    for (auto& e : bt_) std::swap(e.first, e.second);
    sort_unique(bt_);
    to_csr(bt_, n, sys.nt_offsets_, sys.nt_targets_);

    for (auto& [a, b] : rt_) {
      a = remap[a];
      b = remap[b];
      if (b < a) std::swap(a, b);
    }
    stats_.duplicate_rt_pairs += sort_unique(rt_);
    sys.related_.reserve(rt_.size());
    for (auto [a, b] : rt_) sys.related_.emplace_back(DescriptorId{a}, DescriptorId{b});

    if (virtual_root_index_) {
      sys.virtual_root_ = DescriptorId{remap[*virtual_root_index_]};
      sys.tops_ = {*sys.virtual_root_};
      sys.tops_declared_ = true;
    } else if (!tops_.empty()) {
      for (std::uint32_t t : tops_) sys.tops_.push_back(DescriptorId{remap[t]});
      std::sort(sys.tops_.begin(), sys.tops_.end());
      sys.tops_.erase(std::unique(sys.tops_.begin(), sys.tops_.end()),
                      sys.tops_.end());
      sys.tops_declared_ = true;
    } else {
      for (std::uint32_t i = 0; i < n; ++i) {
        if (sys.bt_offsets_[i] == sys.bt_offsets_[i + 1]) {
          sys.tops_.push_back(DescriptorId{i});
        }
      }
    }

    pending_.clear();
    records_.clear();
    assignments_.clear();
    bt_.clear();
    rt_.clear();
    tops_.clear();
    descriptor_index_.clear();
    record_index_.clear();
    virtual_root_index_.reset();
    return sys;
  }

 private:
  struct Pending {
    std::string label;
    std::string caption;
    std::optional<std::uint32_t> use_target;
    bool implicit = true;
  };
  using Edge = std::pair<std::uint32_t, std::uint32_t>;

  static std::string checked_label(std::string_view raw) {
    std::string key = text::normalize_label(raw);
    if (key.empty()) throw Error(ErrorCode::kEmptyTitle, "empty label");
    return key;
  }

  static std::uint64_t sort_unique(std::vector<Edge>& edges) {
    std::sort(edges.begin(), edges.end());
    auto last = std::unique(edges.begin(), edges.end());
    auto removed = static_cast<std::uint64_t>(edges.end() - last);
    edges.erase(last, edges.end());
    return removed;
  }

  // `edges` must be sorted by source.
  static void to_csr(const std::vector<Edge>& edges, std::uint32_t sources,
                     std::vector<std::size_t>& offsets,
                     std::vector<DescriptorId>& targets) {
    offsets.assign(sources + 1, 0);
    targets.clear();
    targets.reserve(edges.size());
    for (const auto& [s, t] : edges) {
      ++offsets[s + 1];
      targets.push_back(DescriptorId{t});
    }
    for (std::uint32_t i = 0; i < sources; ++i) offsets[i + 1] += offsets[i];
  }

  void attach_virtual_root() {
    std::vector<std::uint32_t> children;
    if (!tops_.empty()) {
      children = tops_;
    } else {
      std::vector<bool> has_parent(pending_.size(), false);
      for (const auto& [c, p] : bt_) has_parent[c] = true;
      for (std::uint32_t i = 0; i < pending_.size(); ++i) {
        if (!has_parent[i]) children.push_back(i);
      }
    }
    std::uint32_t root = declare_descriptor(kVirtualRootLabel);
    virtual_root_index_ = root;
    for (std::uint32_t c : children) {
      if (c != root) bt_.emplace_back(c, root);
    }
    tops_.clear();
  }

  std::string name_;
  bool virtual_root_ = false;
  std::vector<Pending> pending_;
  std::unordered_map<std::string, std::uint32_t> descriptor_index_;
  std::vector<std::string> records_;
  std::unordered_map<std::string, std::uint32_t> record_index_;
  std::vector<Edge> assignments_;
  std::vector<Edge> bt_;
  std::vector<Edge> rt_;
  std::vector<std::uint32_t> tops_;
  std::optional<std::uint32_t> virtual_root_index_;
  BuildStats stats_;
};

// ---------------------------------------------------------------------------
// Graph operations

struct ValidationReport {
  std::uint64_t dangling_reference_count = 0;
  std::uint64_t bt_cycle_descriptor_count = 0;
  std::uint64_t unreachable_descriptor_count = 0;
  std::uint64_t uncategorized_record_count = 0;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

/// Levels from a multi-source BFS down the narrower-term relation. Descriptors
/// with no path to a top sit at level 0 with `unreachable` set.
struct LevelMap {
  std::vector<std::uint32_t> level;
  std::vector<char> unreachable;
  std::size_t unreachable_count = 0;

  std::uint32_t operator[](DescriptorId d) const { return level[d.value]; }
  bool is_unreachable(DescriptorId d) const { return unreachable[d.value] != 0; }
};

inline std::span<const DescriptorId> broader(const IndexingSystem& sys,
                                             DescriptorId d) {
  sys.check(d);
  return sys.broader_of(d);
}

inline std::span<const DescriptorId> narrower(const IndexingSystem& sys,
                                              DescriptorId d) {
  sys.check(d);
  return sys.narrower_of(d);
}

/// Follows USE links to a preferred descriptor (at most 16 hops).
inline DescriptorId resolve(const IndexingSystem& sys, DescriptorId d) {
  constexpr int kMaxHops = 16;
  sys.check(d);
  std::vector<DescriptorId> seen{d};
  DescriptorId cur = d;
  for (int hop = 0; hop <= kMaxHops; ++hop) {
    const Descriptor& desc = sys.descriptor(cur);
    if (desc.preferred()) return cur;
    if (hop == kMaxHops) break;
    cur = *desc.use_target;
    if (std::find(seen.begin(), seen.end(), cur) != seen.end()) {
      throw Error(ErrorCode::kEquivalenceCycle,
                  "USE chain from '" + sys.descriptor(d).label + "' revisits '" +
                      sys.descriptor(cur).label + "'");
    }
    seen.push_back(cur);
  }
  throw Error(ErrorCode::kEquivalenceCycle,
              "USE chain from '" + sys.descriptor(d).label +
                  "' exceeds 16 hops");
}

/// Transitive closure over BT, excluding `d`; sorted by id.
inline std::vector<DescriptorId> ancestors(const IndexingSystem& sys,
                                           DescriptorId d) {
  sys.check(d);
  std::vector<char> seen(sys.descriptor_count(), 0);
  std::vector<DescriptorId> stack{d};
  std::vector<DescriptorId> out;
  seen[d.value] = 1;
  while (!stack.empty()) {
    DescriptorId cur = stack.back();
    stack.pop_back();
    for (DescriptorId p : sys.broader_of(cur)) {
      if (seen[p.value]) continue;
      seen[p.value] = 1;
      out.push_back(p);
      stack.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline LevelMap levels(const IndexingSystem& sys,
                       std::span<const DescriptorId> tops) {
  if (tops.empty() && sys.descriptor_count() > 0) {
    throw Error(ErrorCode::kUnknownDescriptor, "empty top-term set");
  }
  constexpr std::uint32_t kUnset = UINT32_MAX;
  const std::size_t n = sys.descriptor_count();
  LevelMap out;
  out.level.assign(n, kUnset);
  std::deque<DescriptorId> queue;
  for (DescriptorId t : tops) {
    sys.check(t);
    if (out.level[t.value] == kUnset) {
      out.level[t.value] = 0;
      queue.push_back(t);
    }
  }
  while (!queue.empty()) {
    DescriptorId cur = queue.front();
    queue.pop_front();
    for (DescriptorId c : sys.narrower_of(cur)) {
      if (out.level[c.value] != kUnset) continue;
      out.level[c.value] = out.level[cur.value] + 1;
      queue.push_back(c);
    }
  }
  out.unreachable.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (out.level[i] == kUnset) {
      out.level[i] = 0;
      out.unreachable[i] = 1;
      ++out.unreachable_count;
    }
  }
  return out;
}

inline LevelMap levels(const IndexingSystem& sys) {
  return levels(sys, sys.top_terms());
}

/// One minimal BT path d…top. Among equal-length paths the one with the
/// lexicographically smallest label sequence is chosen.
inline std::vector<DescriptorId> shortest_path_to_top(
    const IndexingSystem& sys, DescriptorId d,
    std::span<const DescriptorId> tops) {
  sys.check(d);
  LevelMap lv = levels(sys, tops);
  if (lv.is_unreachable(d)) {
    throw Error(ErrorCode::kUnreachable,
                "no broader-term path from '" + sys.descriptor(d).label +
                    "' to a top term");
  }
  std::vector<DescriptorId> path{d};
  DescriptorId cur = d;
  while (lv[cur] > 0) {
    // broader_of is id-sorted and ids follow label order: first match wins.
    for (DescriptorId p : sys.broader_of(cur)) {
      if (!lv.is_unreachable(p) && lv[p] + 1 == lv[cur]) {
        cur = p;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

inline std::vector<DescriptorId> shortest_path_to_top(const IndexingSystem& sys,
                                                      DescriptorId d) {
  return shortest_path_to_top(sys, d, sys.top_terms());
}

/// Descriptors on at least one BT cycle (SCCs of size >= 2, plus self-loops).
inline std::vector<DescriptorId> bt_cycle_members(const IndexingSystem& sys) {
  // Iterative Tarjan.
  const std::uint32_t n = static_cast<std::uint32_t>(sys.descriptor_count());
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kNone), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> scc_stack;
  std::vector<DescriptorId> members;
  std::uint32_t next = 0;
  struct Frame {
    std::uint32_t node;
    std::size_t edge;
  };
  std::vector<Frame> call;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next++;
    scc_stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      auto out = sys.broader_of(DescriptorId{f.node});
      if (f.edge < out.size()) {
        std::uint32_t w = out[f.edge++].value;
        if (index[w] == kNone) {
          index[w] = low[w] = next++;
          scc_stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      std::uint32_t v = f.node;
      call.pop_back();
      if (!call.empty()) {
        low[call.back().node] = std::min(low[call.back().node], low[v]);
      }
      if (low[v] != index[v]) continue;
      std::vector<std::uint32_t> component;
      std::uint32_t w;
      do {
        w = scc_stack.back();
        scc_stack.pop_back();
        on_stack[w] = 0;
        component.push_back(w);
      } while (w != v);
      bool self_loop = false;
      if (component.size() == 1) {
        for (DescriptorId p : sys.broader_of(DescriptorId{v})) {
          self_loop = self_loop || p.value == v;
        }
      }
      if (component.size() >= 2 || self_loop) {
        for (std::uint32_t m : component) members.push_back(DescriptorId{m});
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

inline ValidationReport validate(const IndexingSystem& sys) {
  ValidationReport report;
  const std::size_t n = sys.descriptor_count();
  auto dangling = [&](DescriptorId d) { return d.value >= n ? 1u : 0u; };
  for (std::uint32_t i = 0; i < n; ++i) {
    DescriptorId d{i};
    for (DescriptorId p : sys.broader_of(d)) report.dangling_reference_count += dangling(p);
    for (DescriptorId c : sys.narrower_of(d)) report.dangling_reference_count += dangling(c);
    if (auto u = sys.descriptor(d).use_target) report.dangling_reference_count += dangling(*u);
  }
  for (auto [a, b] : sys.related_pairs()) {
    report.dangling_reference_count += dangling(a) + dangling(b);
  }
  for (std::uint32_t r = 0; r < sys.record_count(); ++r) {
    auto ds = sys.record_descriptors(RecordId{r});
    for (DescriptorId d : ds) report.dangling_reference_count += dangling(d);
    if (ds.empty()) ++report.uncategorized_record_count;
  }
  report.bt_cycle_descriptor_count = bt_cycle_members(sys).size();
  if (n > 0 && !sys.top_terms().empty()) {
    report.unreachable_descriptor_count = levels(sys).unreachable_count;
  } else {
    report.unreachable_descriptor_count = n;
  }
  return report;
}

struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

/// (BT edges + RT pairs + USE links) / descriptors.
inline Ratio relations_per_descriptor(const IndexingSystem& sys) {
  if (sys.descriptor_count() == 0) {
    throw Error(ErrorCode::kEmptySystem, "no descriptors");
  }
  return {sys.bt_edge_count() + sys.rt_pair_count() + sys.use_link_count(),
          sys.descriptor_count()};
}

}  // namespace subjidx

#endif  // SUBJIDX_MODEL_HPP_
