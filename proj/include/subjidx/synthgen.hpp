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

#ifndef SUBJIDX_SYNTHGEN_HPP_
#define SUBJIDX_SYNTHGEN_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "subjidx/distfit.hpp"
#include "subjidx/error.hpp"
#include "subjidx/model.hpp"

namespace subjidx::synthgen {

/// SplitMix64, used only to expand a seed into xoshiro state.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** (Blackman & Vigna). Samplers below are hand-written so the
/// stream does not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, n): modulo with rejection of the biased low range.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

/// Inverse-CDF sampler over indices 0..weights.size()-1.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<double>& weights) : cdf_(weights.size()) {
    double acc = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) cdf_[i] = acc += weights[i];
    for (double& c : cdf_) c /= acc;
  }
  std::size_t operator()(Rng& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return it == cdf_.end() ? cdf_.size() - 1 : static_cast<std::size_t>(it - cdf_.begin());
  }
  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

struct Hierarchy {
  enum class Kind { kNone, kTree, kDag };
  Kind kind = Kind::kNone;
  std::uint32_t branching = 2;
  std::uint32_t depth = 3;
  double bt_lambda = 0.4;

  static Hierarchy none() { return {}; }
  static Hierarchy tree(std::uint32_t b, std::uint32_t d) { return {Kind::kTree, b, d, 0.4}; }
  static Hierarchy dag(double lambda) { return {Kind::kDag, 2, 3, lambda}; }
};

struct GenSpec {
  std::uint64_t seed = 1;
  std::uint64_t record_count = 1000;
  std::uint64_t vocab_size = 1000;  // ignored for trees: the tree is the vocabulary
  double tags_lambda = 0.6;
  double popularity_exponent = 1.0;
  Hierarchy hierarchy;
  double tail_mass = 0.015;    // share of records drawing 10..tail_max tags
  double tail_exponent = 5.0;  // n^-exponent over the tail
  std::uint32_t tail_max = 50;
  std::string name = "synthetic";
};

inline void validate_spec(const GenSpec& s) {
  auto bad = [](const std::string& why) { return Error(ErrorCode::kSpecInvalid, why); };
  if (s.record_count < 1) throw bad("record_count must be >= 1");
  if (s.record_count > 0xFFFFFFFFULL) throw bad("record_count too large");
  if (s.hierarchy.kind != Hierarchy::Kind::kTree && s.vocab_size < 1) {
    throw bad("vocab_size must be >= 1");
  }
  if (s.vocab_size > 0xFFFFFFFFULL) throw bad("vocab_size too large");
  if (!(s.tags_lambda > 0) || !std::isfinite(s.tags_lambda)) throw bad("tags_lambda must be > 0");
  if (!(s.popularity_exponent > 0) || !std::isfinite(s.popularity_exponent)) {
    throw bad("popularity_exponent must be > 0");
  }
  if (!(s.tail_mass >= 0 && s.tail_mass < 1)) throw bad("tail_mass must be in [0,1)");
  if (!(s.tail_exponent > 0)) throw bad("tail_exponent must be > 0");
  if (s.tail_max < 10) throw bad("tail_max must be >= 10");
  const auto& h = s.hierarchy;
  if (h.kind == Hierarchy::Kind::kTree) {
    if (h.branching < 1 || h.depth < 1) throw bad("tree branching and depth must be >= 1");
    double nodes = 0, width = 1;
    for (std::uint32_t l = 0; l <= h.depth; ++l, width *= h.branching) nodes += width;
    if (nodes > 1e7) throw bad("tree too large");
  }
  if (h.kind == Hierarchy::Kind::kDag && (!(h.bt_lambda > 0) || !std::isfinite(h.bt_lambda))) {
    throw bad("bt_lambda must be > 0");
  }
}

inline std::string descriptor_label(std::uint64_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "t%07llu", static_cast<unsigned long long>(i));
  return buf;
}

inline std::string record_label(std::uint64_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "r%09llu", static_cast<unsigned long long>(i));
  return buf;
}

/// Tags per record: with probability 1 - tail_mass a count in [1,9] with
/// p(n) ~ exp(-lambda n), else a count in [10, tail_max] with p(n) ~ n^-a.
/// Tags come from a Zipf vocabulary over a shuffled label order, drawn
/// without replacement. A dag gives descriptor i (i > 0) b distinct parents
/// among descriptors 0..i-1 with p(b) ~ exp(-bt_lambda b); a tree is the
/// complete branching^depth tree rooted at descriptor 0.
inline IndexingSystem generate(const GenSpec& spec) {
  validate_spec(spec);
  Rng rng(spec.seed);
  const auto& h = spec.hierarchy;

  std::uint64_t vocab = spec.vocab_size;
  if (h.kind == Hierarchy::Kind::kTree) {
    vocab = 0;
    std::uint64_t width = 1;
    for (std::uint32_t l = 0; l <= h.depth; ++l, width *= h.branching) vocab += width;
  }

  SystemBuilder b(spec.name);
  std::vector<std::string> labels(vocab);
  for (std::uint64_t i = 0; i < vocab; ++i) {
    labels[i] = descriptor_label(i);
    b.declare_descriptor(labels[i]);
  }

  if (h.kind == Hierarchy::Kind::kTree) {
    for (std::uint64_t i = 1; i < vocab; ++i) b.add_broader(labels[i], labels[(i - 1) / h.branching]);
  } else if (h.kind == Hierarchy::Kind::kDag) {
    std::vector<std::uint64_t> parents;
    for (std::uint64_t i = 1; i < vocab; ++i) {
      const double e = -std::log1p(-rng.uniform());
      std::uint64_t want = 1 + static_cast<std::uint64_t>(std::floor(e / h.bt_lambda));
      want = std::min(want, i);
      parents.clear();
      while (parents.size() < want) {
        std::uint64_t p = rng.below(i);
        if (std::find(parents.begin(), parents.end(), p) == parents.end()) parents.push_back(p);
      }
      for (std::uint64_t p : parents) b.add_broader(labels[i], labels[p]);
    }
  }

  std::vector<double> head(9), tail(spec.tail_max - 9);
  for (std::size_t n = 1; n <= 9; ++n) head[n - 1] = std::exp(-spec.tags_lambda * static_cast<double>(n));
  for (std::size_t n = 10; n <= spec.tail_max; ++n) {
    tail[n - 10] = std::pow(static_cast<double>(n), -spec.tail_exponent);
  }
  DiscreteSampler head_sampler(head), tail_sampler(tail);

  std::vector<double> zipf(vocab);
  for (std::uint64_t r = 0; r < vocab; ++r) {
    zipf[r] = std::pow(static_cast<double>(r + 1), -spec.popularity_exponent);
  }
  DiscreteSampler popularity(zipf);
  std::vector<std::uint64_t> by_rank(vocab);
  for (std::uint64_t i = 0; i < vocab; ++i) by_rank[i] = i;
  for (std::uint64_t i = vocab; i > 1; --i) std::swap(by_rank[i - 1], by_rank[rng.below(i)]);

  std::vector<std::uint64_t> picked;
  for (std::uint64_t r = 0; r < spec.record_count; ++r) {
    const std::string rec = record_label(r);
    b.intern_record(rec);
    std::uint64_t n = rng.uniform() < spec.tail_mass ? 10 + tail_sampler(rng) : 1 + head_sampler(rng);
    n = std::min(n, vocab);
    picked.clear();
    while (picked.size() < n) {
      std::uint64_t d = by_rank[popularity(rng)];
      if (std::find(picked.begin(), picked.end(), d) == picked.end()) picked.push_back(d);
    }
    for (std::uint64_t d : picked) b.assign(rec, labels[d]);
  }
  return b.build();
}

/// count(t) = round(start * (1 + rate)^t) for t = 0..months.
inline std::vector<distfit::GrowthPoint> generate_growth_series(double rate, std::uint32_t months,
                                                                double start) {
  if (!(rate > -1) || !std::isfinite(rate)) throw Error(ErrorCode::kSpecInvalid, "rate must be > -1");
  if (months < 2) throw Error(ErrorCode::kSpecInvalid, "months must be >= 2");
  if (!(start >= 1) || !std::isfinite(start)) throw Error(ErrorCode::kSpecInvalid, "start must be >= 1");
  std::vector<distfit::GrowthPoint> out;
  out.reserve(months + 1);
  for (std::uint32_t t = 0; t <= months; ++t) {
    out.push_back({static_cast<double>(t), std::round(start * std::pow(1 + rate, t))});
  }
  return out;
}

}  // namespace subjidx::synthgen

#endif  // SUBJIDX_SYNTHGEN_HPP_
