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

// Expands the transcribed tables into full bundles:
//   wikipedia/  pagecats + records, levels and top categories as tabulated
//   ddc/        classes + assignments, levels and top classes as tabulated
//   delicious/  flat assignments, tags per bookmark and top tags as tabulated

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "subjidx/ingest.hpp"
#include "subjidx/synthgen.hpp"

namespace fs = std::filesystem;
using subjidx::synthgen::Rng;

namespace {

using Counts = std::map<std::uint64_t, std::uint64_t>;

std::vector<std::vector<std::string>> read_rows(const fs::path& path, std::size_t columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  subjidx::ingest::scan_lines(in, {}, [&](std::string_view line, std::size_t no) {
    auto f = subjidx::ingest::fields(line, columns, no, columns);
    rows.emplace_back(f.begin(), f.end());
  });
  return rows;
}

Counts read_counts(const fs::path& path) {
  Counts out;
  for (const auto& r : read_rows(path, 2)) out[std::stoull(r[0])] = std::stoull(r[1]);
  return out;
}

std::vector<std::pair<std::string, std::uint64_t>> popular(const fs::path& dir, const std::string& sys) {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  for (const auto& r : read_rows(dir / "popular_tags.tsv", 4)) {
    if (r[0] == sys) out.emplace_back(r[2], std::stoull(r[3]));
  }
  return out;
}

std::uint64_t record_total(const fs::path& dir, const std::string& sys) {
  for (const auto& r : read_rows(dir / "record_totals.tsv", 2)) {
    if (r[0] == sys) return std::stoull(r[1]);
  }
  throw std::runtime_error("no record total for " + sys);
}

/// Largest-remainder split of `total` proportionally to `weights`.
std::vector<std::uint64_t> apportion(std::uint64_t total, const std::vector<double>& weights) {
  double sum = 0;
  for (double w : weights) sum += w;
  std::vector<std::uint64_t> out(weights.size());
  std::vector<std::pair<double, std::size_t>> rest;
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::uint64_t>(std::floor(exact));
    used += out[i];
    rest.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(rest.begin(), rest.end(), [](auto a, auto b) { return a.first > b.first; });
  for (std::size_t k = 0; used < total; ++k, ++used) ++out[rest[k % rest.size()].second];
  return out;
}

/// Descriptors per record, largest first: the tabulated head plus a tail
/// n >= 10 with weights n^-exponent holding the remaining records.
std::vector<std::uint32_t> record_sizes(const Counts& head, std::uint64_t total, double exponent,
                                        std::uint32_t tail_max) {
  std::uint64_t tabulated = 0;
  for (auto [n, c] : head) tabulated += c;
  std::vector<double> w;
  for (std::uint32_t n = 10; n <= tail_max; ++n) w.push_back(std::pow(n, -exponent));
  auto tail = apportion(total - tabulated, w);
  std::vector<std::uint32_t> sizes;
  sizes.reserve(total);
  for (std::uint32_t n = tail_max; n >= 10; --n) sizes.insert(sizes.end(), tail[n - 10], n);
  for (auto it = head.rbegin(); it != head.rend(); ++it) {
    sizes.insert(sizes.end(), it->second, static_cast<std::uint32_t>(it->first));
  }
  return sizes;
}

/// Non-increasing counts in [1, cap] summing to `total`, shaped A * r^-s.
std::vector<std::uint64_t> filler_counts(std::uint64_t total, std::size_t n, std::uint64_t cap, double s) {
  if (total < n || total > cap * n) throw std::runtime_error("filler budget out of range");
  auto eval = [&](double a, std::vector<std::uint64_t>* out) {
    std::uint64_t sum = 0;
    for (std::size_t r = 0; r < n; ++r) {
      double v = std::floor(a * std::pow(static_cast<double>(r + 1), -s));
      std::uint64_t c = std::clamp<double>(v, 1.0, static_cast<double>(cap));
      if (out) (*out)[r] = c;
      sum += c;
    }
    return sum;
  };
  double lo = 0, hi = 1;
  while (eval(hi, nullptr) < total) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    (eval(mid, nullptr) <= total ? lo : hi) = mid;
  }
  std::vector<std::uint64_t> out(n);
  std::uint64_t left = total - eval(lo, &out);
  while (left > 0) {
    for (std::size_t r = 0; r < n && left > 0; ++r) {
      if (out[r] < cap && (r == 0 || out[r] < out[r - 1])) {
        ++out[r];
        --left;
      }
    }
  }
  return out;
}

/// Fills record slots column by column (slot j of every record with more
/// than j descriptors), deepest column first, from a stream ordered by
/// ascending count; tokens that would repeat a descriptor within one record
/// are deferred to a later slot.
std::vector<std::vector<std::uint32_t>> place(const std::vector<std::uint32_t>& sizes,
                                              const std::vector<std::pair<std::uint32_t, std::uint64_t>>& tokens) {
  std::vector<std::vector<std::uint32_t>> slots(sizes.size());
  for (std::size_t r = 0; r < sizes.size(); ++r) slots[r].reserve(sizes[r]);
  std::size_t t = 0;
  std::uint64_t left = tokens.empty() ? 0 : tokens[0].second;
  std::vector<std::uint32_t> deferred;
  auto next = [&]() -> std::uint32_t {
    while (left == 0) {
      if (++t >= tokens.size()) throw std::runtime_error("token stream exhausted");
      left = tokens[t].second;
    }
    --left;
    return tokens[t].first;
  };
  auto has = [&](std::size_t r, std::uint32_t d) {
    return std::find(slots[r].begin(), slots[r].end(), d) != slots[r].end();
  };
  const std::uint32_t width = sizes.empty() ? 0 : sizes.front();
  for (std::uint32_t j = width; j-- > 0;) {
    for (std::size_t r = 0; r < sizes.size() && sizes[r] > j; ++r) {
      auto it = std::find_if(deferred.begin(), deferred.end(), [&](auto d) { return !has(r, d); });
      if (it != deferred.end()) {
        slots[r].push_back(*it);
        deferred.erase(it);
        continue;
      }
      std::uint32_t d = next();
      while (has(r, d)) {
        deferred.push_back(d);
        d = next();
      }
      slots[r].push_back(d);
    }
  }
  if (!deferred.empty() || left != 0 || t + 1 < tokens.size()) {
    throw std::runtime_error("placement left tokens over");
  }
  return slots;
}

void write(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string numbered(const char* fmt, std::uint64_t i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, static_cast<unsigned long long>(i));
  return buf;
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

/// Record/descriptor pairs for a tagging system: the top descriptors carry
/// their tabulated counts, the rest share the remaining slots below them.
struct Tagging {
  std::vector<std::uint32_t> sizes;
  std::vector<std::vector<std::uint32_t>> slots;
};

Tagging realize_tagging(std::vector<std::uint32_t> sizes, const std::vector<std::uint64_t>& top_counts,
                        const std::vector<std::uint32_t>& top_ids, const std::vector<std::uint32_t>& filler_ids,
                        double filler_shape) {
  std::uint64_t slots = 0, fixed = 0;
  for (auto n : sizes) slots += n;
  for (auto c : top_counts) fixed += c;
  const std::uint64_t cap = *std::min_element(top_counts.begin(), top_counts.end()) - 1;
  auto fill = filler_counts(slots - fixed, filler_ids.size(), cap, filler_shape);
  std::vector<std::pair<std::uint32_t, std::uint64_t>> tokens;
  for (std::size_t i = 0; i < top_ids.size(); ++i) tokens.emplace_back(top_ids[i], top_counts[i]);
  for (std::size_t i = 0; i < filler_ids.size(); ++i) tokens.emplace_back(filler_ids[i], fill[i]);
  std::stable_sort(tokens.begin(), tokens.end(), [](auto a, auto b) { return a.second < b.second; });
  Tagging t;
  t.slots = place(sizes, tokens);
  t.sizes = std::move(sizes);
  return t;
}

// ---------------------------------------------------------------------------

void make_wikipedia(const fs::path& in, const fs::path& out) {
  Rng rng(20060107);
  const Counts levels = read_counts(in / "levels_wikipedia.tsv");
  const Counts broader = read_counts(in / "broader_wikipedia.tsv");
  const Counts tags = read_counts(in / "tags_wikipedia.tsv");
  const auto top = popular(in, "wikipedia");

  // Categories by level; level 0 holds the top, a 3-cycle and isolated roots.
  std::vector<std::vector<std::uint32_t>> by_level(levels.rbegin()->first + 1);
  std::vector<std::string> label;
  label.push_back("Categories");
  by_level[0].push_back(0);
  const std::uint64_t unreachable = levels.at(0) - 1;
  std::vector<std::uint32_t> stray;
  for (std::uint64_t i = 0; i < unreachable; ++i) {
    stray.push_back(static_cast<std::uint32_t>(label.size()));
    label.push_back(numbered("Topic %05llu", label.size()));
  }
  for (std::size_t l = 1; l < by_level.size(); ++l) {
    for (std::uint64_t i = 0; i < levels.at(l); ++i) {
      by_level[l].push_back(static_cast<std::uint32_t>(label.size()));
      label.push_back(numbered("Topic %05llu", label.size()));
    }
  }

  // Broader-term counts in the tabulated proportions; level 1 has one
  // possible parent, so it draws from the b = 1 pool first.
  std::uint64_t reachable = label.size() - levels.at(0);
  std::vector<double> w;
  for (auto [b, c] : broader) w.push_back(static_cast<double>(c));
  auto per_b = apportion(reachable, w);
  std::vector<std::uint32_t> pool;
  for (std::size_t i = 0; i < per_b.size(); ++i) {
    pool.insert(pool.end(), per_b[i] - (i == 0 ? levels.at(1) : 0), static_cast<std::uint32_t>(i + 1));
  }
  shuffle(pool, rng);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // child, parent
  std::size_t next_b = 0;
  for (std::size_t l = 1; l < by_level.size(); ++l) {
    const auto& up = by_level[l - 1];
    std::size_t cursor = 0;
    for (std::uint32_t c : by_level[l]) {
      std::uint32_t b = l == 1 ? 1 : pool[next_b++];
      b = std::min<std::uint32_t>(b, static_cast<std::uint32_t>(up.size()));
      std::vector<std::uint32_t> parents{up[cursor++ % up.size()]};
      while (parents.size() < b) {
        std::uint32_t p = up[rng.below(up.size())];
        if (std::find(parents.begin(), parents.end(), p) == parents.end()) parents.push_back(p);
      }
      for (auto p : parents) edges.emplace_back(c, p);
    }
  }
  edges.emplace_back(stray[0], stray[1]);
  edges.emplace_back(stray[1], stray[2]);
  edges.emplace_back(stray[2], stray[0]);

  // The tabulated top categories take over randomly chosen mid-level nodes.
  std::vector<std::uint32_t> mid;
  for (std::size_t l = 3; l <= 6; ++l) mid.insert(mid.end(), by_level[l].begin(), by_level[l].end());
  shuffle(mid, rng);
  std::vector<std::uint32_t> top_ids;
  std::vector<std::uint64_t> top_counts;
  for (std::size_t i = 0; i < top.size(); ++i) {
    label[mid[i]] = top[i].first;
    top_ids.push_back(mid[i]);
    top_counts.push_back(top[i].second);
  }
  std::unordered_set<std::uint32_t> is_top(top_ids.begin(), top_ids.end());
  std::vector<std::uint32_t> fillers;
  for (std::uint32_t i = 1; i < label.size(); ++i) {
    if (!is_top.count(i)) fillers.push_back(i);
  }
  shuffle(fillers, rng);

  Counts head(tags.begin(), tags.end());
  head.erase(0);
  auto sizes = record_sizes(head, record_total(in, "wikipedia") - tags.at(0), 6.0, 40);
  Tagging t = realize_tagging(std::move(sizes), top_counts, top_ids, fillers, 0.9);

  std::vector<std::uint32_t> article(t.sizes.size() + tags.at(0));
  for (std::uint32_t i = 0; i < article.size(); ++i) article[i] = i + 1;
  shuffle(article, rng);

  fs::create_directories(out);
  write(out / "meta.tsv", "name\tWikipedia (table-shaped)\ntop_term\tCategories\n");
  std::string body;
  body.reserve(64u << 20);
  for (auto [c, p] : edges) body += "Category:" + label[c] + "\t" + label[p] + "\n";
  for (std::size_t r = 0; r < t.slots.size(); ++r) {
    std::string title = numbered("A%07llu", article[r]);
    for (auto d : t.slots[r]) body += title + "\t" + label[d] + "\n";
  }
  write(out / "pagecats.tsv", body);
  body.clear();
  for (std::size_t r = t.slots.size(); r < article.size(); ++r) body += numbered("A%07llu", article[r]) + "\n";
  write(out / "records.tsv", body);
}

// ---------------------------------------------------------------------------

std::string ddc_parent(const std::string& n) {
  if (n == "559") return "59";
  std::string p = n.substr(0, n.size() - 1);
  if (!p.empty() && p.back() == '.') p.pop_back();
  return p;
}

std::size_t ddc_level(const std::string& n) {
  return static_cast<std::size_t>(std::count_if(n.begin(), n.end(), [](char c) { return c != '.'; }));
}

std::string ddc_child(const std::string& n, int digit) {
  return n + (n.size() == 3 ? "." : "") + static_cast<char>('0' + digit);
}

void make_ddc(const fs::path& in, const fs::path& out) {
  const Counts levels = read_counts(in / "levels_ddc.tsv");
  auto top = popular(in, "ddc");
  for (auto& [n, c] : top) {
    if (n.find('.') == std::string::npos && n.size() > 3) n = n.substr(0, 3) + "." + n.substr(3);
  }
  const std::map<std::string, std::string> captions = {
      {"0", "Computer science, information & general works"},
      {"1", "Philosophy & psychology"},
      {"2", "Religion"},
      {"3", "Social sciences"},
      {"4", "Language"},
      {"5", "Science"},
      {"6", "Technology"},
      {"7", "Arts & recreation"},
      {"8", "Literature"},
      {"9", "History & geography"},
      {"59", "Earth sciences & geology"},
      {"559", "Other parts of world and extraterrestrial worlds"},
      {"559.9", "Extraterrestrial worlds"},
      {"559.91", "Earth's moon"}};

  std::vector<std::set<std::string>> at(levels.rbegin()->first + 1);
  std::vector<std::string> required{"559.91"};
  for (const auto& [n, c] : top) required.push_back(n);
  for (std::string n : required) {
    for (; !n.empty(); n = ddc_parent(n)) at[ddc_level(n)].insert(n);
  }
  for (std::size_t l = 1; l < at.size(); ++l) {
    std::vector<std::string> parents = l == 1 ? std::vector<std::string>{""}
                                              : std::vector<std::string>(at[l - 1].begin(), at[l - 1].end());
    for (int d = 0; d < 10 && at[l].size() < levels.at(l); ++d) {
      for (const auto& p : parents) {
        if (at[l].size() >= levels.at(l)) break;
        std::string c = p.empty() ? std::string(1, static_cast<char>('0' + d)) : ddc_child(p, d);
        if (c == "04" || (l == 3 && c == "559")) continue;
        at[l].insert(c);
      }
    }
    if (at[l].size() != levels.at(l)) throw std::runtime_error("ddc level underfilled");
  }

  fs::create_directories(out);
  write(out / "meta.tsv", "name\tDDC\nvirtual_root\ttrue\n");
  std::string body;
  for (std::size_t l = 1; l < at.size(); ++l) {
    for (const auto& n : at[l]) {
      auto cap = captions.find(n);
      body += n + "\t" + (cap != captions.end() ? cap->second : "Class " + n) + "\t" +
              (l == 1 ? "" : ddc_parent(n)) + "\n";
    }
  }
  write(out / "classes.tsv", body);

  Rng rng(20060108);
  std::vector<std::string> records;
  for (const auto& [n, c] : top) records.insert(records.end(), c, n);
  std::vector<std::uint32_t> order(records.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, rng);
  body.clear();
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    body += numbered("B%07llu", i + 1) + "\t" + records[order[i]] + "\n";
  }
  write(out / "assignments.tsv", body);
}

// ---------------------------------------------------------------------------

void make_delicious(const fs::path& in, const fs::path& out) {
  Rng rng(20060109);
  const Counts tags = read_counts(in / "tags_delicious.tsv");
  const auto top = popular(in, "delicious");
  std::vector<std::string> label;
  std::vector<std::uint32_t> top_ids, fillers;
  std::vector<std::uint64_t> top_counts;
  for (const auto& [l, c] : top) {
    top_ids.push_back(static_cast<std::uint32_t>(label.size()));
    top_counts.push_back(c);
    label.push_back(l);
  }
  constexpr std::size_t kFillers = 60000;
  for (std::size_t i = 0; i < kFillers; ++i) {
    fillers.push_back(static_cast<std::uint32_t>(label.size()));
    label.push_back(numbered("tag%05llu", i + 1));
  }
  shuffle(fillers, rng);
  auto sizes = record_sizes(tags, record_total(in, "delicious"), 4.0, 60);
  Tagging t = realize_tagging(std::move(sizes), top_counts, top_ids, fillers, 0.9);
  std::vector<std::uint32_t> bookmark(t.slots.size());
  for (std::uint32_t i = 0; i < bookmark.size(); ++i) bookmark[i] = i + 1;
  shuffle(bookmark, rng);

  fs::create_directories(out);
  write(out / "meta.tsv", "name\tdel.icio.us (table-shaped)\n");
  std::string body;
  body.reserve(40u << 20);
  for (std::size_t r = 0; r < t.slots.size(); ++r) {
    std::string url = numbered("bookmark%07llu", bookmark[r]);
    for (auto d : t.slots[r]) body += url + "\t" + label[d] + "\n";
  }
  write(out / "assignments.tsv", body);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: make_fixtures <tables-dir> <out-dir>\n";
    return 2;
  }
  try {
    fs::path in(argv[1]), out(argv[2]);
    make_wikipedia(in, out / "wikipedia");
    make_ddc(in, out / "ddc");
    make_delicious(in, out / "delicious");
    write(out / "stamp", "ok\n");
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
