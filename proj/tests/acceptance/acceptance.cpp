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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. argv[1] is the subjidx binary.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "subjidx/subjidx.hpp"
#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;
using subjidx::testing::fixture;
using subjidx::testing::generated;
using subjidx::testing::scratch;
using subjidx::testing::slurp;

std::string g_cli;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    expect(std::abs(got - want) <= tol, what + "=" + subjidx::text::format_sig(got, 6) + " want " +
                                            subjidx::text::format_sig(want, 6) + "±" +
                                            subjidx::text::format_sig(tol, 3));
  }
};

struct Proc {
  int code = -1;
  std::string out;
};

Proc cli(const std::vector<std::string>& args) {
  std::string cmd = "'" + g_cli + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " 2>&1";
  Proc p;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return p;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, f)) p.out.append(buf, n);
  int status = pclose(f);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

/// key<TAB>value output of `subjidx fit`.
std::map<std::string, double> fit(const fs::path& table, const std::string& family) {
  Proc p = cli({"fit", table.string(), "--family", family});
  std::map<std::string, double> kv;
  std::istringstream in(p.out);
  for (std::string line; std::getline(in, line);) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    char* end = nullptr;
    double v = std::strtod(line.c_str() + tab + 1, &end);
    if (end != line.c_str() + tab + 1) kv[line.substr(0, tab)] = v;
  }
  kv["exit"] = p.code;
  return kv;
}

// Independent oracle: textbook least squares, separate from the library.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double oracle_exponential(const fs::path& table, std::uint64_t lo, std::uint64_t hi) {
  std::vector<double> x, y;
  for (auto [k, c] : subjidx::testing::table(table)) {
    if (k < lo || k > hi || c == 0) continue;
    x.push_back(static_cast<double>(k));
    y.push_back(std::log(static_cast<double>(c)));
  }
  return -ols_slope(x, y);
}

double oracle_rank_power(const fs::path& table, std::size_t k) {
  std::vector<double> x, y;
  for (auto [r, c] : subjidx::testing::table(table)) {
    if (r > k || c == 0) continue;
    x.push_back(std::log(static_cast<double>(r)));
    y.push_back(std::log(static_cast<double>(c)));
  }
  return -ols_slope(x, y);
}

std::pair<double, double> oracle_normal(const fs::path& table) {
  double n = 0, s = 0, ss = 0;
  for (auto [l, c] : subjidx::testing::table(table)) {
    if (l == 0) continue;
    n += static_cast<double>(c);
    s += static_cast<double>(l * c);
    ss += static_cast<double>(l * l * c);
  }
  double mean = s / n;
  return {mean, std::sqrt(ss / n - mean * mean)};
}

// Fit output is printed to 4 significant digits.
constexpr double kPrinted = 5e-4;

Check ac1() {
  Check c;
  struct Case { const char* table; double want, published; };
  for (Case k : {Case{"tags_wikipedia.tsv", 0.57, 0.6}, Case{"tags_delicious.tsv", 0.51, 0.5}}) {
    fs::path t = fixture(std::string("tables/") + k.table);
    auto f = fit(t, "exponential");
    c.expect(f["exit"] == 0, std::string(k.table) + " exit");
    double lambda = f["lambda"];
    c.near(lambda, oracle_exponential(t, 1, 9), kPrinted, std::string(k.table) + " vs oracle");
    c.near(lambda, k.want, 0.02, k.table);
    c.near(lambda, k.published, 0.1, std::string(k.table) + " vs published");
  }
  auto w = fit(fixture("tables/tags_wikipedia.tsv"), "exponential");
  auto d = fit(fixture("tables/tags_delicious.tsv"), "exponential");
  if (c.ok) {
    c.detail = "lambda wikipedia=" + subjidx::text::format_sig(w["lambda"]) +
               " delicious=" + subjidx::text::format_sig(d["lambda"]);
  }
  return c;
}

Check ac2() {
  Check c;
  fs::path t = fixture("tables/broader_wikipedia.tsv");
  auto f = fit(t, "exponential");
  c.expect(f["exit"] == 0, "exit");
  c.near(f["lambda"], oracle_exponential(t, 1, 9), kPrinted, "vs oracle");
  c.near(f["lambda"], 0.38, 0.02, "lambda");
  c.near(f["lambda"], 0.4, 0.05, "vs published");
  if (c.ok) c.detail = "lambda=" + subjidx::text::format_sig(f["lambda"]);
  return c;
}

Check ac3() {
  Check c;
  std::string summary;
  struct Case { const char* system; double published; };
  for (Case k : {Case{"flickr", 0.35}, Case{"wikipedia", 0.96}, Case{"ddc", 0.94},
                 Case{"delicious", 0.46}, Case{"millionsofgames", 0.59}}) {
    fs::path t = fixture(std::string("tables/popular_") + k.system + ".tsv");
    auto f = fit(t, "powerlaw");
    c.expect(f["exit"] == 0, std::string(k.system) + " exit");
    c.near(f["exponent"], oracle_rank_power(t, 25), kPrinted, std::string(k.system) + " vs oracle");
    c.near(f["exponent"], k.published, 0.08, k.system);
    summary += std::string(summary.empty() ? "" : " ") + k.system + "=" +
               subjidx::text::format_sig(f["exponent"]);
  }
  if (c.ok) c.detail = summary;
  return c;
}

Check ac4() {
  Check c;
  struct Case { const char* table; double mean, sigma; };
  std::string summary;
  for (Case k : {Case{"levels_ddc.tsv", 5.70, 1.36}, Case{"levels_wikipedia.tsv", 5.40, 1.27}}) {
    fs::path t = fixture(std::string("tables/") + k.table);
    auto f = fit(t, "normal");
    auto [om, os] = oracle_normal(t);
    c.expect(f["exit"] == 0, std::string(k.table) + " exit");
    c.near(f["mean"], om, kPrinted * 10, std::string(k.table) + " mean vs oracle");
    c.near(f["sigma"], os, kPrinted, std::string(k.table) + " sigma vs oracle");
    c.near(f["mean"], k.mean, 0.02, std::string(k.table) + " mean");
    c.near(f["sigma"], k.sigma, 0.02, std::string(k.table) + " sigma");
    summary += std::string(summary.empty() ? "" : " ") + k.table + " " +
               subjidx::text::format_sig(f["mean"]) + "/" + subjidx::text::format_sig(f["sigma"]);
  }
  if (c.ok) c.detail = summary;
  return c;
}

Check ac5() {
  Check c;
  fs::path out = scratch("acceptance-ac5");
  Proc p = cli({"analyze", generated("wikipedia").string(), "-o", out.string()});
  c.expect(p.code == 0, "analyze exit " + std::to_string(p.code));
  std::string report = slurp(out / "report.txt");
  const int want[] = {30, 30, 15, 8, 5, 2, 1, 1, 0};
  std::map<int, int> got;
  std::istringstream in(report.substr(std::min(report.size(), report.find("== descriptors per record =="))));
  for (std::string line; std::getline(in, line);) {
    int n = 0, pct = 0;
    unsigned long long count = 0;
    if (std::sscanf(line.c_str(), "%d\t%llu\t%d%%", &n, &count, &pct) == 3) got.emplace(n, pct);
    if (line.rfind("Sum", 0) == 0) break;
  }
  for (int n = 1; n <= 9; ++n) {
    c.expect(got.count(n) && got[n] == want[n - 1], "n=" + std::to_string(n) + " percent");
  }
  c.expect(report.find("Sum\t916670 of 923196\t") != std::string::npos, "sum line");
  if (c.ok) c.detail = "percent column 30 30 15 8 5 2 1 1 0, Sum 916670 of 923196";
  return c;
}

Check ac6() {
  Check c;
  struct Case { fs::path bundle; const char* kind; };
  std::string summary;
  for (const Case& k : {Case{generated("ddc"), "Classification"}, Case{generated("delicious"), "FlatTagging"},
                        Case{fixture("wikipedia-sample"), "Thesaurus"}, Case{fixture("ddc-sample"), "Classification"},
                        Case{fixture("tagging-sample"), "FlatTagging"}}) {
    fs::path out = scratch("acceptance-ac6-" + k.bundle.filename().string());
    Proc p = cli({"analyze", k.bundle.string(), "-o", out.string()});
    c.expect(p.code == 0, k.bundle.filename().string() + " exit");
    c.expect(p.out.find(std::string("kind\t") + k.kind + "\n") != std::string::npos,
             k.bundle.filename().string() + " not " + k.kind);
    summary += std::string(summary.empty() ? "" : " ") + k.bundle.filename().string() + "=" + k.kind;
  }
  // The Moon chain forces poly-hierarchy.
  auto b = subjidx::ingest::load_bundle(fixture("wikipedia-sample"));
  c.expect(b.system.broader_of(b.system.descriptor_id("Moon")).size() == 2, "Moon has two broader terms");
  if (c.ok) c.detail = summary;
  return c;
}

Check ac7() {
  Check c;
  std::mt19937_64 gen(20060107);
  int compared = 0;
  for (int g = 0; g < 100; ++g) {
    const std::size_t n = 2 + gen() % 199;
    const double density = 1.5 / static_cast<double>(n) + static_cast<double>(gen() % 100) / 2000.0;
    std::bernoulli_distribution edge(std::min(density, 1.0));
    subjidx::SystemBuilder b("dag");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "n%03zu", i);
      names.emplace_back(buf);
      b.declare_descriptor(names.back());
    }
    const std::size_t tops = 1 + gen() % 3;
    for (std::size_t i = 0; i < tops; ++i) b.add_top(names[i]);
    std::vector<std::vector<std::size_t>> parents(n);
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (edge(gen)) {
          b.add_broader(names[i], names[j]);
          parents[i].push_back(j);
        }
      }
    }
    subjidx::IndexingSystem s = b.build();
    subjidx::LevelMap lv = subjidx::levels(s);
    // Brute force: Bellman-Ford style relaxation with unit weights.
    constexpr std::uint64_t kInf = ~0ULL;
    std::vector<std::uint64_t> dist(n, kInf);
    for (std::size_t i = 0; i < tops; ++i) dist[i] = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p : parents[i]) {
          if (dist[p] != kInf && dist[p] + 1 < dist[i]) {
            dist[i] = dist[p] + 1;
            changed = true;
          }
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto id = s.descriptor_id(names[i]);
      bool unreachable = dist[i] == kInf;
      if (unreachable != static_cast<bool>(lv.unreachable[id.value]) ||
          (!unreachable && dist[i] != lv[id])) {
        c.expect(false, "graph " + std::to_string(g) + " node " + names[i]);
        return c;
      }
      ++compared;
    }
  }
  if (c.ok) c.detail = "100 DAGs, " + std::to_string(compared) + " descriptors match";
  return c;
}

Check ac8() {
  Check c;
  std::mt19937_64 gen(20060108);
  for (int t = 0; t < 50; ++t) {
    subjidx::metrics::Histogram h;
    const int lo = static_cast<int>(gen() % 4), width = 1 + static_cast<int>(gen() % 12);
    for (int k = lo; k < lo + width; ++k) h.add(static_cast<std::uint64_t>(k), gen() % 50);
    if (h.total == 0) h.add(static_cast<std::uint64_t>(lo), 3);
    const double mean = lo + static_cast<double>(gen() % 100) / 10.0;
    const double sigma = 0.3 + static_cast<double>(gen() % 40) / 10.0;
    auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mean) / (sigma * std::sqrt(2.0))); };
    // Brute force: every bin boundary where the empirical step function moves.
    double sup = 0;
    double cum = 0;
    bool first = true;
    for (auto [k, cnt] : h.bins) {
      double x = static_cast<double>(k);
      if (first) sup = std::max(sup, std::abs(0.0 - cdf(x - 0.5)));
      first = false;
      cum += static_cast<double>(cnt);
      sup = std::max(sup, std::abs(cum / static_cast<double>(h.total) - cdf(x + 0.5)));
    }
    auto r = subjidx::distfit::ks_test(h, mean, sigma);
    if (r.statistic != sup) {
      c.expect(false, "sample " + std::to_string(t) + " D=" + subjidx::text::format_sig(r.statistic, 17) +
                          " brute=" + subjidx::text::format_sig(sup, 17));
    }
  }
  subjidx::metrics::Histogram point;
  point.add(4, 10);
  auto exact = subjidx::distfit::ks_test(point, 4.0, 1e-6);
  c.expect(exact.statistic == 0.0 && exact.p == 1.0, "p != 1 for a matching model");
  if (c.ok) c.detail = "50 samples exact; D=0 gives p=1";
  return c;
}

Check ac9() {
  Check c;
  const double tags = 0.6, pop = 1.0, bt = 0.4;
  fs::path dir = scratch("acceptance-ac9");
  Proc s = cli({"synth", "-o", (dir / "bundle").string(), "--seed", "20060109", "--records", "50000",
                "--vocab", "12000", "--tags-lambda", "0.6", "--popularity", "1.0", "--hierarchy", "dag:0.4"});
  c.expect(s.code == 0, "synth exit " + std::to_string(s.code) + " " + s.out);
  Proc a = cli({"analyze", (dir / "bundle").string(), "-o", (dir / "out").string()});
  c.expect(a.code == 0, "analyze exit " + std::to_string(a.code));
  if (!c.ok) return c;
  auto j = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  double got_tags = j["fits"]["tags_exponential"]["lambda"].get<double>();
  double got_pop = j["fits"]["popularity_powerlaw"]["exponent"].get<double>();
  double got_bt = j["fits"]["broader_exponential"]["lambda"].get<double>();
  c.near(got_tags, tags, 0.1 * tags, "tags lambda");
  c.near(got_pop, pop, 0.1 * pop, "popularity exponent");
  c.near(got_bt, bt, 0.1 * bt, "broader lambda");
  c.expect(j["counts"]["descriptors"].get<std::uint64_t>() >= 10000, "vocab below 10k");
  if (c.ok) {
    c.detail = "tags=" + subjidx::text::format_sig(got_tags) + " popularity=" + subjidx::text::format_sig(got_pop) +
               " broader=" + subjidx::text::format_sig(got_bt);
  }
  return c;
}

Check ac10() {
  Check c;
  std::vector<fs::path> bundles = {fixture("wikipedia-sample"), fixture("ddc-sample"), fixture("tagging-sample"),
                                   generated("ddc")};
  for (const auto& b : bundles) {
    const std::string name = b.filename().string();
    fs::path one = scratch("acceptance-ac10-" + name + "-1"), two = scratch("acceptance-ac10-" + name + "-2");
    c.expect(cli({"analyze", b.string(), "-o", one.string()}).code == 0, name + " first run");
    c.expect(cli({"analyze", b.string(), "-o", two.string()}).code == 0, name + " second run");
    for (const char* f : {"report.txt", "report.json", "report.csv", "validation.txt"}) {
      c.expect(slurp(one / f) == slurp(two / f), name + " " + f + " differs");
    }
    for (const auto& e : fs::directory_iterator(one / "plots")) {
      c.expect(slurp(e.path()) == slurp(two / "plots" / e.path().filename()), name + " plot differs");
    }
    fs::path exported = scratch("acceptance-ac10-" + name + "-export");
    c.expect(cli({"export", b.string(), "-o", exported.string()}).code == 0, name + " export");
    fs::path three = scratch("acceptance-ac10-" + name + "-3");
    c.expect(cli({"analyze", exported.string(), "-o", three.string()}).code == 0, name + " re-analyze");
    auto before = nlohmann::json::parse(slurp(one / "report.json"));
    auto after = nlohmann::json::parse(slurp(three / "report.json"));
    c.expect(before["counts"] == after["counts"], name + " counts changed");
    c.expect(before["validation"] == after["validation"], name + " validation changed");
    c.expect(before["fits"] == after["fits"], name + " fits changed");
  }
  if (c.ok) c.detail = std::to_string(bundles.size()) + " bundles byte-identical; export round trip preserves counts";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <subjidx-binary>\n");
    return 2;
  }
  g_cli = argv[1];
  const std::vector<std::pair<const char*, std::function<Check()>>> checks = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    if (!c.ok) ++failed;
    std::printf("%s %s %s\n", name, c.ok ? "PASS" : "FAIL", c.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
