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

#ifndef SUBJIDX_TYPOLOGY_HPP_
#define SUBJIDX_TYPOLOGY_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "subjidx/distfit.hpp"
#include "subjidx/error.hpp"
#include "subjidx/metrics.hpp"
#include "subjidx/model.hpp"
#include "subjidx/text.hpp"

namespace subjidx::typology {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Kind { kClassification, kFlatTagging, kThesaurus };

constexpr std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::kClassification: return "Classification";
    case Kind::kFlatTagging: return "FlatTagging";
    case Kind::kThesaurus: return "Thesaurus";
  }
  return "?";
}

inline Kind kind_from_string(std::string_view s) {
  if (s == "Classification") return Kind::kClassification;
  if (s == "FlatTagging") return Kind::kFlatTagging;
  if (s == "Thesaurus") return Kind::kThesaurus;
  throw Error(ErrorCode::kMalformedLine, "unknown system kind '" + std::string(s) + "'");
}

struct SystemKind {
  Kind kind = Kind::kFlatTagging;
  bool has_hierarchy = false;
  bool single_parent_everywhere = true;
  bool acyclic = true;
  bool is_forest = true;

  friend bool operator==(const SystemKind&, const SystemKind&) = default;
};

/// Structural verdict: no BT edges -> FlatTagging; at most one broader term
/// per descriptor and an acyclic BT graph -> Classification; else Thesaurus.
inline SystemKind classify(const IndexingSystem& sys) {
  if (sys.descriptor_count() == 0) throw Error(ErrorCode::kEmptySystem, "no descriptors");
  SystemKind k;
  k.has_hierarchy = sys.bt_edge_count() > 0;
  for (std::uint32_t i = 0; i < sys.descriptor_count(); ++i) {
    if (sys.broader_of(DescriptorId{i}).size() > 1) {
      k.single_parent_everywhere = false;
      break;
    }
  }
  k.acyclic = bt_cycle_members(sys).empty();
  k.is_forest = k.single_parent_everywhere && k.acyclic;
  if (!k.has_hierarchy) {
    k.kind = Kind::kFlatTagging;
  } else if (k.is_forest) {
    k.kind = Kind::kClassification;
  } else {
    k.kind = Kind::kThesaurus;
  }
  return k;
}

// ---------------------------------------------------------------------------
// Report

struct ReportOptions {
  std::vector<std::string> top_terms;  // echoed; tops are applied at load time
  bool virtual_root = false;           // echoed
  bool main_namespace_only = false;    // echoed; applied at load time
  bool resolve_use = false;
  bool exclude_level0 = true;
  std::uint64_t tags_nmin = 1;
  std::uint64_t tags_nmax = 9;
  std::uint64_t tail_nmin = 10;
  std::uint64_t tail_floor = 5;
  std::size_t rank_k = 25;
  std::uint64_t bt_nmin = 1;
  std::uint64_t bt_nmax = 9;
  std::size_t cooccurrence_m = 10;

  std::map<std::string, std::string> echo() const {
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    std::string tops;
    for (const auto& t : top_terms) tops += (tops.empty() ? "" : "|") + t;
    return {{"bt_range", std::to_string(bt_nmin) + ":" + std::to_string(bt_nmax)},
            {"cooccurrence_m", std::to_string(cooccurrence_m)},
            {"exclude_level0", b(exclude_level0)},
            {"main_namespace_only", b(main_namespace_only)},
            {"rank_k", std::to_string(rank_k)},
            {"resolve_use", b(resolve_use)},
            {"tags_range", std::to_string(tags_nmin) + ":" + std::to_string(tags_nmax)},
            {"tail_floor", std::to_string(tail_floor)},
            {"tail_min", std::to_string(tail_nmin)},
            {"top_terms", tops.empty() ? "(system default)" : tops},
            {"virtual_root", b(virtual_root)}};
  }
};

struct StructureCounts {
  std::uint64_t descriptors = 0;
  std::uint64_t records = 0;
  std::uint64_t assignments = 0;
  std::uint64_t bt_edges = 0;
  std::uint64_t rt_pairs = 0;
  std::uint64_t use_links = 0;
  std::uint64_t categorized_records = 0;
  std::optional<double> coverage_ratio;
  std::optional<double> relations_per_descriptor;

  friend bool operator==(const StructureCounts&, const StructureCounts&) = default;
};

struct SystemReport {
  std::string tool_version{kToolVersion};
  std::string system_name;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> input_digests;
  StructureCounts counts;
  ValidationReport validation;
  SystemKind kind;
  std::vector<std::string> top_terms;

  std::optional<metrics::Histogram> tags_per_record;
  std::optional<metrics::RankTable> records_per_tag;
  std::optional<metrics::Histogram> tag_sizes;
  std::uint64_t unused_descriptors = 0;
  std::optional<metrics::Histogram> broader_terms;
  std::optional<metrics::LevelHistogram> levels;
  std::vector<metrics::Cooccurrence> cooccurrence;

  std::optional<distfit::ExponentialFit> tags_fit;
  std::optional<distfit::PowerLawFit> tags_tail_fit;
  std::optional<distfit::PowerLawFit> popularity_fit;
  std::optional<distfit::ExponentialFit> broader_fit;
  std::optional<distfit::NormalFit> level_fit;
  std::map<std::string, std::string> fit_notes;  // fit name -> why it is absent
};

namespace detail {

inline double r4(double v) { return text::round_sig(v, 4); }

inline distfit::ExponentialFit rounded(distfit::ExponentialFit f) {
  f.lambda = r4(f.lambda);
  f.intercept = r4(f.intercept);
  f.r_squared = r4(f.r_squared);
  return f;
}
inline distfit::PowerLawFit rounded(distfit::PowerLawFit f) {
  f.exponent = r4(f.exponent);
  f.intercept = r4(f.intercept);
  f.r_squared = r4(f.r_squared);
  return f;
}
inline distfit::NormalFit rounded(distfit::NormalFit f) {
  f.mean = r4(f.mean);
  f.sigma = r4(f.sigma);
  f.ks_statistic = r4(f.ks_statistic);
  f.ks_p = r4(f.ks_p);
  return f;
}

template <class Fit, class Fn>
void try_fit(std::optional<Fit>& slot, std::map<std::string, std::string>& notes,
             const std::string& name, Fn&& fn) {
  try {
    slot = rounded(fn());
  } catch (const Error& e) {
    notes[name] = e.what();
  }
}

template <class T, class Fn>
void try_metric(std::optional<T>& slot, std::map<std::string, std::string>& notes,
                const std::string& name, Fn&& fn) {
  try {
    slot = fn();
  } catch (const Error& e) {
    notes[name] = e.what();
  }
}

}  // namespace detail

/// Runs every metric and fit; anything not computable is recorded in
/// `fit_notes` rather than failing the report. Parameters are rounded to
/// four significant digits.
inline SystemReport build_report(const IndexingSystem& sys, const ValidationReport& validation,
                                 const ReportOptions& opts = {},
                                 const std::map<std::string, std::string>& digests = {}) {
  SystemReport r;
  r.system_name = sys.name();
  r.config = opts.echo();
  r.input_digests = digests;
  r.validation = validation;

  auto& c = r.counts;
  c.descriptors = sys.descriptor_count();
  c.records = sys.record_count();
  c.assignments = sys.assignment_count();
  c.bt_edges = sys.bt_edge_count();
  c.rt_pairs = sys.rt_pair_count();
  c.use_links = sys.use_link_count();
  metrics::Coverage cov = metrics::coverage(sys);
  c.categorized_records = cov.categorized;
  if (cov.ratio) c.coverage_ratio = detail::r4(*cov.ratio);
  if (sys.descriptor_count() > 0) {
    c.relations_per_descriptor = detail::r4(relations_per_descriptor(sys).value());
  }

  std::vector<DescriptorId> tops(sys.top_terms().begin(), sys.top_terms().end());
  for (DescriptorId t : tops) {
    if (sys.contains(t)) r.top_terms.push_back(sys.descriptor(t).label);
  }

  auto& notes = r.fit_notes;
  metrics::MetricOptions mo{opts.resolve_use};
  if (sys.descriptor_count() > 0) {
    r.kind = classify(sys);
    r.broader_terms = metrics::broader_terms_per_term(sys);
    if (!tops.empty()) {
      detail::try_metric(r.levels, notes, "levels",
                         [&] { return metrics::level_histogram(sys, tops); });
    } else {
      notes["levels"] = "no top terms";
    }
  } else {
    notes["typology"] = "EmptySystem: no descriptors";
  }
  detail::try_metric(r.tags_per_record, notes, "tags_per_record",
                     [&] { return metrics::tags_per_record(sys, mo); });
  if (sys.assignment_count() > 0) {
    r.records_per_tag = metrics::records_per_tag(sys, opts.rank_k, mo);
    auto sizes = metrics::tag_size_histogram(sys, mo);
    r.tag_sizes = sizes.hist;
    r.unused_descriptors = sizes.unused_descriptors;
    r.cooccurrence = metrics::cooccurrence_top(sys, opts.cooccurrence_m, mo);
  } else {
    notes["records_per_tag"] = "EmptySystem: no assignments";
  }

  if (r.tags_per_record) {
    detail::try_fit(r.tags_fit, notes, "tags_exponential", [&] {
      return distfit::fit_exponential(*r.tags_per_record, opts.tags_nmin, opts.tags_nmax);
    });
    detail::try_fit(r.tags_tail_fit, notes, "tags_tail", [&] {
      return distfit::fit_power_law_tail(*r.tags_per_record, opts.tail_nmin, opts.tail_floor);
    });
  }
  if (r.records_per_tag) {
    detail::try_fit(r.popularity_fit, notes, "popularity_powerlaw", [&] {
      return distfit::fit_power_law_ranks(*r.records_per_tag, opts.rank_k);
    });
  }
  if (r.broader_terms) {
    detail::try_fit(r.broader_fit, notes, "broader_exponential", [&] {
      return distfit::fit_exponential(*r.broader_terms, opts.bt_nmin, opts.bt_nmax);
    });
  }
  if (r.levels) {
    detail::try_fit(r.level_fit, notes, "levels_normal",
                    [&] { return distfit::fit_normal(*r.levels, opts.exclude_level0); });
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using nlohmann::json;

inline json hist_json(const metrics::Histogram& h) {
  json bins = json::array();
  for (auto [k, c] : h.bins) bins.push_back({k, c});
  return {{"bins", bins}, {"total", h.total}};
}

inline metrics::Histogram hist_from(const json& j) {
  metrics::Histogram h;
  for (const auto& b : j.at("bins")) h.add(b.at(0).get<std::uint64_t>(), b.at(1).get<std::uint64_t>());
  if (h.total != j.at("total").get<std::uint64_t>()) {
    throw Error(ErrorCode::kMalformedLine, "histogram total does not match its bins");
  }
  return h;
}

inline json exp_json(const distfit::ExponentialFit& f) {
  return {{"lambda", f.lambda},       {"intercept", f.intercept}, {"r_squared", f.r_squared},
          {"nmin", f.nmin},           {"nmax", f.nmax},           {"bins_used", f.bins_used},
          {"zero_bins_skipped", f.zero_bins_skipped}};
}
inline distfit::ExponentialFit exp_from(const json& j) {
  distfit::ExponentialFit f;
  f.lambda = j.at("lambda");
  f.intercept = j.at("intercept");
  f.r_squared = j.at("r_squared");
  f.nmin = j.at("nmin");
  f.nmax = j.at("nmax");
  f.bins_used = j.at("bins_used");
  f.zero_bins_skipped = j.at("zero_bins_skipped");
  return f;
}

inline json pow_json(const distfit::PowerLawFit& f) {
  return {{"exponent", f.exponent}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
          {"lo", f.lo},             {"hi", f.hi},               {"bins_used", f.bins_used}};
}
inline distfit::PowerLawFit pow_from(const json& j) {
  distfit::PowerLawFit f;
  f.exponent = j.at("exponent");
  f.intercept = j.at("intercept");
  f.r_squared = j.at("r_squared");
  f.lo = j.at("lo");
  f.hi = j.at("hi");
  f.bins_used = j.at("bins_used");
  return f;
}

inline json normal_json(const distfit::NormalFit& f) {
  return {{"mean", f.mean},
          {"sigma", f.sigma},
          {"n", f.n},
          {"ks_statistic", f.ks_statistic},
          {"ks_p", f.ks_p},
          {"excluded_level0", f.excluded_level0},
          {"ks_caveat", "asymptotic Kolmogorov p with fitted parameters (Lilliefors setting)"}};
}
inline distfit::NormalFit normal_from(const json& j) {
  distfit::NormalFit f;
  f.mean = j.at("mean");
  f.sigma = j.at("sigma");
  f.n = j.at("n");
  f.ks_statistic = j.at("ks_statistic");
  f.ks_p = j.at("ks_p");
  f.excluded_level0 = j.at("excluded_level0");
  return f;
}

template <class T, class F>
json opt_json(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : json(nullptr);
}

template <class T, class F>
std::optional<T> opt_from(const json& j, const char* key, F&& f) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return f(j.at(key));
}

inline json double_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
inline std::optional<double> double_from(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

}  // namespace detail

inline nlohmann::json to_json(const SystemReport& r) {
  using detail::json;
  json j;
  j["tool_version"] = r.tool_version;
  j["system_name"] = r.system_name;
  j["config"] = r.config;
  j["input_digests"] = r.input_digests;
  const auto& c = r.counts;
  j["counts"] = {{"descriptors", c.descriptors},
                 {"records", c.records},
                 {"assignments", c.assignments},
                 {"bt_edges", c.bt_edges},
                 {"rt_pairs", c.rt_pairs},
                 {"use_links", c.use_links},
                 {"categorized_records", c.categorized_records},
                 {"coverage_ratio", detail::double_or_null(c.coverage_ratio)},
                 {"relations_per_descriptor", detail::double_or_null(c.relations_per_descriptor)}};
  const auto& v = r.validation;
  j["validation"] = {{"dangling_reference_count", v.dangling_reference_count},
                     {"bt_cycle_descriptor_count", v.bt_cycle_descriptor_count},
                     {"unreachable_descriptor_count", v.unreachable_descriptor_count},
                     {"uncategorized_record_count", v.uncategorized_record_count}};
  j["kind"] = {{"kind", std::string(to_string(r.kind.kind))},
               {"has_hierarchy", r.kind.has_hierarchy},
               {"single_parent_everywhere", r.kind.single_parent_everywhere},
               {"acyclic", r.kind.acyclic},
               {"is_forest", r.kind.is_forest}};
  j["top_terms"] = r.top_terms;
  j["tags_per_record"] = detail::opt_json(r.tags_per_record, detail::hist_json);
  j["records_per_tag"] = detail::opt_json(r.records_per_tag, [](const metrics::RankTable& t) {
    json entries = json::array();
    for (const auto& e : t.entries) entries.push_back({{"label", e.label}, {"count", e.count}});
    return json{{"entries", entries},
                {"truncation", t.truncation ? json(*t.truncation) : json(nullptr)},
                {"used_descriptors", t.used_descriptors},
                {"unused_descriptors", t.unused_descriptors}};
  });
  j["tag_sizes"] = detail::opt_json(r.tag_sizes, detail::hist_json);
  j["unused_descriptors"] = r.unused_descriptors;
  j["broader_terms"] = detail::opt_json(r.broader_terms, detail::hist_json);
  j["levels"] = detail::opt_json(r.levels, [](const metrics::LevelHistogram& l) {
    json h = detail::hist_json(l.hist);
    h["unreachable_in_level0"] = l.unreachable_in_level0;
    return h;
  });
  json co = json::array();
  for (const auto& p : r.cooccurrence) {
    co.push_back({{"first", p.first_label}, {"second", p.second_label}, {"count", p.count}});
  }
  j["cooccurrence"] = co;
  j["fits"] = {{"tags_exponential", detail::opt_json(r.tags_fit, detail::exp_json)},
               {"tags_tail", detail::opt_json(r.tags_tail_fit, detail::pow_json)},
               {"popularity_powerlaw", detail::opt_json(r.popularity_fit, detail::pow_json)},
               {"broader_exponential", detail::opt_json(r.broader_fit, detail::exp_json)},
               {"levels_normal", detail::opt_json(r.level_fit, detail::normal_json)}};
  j["fit_notes"] = r.fit_notes;
  return j;
}

/// Inverse of `to_json`. Descriptor ids are not serialized; rank entries and
/// co-occurrence pairs come back with default ids.
inline SystemReport from_json(const nlohmann::json& j) {
  using detail::json;
  SystemReport r;
  r.tool_version = j.at("tool_version");
  r.system_name = j.at("system_name");
  r.config = j.at("config").get<std::map<std::string, std::string>>();
  r.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
  const json& c = j.at("counts");
  r.counts.descriptors = c.at("descriptors");
  r.counts.records = c.at("records");
  r.counts.assignments = c.at("assignments");
  r.counts.bt_edges = c.at("bt_edges");
  r.counts.rt_pairs = c.at("rt_pairs");
  r.counts.use_links = c.at("use_links");
  r.counts.categorized_records = c.at("categorized_records");
  r.counts.coverage_ratio = detail::double_from(c.at("coverage_ratio"));
  r.counts.relations_per_descriptor = detail::double_from(c.at("relations_per_descriptor"));
  const json& v = j.at("validation");
  r.validation.dangling_reference_count = v.at("dangling_reference_count");
  r.validation.bt_cycle_descriptor_count = v.at("bt_cycle_descriptor_count");
  r.validation.unreachable_descriptor_count = v.at("unreachable_descriptor_count");
  r.validation.uncategorized_record_count = v.at("uncategorized_record_count");
  const json& k = j.at("kind");
  r.kind.kind = kind_from_string(k.at("kind").get<std::string>());
  r.kind.has_hierarchy = k.at("has_hierarchy");
  r.kind.single_parent_everywhere = k.at("single_parent_everywhere");
  r.kind.acyclic = k.at("acyclic");
  r.kind.is_forest = k.at("is_forest");
  r.top_terms = j.at("top_terms").get<std::vector<std::string>>();
  r.tags_per_record = detail::opt_from<metrics::Histogram>(j, "tags_per_record", detail::hist_from);
  r.records_per_tag =
      detail::opt_from<metrics::RankTable>(j, "records_per_tag", [](const json& t) {
        metrics::RankTable out;
        for (const auto& e : t.at("entries")) {
          out.entries.push_back({DescriptorId{}, e.at("label"), e.at("count")});
        }
        if (!t.at("truncation").is_null()) out.truncation = t.at("truncation").get<std::size_t>();
        out.used_descriptors = t.at("used_descriptors");
        out.unused_descriptors = t.at("unused_descriptors");
        return out;
      });
  r.tag_sizes = detail::opt_from<metrics::Histogram>(j, "tag_sizes", detail::hist_from);
  r.unused_descriptors = j.at("unused_descriptors");
  r.broader_terms = detail::opt_from<metrics::Histogram>(j, "broader_terms", detail::hist_from);
  r.levels = detail::opt_from<metrics::LevelHistogram>(j, "levels", [](const json& l) {
    return metrics::LevelHistogram{detail::hist_from(l), l.at("unreachable_in_level0")};
  });
  for (const auto& p : j.at("cooccurrence")) {
    r.cooccurrence.push_back({DescriptorId{}, DescriptorId{}, p.at("first"), p.at("second"),
                              p.at("count")});
  }
  const json& f = j.at("fits");
  r.tags_fit = detail::opt_from<distfit::ExponentialFit>(f, "tags_exponential", detail::exp_from);
  r.tags_tail_fit = detail::opt_from<distfit::PowerLawFit>(f, "tags_tail", detail::pow_from);
  r.popularity_fit =
      detail::opt_from<distfit::PowerLawFit>(f, "popularity_powerlaw", detail::pow_from);
  r.broader_fit =
      detail::opt_from<distfit::ExponentialFit>(f, "broader_exponential", detail::exp_from);
  r.level_fit = detail::opt_from<distfit::NormalFit>(f, "levels_normal", detail::normal_from);
  r.fit_notes = j.at("fit_notes").get<std::map<std::string, std::string>>();
  return r;
}

/// Re-serializes both sides; ids are not part of the wire format.
inline bool same_report(const SystemReport& a, const SystemReport& b) {
  return to_json(a) == to_json(b);
}

// ---------------------------------------------------------------------------
// Rendering

enum class Format { kText, kJson, kCsv };

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string yes(bool v) { return v ? "true" : "false"; }

inline std::string pct(std::uint64_t part, std::uint64_t whole) {
  return whole == 0 ? "-" : std::to_string(text::percent_half_up(part, whole)) + "%";
}

inline void render_exp(std::ostream& o, const char* what, const std::optional<distfit::ExponentialFit>& f,
                       const std::map<std::string, std::string>& notes, const std::string& key) {
  if (f) {
    o << "fit " << what << " exponential [" << f->nmin << "," << f->nmax
      << "]: lambda=" << text::format_sig(f->lambda) << " intercept=" << text::format_sig(f->intercept)
      << " r2=" << text::format_sig(f->r_squared) << " bins=" << f->bins_used
      << " zero_bins_skipped=" << f->zero_bins_skipped << "\n";
  } else if (auto it = notes.find(key); it != notes.end()) {
    o << "fit " << what << " exponential: unavailable (" << it->second << ")\n";
  }
}

inline void render_pow(std::ostream& o, const char* what, const std::optional<distfit::PowerLawFit>& f,
                       const std::map<std::string, std::string>& notes, const std::string& key) {
  if (f) {
    o << "fit " << what << " power law [" << f->lo << "," << f->hi
      << "]: exponent=" << text::format_sig(f->exponent)
      << " intercept=" << text::format_sig(f->intercept) << " r2=" << text::format_sig(f->r_squared)
      << " bins=" << f->bins_used << "\n";
  } else if (auto it = notes.find(key); it != notes.end()) {
    o << "fit " << what << " power law: unavailable (" << it->second << ")\n";
  }
}

inline std::string render_text(const SystemReport& r) {
  std::ostringstream o;
  o << "subjidx report " << r.tool_version << "\n";
  o << "system: " << r.system_name << "\n";
  o << "kind: " << to_string(r.kind.kind) << "\n\n";

  o << "== configuration ==\n";
  for (const auto& [k, v] : r.config) o << k << "\t" << v << "\n";
  o << "\n== inputs ==\n";
  for (const auto& [k, v] : r.input_digests) o << k << "\tfnv1a64:" << v << "\n";

  const auto& c = r.counts;
  o << "\n== structure ==\n";
  o << "descriptors\t" << c.descriptors << "\n";
  o << "records\t" << c.records << "\n";
  o << "assignments\t" << c.assignments << "\n";
  o << "bt_edges\t" << c.bt_edges << "\n";
  o << "rt_pairs\t" << c.rt_pairs << "\n";
  o << "use_links\t" << c.use_links << "\n";
  o << "relations_per_descriptor\t"
    << (c.relations_per_descriptor ? text::format_sig(*c.relations_per_descriptor) : "undefined") << "\n";
  o << "coverage\t" << c.categorized_records << " of " << c.records << " records categorized ("
    << (c.coverage_ratio ? text::format_sig(*c.coverage_ratio * 100) + "%" : "undefined") << ")\n";
  o << "top_terms\t";
  for (std::size_t i = 0; i < r.top_terms.size(); ++i) o << (i ? " | " : "") << r.top_terms[i];
  o << "\n";

  const auto& v = r.validation;
  o << "\n== validation ==\n";
  o << "dangling_references\t" << v.dangling_reference_count << "\n";
  o << "bt_cycle_descriptors\t" << v.bt_cycle_descriptor_count << "\n";
  o << "unreachable_descriptors\t" << v.unreachable_descriptor_count << "\n";
  o << "uncategorized_records\t" << v.uncategorized_record_count << "\n";

  o << "\n== typology ==\n";
  o << "                        Classification         FlatTagging             Thesaurus\n";
  o << "tags per record         1 (more allowed)       exponential, pl tail    exponential, pl tail\n";
  o << "broader terms per term  1 (tree)               0 (no hierarchy)        distributed exponentially\n";
  o << "levels                  distributed normally   1 (no hierarchy)        distributed normally\n";
  o << "records per tag         power law              power law               power law\n";
  o << "verdict                 " << (r.kind.kind == Kind::kClassification ? "[x]" : "[ ]")
    << "                    " << (r.kind.kind == Kind::kFlatTagging ? "[x]" : "[ ]")
    << "                     " << (r.kind.kind == Kind::kThesaurus ? "[x]" : "[ ]") << "\n";
  o << "evidence: has_hierarchy=" << yes(r.kind.has_hierarchy)
    << " single_parent_everywhere=" << yes(r.kind.single_parent_everywhere)
    << " acyclic=" << yes(r.kind.acyclic) << " is_forest=" << yes(r.kind.is_forest) << "\n";

  if (r.tags_per_record) {
    const auto& h = *r.tags_per_record;
    const std::uint64_t nmax = r.tags_fit ? r.tags_fit->nmax : 9;
    o << "\n== descriptors per record ==\n";
    o << "n\trecords\tpercent\n";
    for (std::uint64_t n = 0; n <= nmax; ++n) {
      o << n << "\t" << h.count(n) << "\t" << pct(h.count(n), h.total) << "\n";
    }
    const std::uint64_t shown = h.sum_range(0, nmax);
    o << "Sum\t" << shown << " of " << h.total << "\t" << pct(shown, h.total) << "\n";
    o << "records with more than " << nmax << " descriptors\t" << h.total - shown << "\n";
    render_exp(o, "descriptors per record", r.tags_fit, r.fit_notes, "tags_exponential");
    render_pow(o, "descriptors per record tail", r.tags_tail_fit, r.fit_notes, "tags_tail");
  }

  if (r.records_per_tag) {
    const auto& t = *r.records_per_tag;
    o << "\n== records per descriptor";
    if (t.truncation) o << " (top " << *t.truncation << ")";
    o << " ==\nrank\tdescriptor\trecords\n";
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      o << i + 1 << "\t" << t.entries[i].label << "\t" << t.entries[i].count << "\n";
    }
    o << "used descriptors\t" << t.used_descriptors << "\n";
    o << "unused descriptors\t" << t.unused_descriptors << "\n";
    render_pow(o, "records per descriptor", r.popularity_fit, r.fit_notes, "popularity_powerlaw");
  }

  if (r.tag_sizes) {
    o << "\n== descriptor sizes ==\nrecords\tdescriptors\n";
    for (auto [k, n] : r.tag_sizes->bins) o << k << "\t" << n << "\n";
  }

  if (r.broader_terms) {
    o << "\n== broader terms per descriptor ==\nbroader\tdescriptors\n";
    for (auto [k, n] : r.broader_terms->bins) o << k << "\t" << n << "\n";
    render_exp(o, "broader terms", r.broader_fit, r.fit_notes, "broader_exponential");
  }

  if (r.levels) {
    o << "\n== descriptor levels ==\nlevel\tdescriptors\n";
    for (auto [k, n] : r.levels->hist.bins) o << k << "\t" << n << "\n";
    o << "unreachable (counted in level 0)\t" << r.levels->unreachable_in_level0 << "\n";
    if (r.level_fit) {
      const auto& f = *r.level_fit;
      o << "fit levels normal (" << (f.excluded_level0 ? "level 0 excluded" : "level 0 included")
        << "): mean=" << text::format_sig(f.mean) << " sigma=" << text::format_sig(f.sigma)
        << " n=" << f.n << " ks_D=" << text::format_sig(f.ks_statistic)
        << " ks_p=" << text::format_sig(f.ks_p) << "\n";
      o << "note: ks_p is the asymptotic Kolmogorov p-value with fitted parameters "
           "(a Lilliefors setting); it overstates the fit.\n";
    } else if (auto it = r.fit_notes.find("levels_normal"); it != r.fit_notes.end()) {
      o << "fit levels normal: unavailable (" << it->second << ")\n";
    }
  } else if (auto it = r.fit_notes.find("levels"); it != r.fit_notes.end()) {
    o << "\n== descriptor levels ==\nunavailable (" << it->second << ")\n";
  }

  if (!r.cooccurrence.empty()) {
    o << "\n== co-occurrence (top " << r.cooccurrence.size() << ") ==\nfirst\tsecond\trecords\n";
    for (const auto& p : r.cooccurrence) {
      o << p.first_label << "\t" << p.second_label << "\t" << p.count << "\n";
    }
  }
  if (!r.fit_notes.empty()) {
    o << "\n== notes ==\n";
    for (const auto& [k, v2] : r.fit_notes) o << k << "\t" << v2 << "\n";
  }
  return o.str();
}

}  // namespace detail

/// One CSV document per table, keyed by table name.
inline std::map<std::string, std::string> render_csv_tables(const SystemReport& r) {
  using detail::csv_field;
  std::map<std::string, std::string> out;
  auto hist = [](const metrics::Histogram& h, const char* key, const char* value) {
    std::ostringstream o;
    o << key << "," << value << "\n";
    for (auto [k, c] : h.bins) o << k << "," << c << "\n";
    return o.str();
  };
  {
    std::ostringstream o;
    o << "metric,value\n";
    o << "system," << csv_field(r.system_name) << "\n";
    o << "kind," << to_string(r.kind.kind) << "\n";
    o << "descriptors," << r.counts.descriptors << "\nrecords," << r.counts.records
      << "\nassignments," << r.counts.assignments << "\nbt_edges," << r.counts.bt_edges
      << "\nrt_pairs," << r.counts.rt_pairs << "\nuse_links," << r.counts.use_links
      << "\ncategorized_records," << r.counts.categorized_records << "\n";
    out["summary"] = o.str();
  }
  if (r.tags_per_record) {
    std::ostringstream o;
    o << "n,records,percent\n";
    for (auto [k, c] : r.tags_per_record->bins) {
      o << k << "," << c << "," << text::percent_half_up(c, r.tags_per_record->total) << "\n";
    }
    out["tags_per_record"] = o.str();
  }
  if (r.records_per_tag) {
    std::ostringstream o;
    o << "rank,descriptor,records\n";
    for (std::size_t i = 0; i < r.records_per_tag->entries.size(); ++i) {
      const auto& e = r.records_per_tag->entries[i];
      o << i + 1 << "," << csv_field(e.label) << "," << e.count << "\n";
    }
    out["records_per_tag"] = o.str();
  }
  if (r.tag_sizes) out["tag_sizes"] = hist(*r.tag_sizes, "records", "descriptors");
  if (r.broader_terms) out["broader_terms"] = hist(*r.broader_terms, "broader", "descriptors");
  if (r.levels) out["levels"] = hist(r.levels->hist, "level", "descriptors");
  {
    std::ostringstream o;
    o << "fit,parameter,value\n";
    auto row = [&](const char* fit, const char* p, double v) {
      o << fit << "," << p << "," << text::format_sig(v) << "\n";
    };
    if (r.tags_fit) {
      row("tags_exponential", "lambda", r.tags_fit->lambda);
      row("tags_exponential", "r_squared", r.tags_fit->r_squared);
    }
    if (r.tags_tail_fit) {
      row("tags_tail", "exponent", r.tags_tail_fit->exponent);
      row("tags_tail", "r_squared", r.tags_tail_fit->r_squared);
    }
    if (r.popularity_fit) {
      row("popularity_powerlaw", "exponent", r.popularity_fit->exponent);
      row("popularity_powerlaw", "r_squared", r.popularity_fit->r_squared);
    }
    if (r.broader_fit) {
      row("broader_exponential", "lambda", r.broader_fit->lambda);
      row("broader_exponential", "r_squared", r.broader_fit->r_squared);
    }
    if (r.level_fit) {
      row("levels_normal", "mean", r.level_fit->mean);
      row("levels_normal", "sigma", r.level_fit->sigma);
      row("levels_normal", "ks_statistic", r.level_fit->ks_statistic);
      row("levels_normal", "ks_p", r.level_fit->ks_p);
    }
    out["fits"] = o.str();
  }
  return out;
}

inline std::string render_report(const SystemReport& r, Format format) {
  switch (format) {
    case Format::kText: return detail::render_text(r);
    case Format::kJson: return to_json(r).dump(2) + "\n";
    case Format::kCsv: {
      std::string out;
      for (const auto& [name, body] : render_csv_tables(r)) out += "# " + name + "\n" + body + "\n";
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Plot series

enum class PlotFamily { kTagsExponential, kBroaderExponential, kPopularityPowerLaw, kLevelsNormal };

struct PlotSeries {
  std::string filename;
  std::string csv;
};

inline PlotSeries emit_plot_series(const SystemReport& r, PlotFamily family) {
  std::ostringstream o;
  auto missing = [](const char* what) {
    return Error(ErrorCode::kMissingTable, std::string(what) + " not in report");
  };
  auto exp_series = [&](const std::optional<metrics::Histogram>& h,
                        const std::optional<distfit::ExponentialFit>& f, const char* key) {
    if (!h || !f) throw missing(key);
    o << "n,count,fitted\n";
    for (std::uint64_t n = f->nmin; n <= f->nmax; ++n) {
      o << n << "," << h->count(n) << "," << text::format_sig(f->fitted(static_cast<double>(n)), 6)
        << "\n";
    }
  };
  switch (family) {
    case PlotFamily::kTagsExponential:
      exp_series(r.tags_per_record, r.tags_fit, "descriptors-per-record fit");
      return {"tags_exponential.csv", o.str()};
    case PlotFamily::kBroaderExponential:
      exp_series(r.broader_terms, r.broader_fit, "broader-terms fit");
      return {"broader_exponential.csv", o.str()};
    case PlotFamily::kPopularityPowerLaw: {
      if (!r.records_per_tag || !r.popularity_fit) throw missing("records-per-descriptor fit");
      o << "rank,count,fitted\n";
      const auto& e = r.records_per_tag->entries;
      for (std::size_t i = 0; i < e.size(); ++i) {
        o << i + 1 << "," << e[i].count << ","
          << text::format_sig(r.popularity_fit->fitted(static_cast<double>(i + 1)), 6) << "\n";
      }
      return {"popularity_powerlaw.csv", o.str()};
    }
    case PlotFamily::kLevelsNormal: {
      if (!r.levels || !r.level_fit) throw missing("level fit");
      o << "level,count,expected\n";
      for (auto [l, c] : r.levels->hist.bins) {
        o << l << "," << c << ","
          << text::format_sig(r.level_fit->expected(static_cast<double>(l)), 6) << "\n";
      }
      return {"levels_normal.csv", o.str()};
    }
  }
  throw missing("plot family");
}

/// Every series the report has data for.
inline std::vector<PlotSeries> emit_plot_data(const SystemReport& r) {
  std::vector<PlotSeries> out;
  for (PlotFamily f : {PlotFamily::kTagsExponential, PlotFamily::kBroaderExponential,
                       PlotFamily::kPopularityPowerLaw, PlotFamily::kLevelsNormal}) {
    try {
      out.push_back(emit_plot_series(r, f));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMissingTable) throw;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exports

namespace detail {
inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}
}  // namespace detail

/// `d` plus its ancestors with BT edges child -> parent, in label order.
inline std::string export_ancestor_graph(const IndexingSystem& sys, DescriptorId d) {
  std::vector<DescriptorId> nodes = ancestors(sys, d);
  nodes.push_back(d);
  std::sort(nodes.begin(), nodes.end());
  std::ostringstream o;
  o << "digraph ancestors {\n  rankdir=BT;\n";
  for (DescriptorId n : nodes) o << "  " << detail::dot_quote(sys.descriptor(n).label) << ";\n";
  for (DescriptorId n : nodes) {
    for (DescriptorId p : sys.broader_of(n)) {
      o << "  " << detail::dot_quote(sys.descriptor(n).label) << " -> "
        << detail::dot_quote(sys.descriptor(p).label) << ";\n";
    }
  }
  o << "}\n";
  return o.str();
}

struct Terminology {
  std::string relations;    // subject<TAB>BT|RT|USE<TAB>object, sorted
  std::string descriptors;  // label[<TAB>caption], label order
};

inline Terminology export_terminology(const IndexingSystem& sys) {
  auto vr = sys.virtual_root();
  std::vector<std::string> lines;
  for (const Descriptor& d : sys.descriptors()) {
    if (d.id == vr) continue;
    for (DescriptorId p : sys.broader_of(d.id)) {
      if (p == vr) continue;
      lines.push_back(d.label + "\tBT\t" + sys.descriptor(p).label);
    }
    if (d.use_target) lines.push_back(d.label + "\tUSE\t" + sys.descriptor(*d.use_target).label);
  }
  for (auto [a, b] : sys.related_pairs()) {
    lines.push_back(sys.descriptor(a).label + "\tRT\t" + sys.descriptor(b).label);
  }
  std::sort(lines.begin(), lines.end());
  Terminology t;
  for (const auto& l : lines) t.relations += l + "\n";
  for (const Descriptor& d : sys.descriptors()) {
    if (d.id == vr) continue;
    t.descriptors += d.caption.empty() ? d.label + "\n" : d.label + "\t" + d.caption + "\n";
  }
  return t;
}

inline void write_file(const std::filesystem::path& path, std::string_view body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

/// Writes a re-ingestable bundle: meta, descriptors, relations, records and
/// assignments.
inline void export_bundle(const IndexingSystem& sys, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Terminology t = export_terminology(sys);
  std::string meta = "name\t" + (sys.name().empty() ? std::string("unnamed") : sys.name()) + "\n";
  if (auto vr = sys.virtual_root()) {
    meta += "virtual_root\ttrue\n";
    for (DescriptorId c : sys.narrower_of(*vr)) meta += "top_term\t" + sys.descriptor(c).label + "\n";
  } else if (sys.tops_declared()) {
    for (DescriptorId top : sys.top_terms()) meta += "top_term\t" + sys.descriptor(top).label + "\n";
  }
  std::string records, assignments;
  for (std::uint32_t r = 0; r < sys.record_count(); ++r) {
    RecordView rv = sys.record(RecordId{r});
    records += std::string(rv.label) + "\n";
    for (DescriptorId d : rv.descriptors) {
      assignments += std::string(rv.label) + "\t" + sys.descriptor(d).label + "\n";
    }
  }
  write_file(dir / "meta.tsv", meta);
  write_file(dir / "descriptors.tsv", t.descriptors);
  write_file(dir / "relations.tsv", t.relations);
  write_file(dir / "records.tsv", records);
  write_file(dir / "assignments.tsv", assignments);
}

}  // namespace subjidx::typology

#endif  // SUBJIDX_TYPOLOGY_HPP_
