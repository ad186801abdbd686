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

#ifndef SUBJIDX_CLI_HPP_
#define SUBJIDX_CLI_HPP_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "subjidx/distfit.hpp"
#include "subjidx/error.hpp"
#include "subjidx/ingest.hpp"
#include "subjidx/metrics.hpp"
#include "subjidx/model.hpp"
#include "subjidx/synthgen.hpp"
#include "subjidx/text.hpp"
#include "subjidx/typology.hpp"

namespace subjidx::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

struct Range {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

/// "a:b" with a <= b.
inline Range parse_range(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("range", "expected a:b, got '" + s + "'");
  try {
    std::size_t used = 0;
    Range r;
    r.lo = std::stoull(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(s);
    std::string rest = s.substr(colon + 1);
    r.hi = std::stoull(rest, &used);
    if (used != rest.size() || r.lo > r.hi) throw std::invalid_argument(s);
    return r;
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("range", "expected a:b with a <= b, got '" + s + "'");
  }
}

/// Two numeric columns (x, count); '#' lines and blank lines are skipped.
inline std::vector<std::pair<double, double>> read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::vector<std::pair<double, double>> rows;
  ingest::detail::with_file(path, [&] {
    return ingest::scan_lines(in, {}, [&](std::string_view line, std::size_t no) {
      auto f = ingest::fields(line, 2, no, 2);
      double v[2];
      for (int i = 0; i < 2; ++i) {
        std::string s(f[i]);
        char* end = nullptr;
        v[i] = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0' || !std::isfinite(v[i])) {
          throw ingest::malformed(no, "not a number: '" + s + "'");
        }
      }
      rows.emplace_back(v[0], v[1]);
    });
  });
  return rows;
}

inline metrics::Histogram table_histogram(const std::vector<std::pair<double, double>>& rows) {
  metrics::Histogram h;
  for (auto [x, c] : rows) {
    if (x < 0 || c < 0 || x != std::floor(x) || c != std::floor(c)) {
      throw Error(ErrorCode::kMalformedLine, "histogram rows need non-negative integers");
    }
    h.add(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(c));
  }
  return h;
}

inline synthgen::Hierarchy parse_hierarchy(const std::string& s) {
  auto bad = [&] {
    return Error(ErrorCode::kSpecInvalid, "bad hierarchy '" + s + "' (none | tree:B:D | dag:L)");
  };
  auto whole = [&](const std::string& part, auto parse) {
    std::size_t used = 0;
    auto v = parse(part, &used);
    if (part.empty() || used != part.size()) throw bad();
    return v;
  };
  auto to_u32 = [](const std::string& x, std::size_t* used) {
    unsigned long v = std::stoul(x, used);
    if (v > 0xFFFFFFFFUL) throw std::out_of_range(x);
    return static_cast<std::uint32_t>(v);
  };
  auto to_double = [](const std::string& x, std::size_t* used) { return std::stod(x, used); };
  try {
    if (s == "none") return synthgen::Hierarchy::none();
    if (s.rfind("tree:", 0) == 0) {
      auto colon = s.find(':', 5);
      if (colon == std::string::npos) throw bad();
      return synthgen::Hierarchy::tree(whole(s.substr(5, colon - 5), to_u32),
                                       whole(s.substr(colon + 1), to_u32));
    }
    if (s.rfind("dag:", 0) == 0) return synthgen::Hierarchy::dag(whole(s.substr(4), to_double));
  } catch (const std::logic_error&) {
  }
  throw bad();
}

struct LoadFlags {
  std::string bundle;
  std::vector<std::string> tops;
  bool virtual_root = false;
  bool no_virtual_root = false;
  bool main_namespace_only = false;
  bool lenient = false;

  void attach(CLI::App* app) {
    app->add_option("bundle", bundle, "Bundle directory")->required();
    app->add_option("--top", tops, "Top term (repeatable); overrides meta.tsv");
    auto* on = app->add_flag("--virtual-root", virtual_root, "Attach a virtual root above the tops");
    app->add_flag("--no-virtual-root", no_virtual_root, "Ignore virtual_root in meta.tsv")->excludes(on);
    app->add_flag("--main-namespace-only", main_namespace_only,
                  "Skip pagecats pages outside the main namespace");
    app->add_flag("--lenient", lenient, "Count malformed lines instead of failing");
  }

  ingest::BundleOptions options() const {
    ingest::BundleOptions o;
    o.main_namespace_only = main_namespace_only;
    if (virtual_root) o.virtual_root = true;
    if (no_virtual_root) o.virtual_root = false;
    o.top_terms = tops;
    o.parse.strict = !lenient;
    return o;
  }
};

/// Usage errors surface before any work starts.
inline void require_bundle_dir(const std::string& path) {
  if (!std::filesystem::is_directory(path)) {
    throw CLI::ValidationError("bundle", "bundle directory not found: " + path);
  }
}

inline std::string validation_summary(const ingest::LoadedBundle& b) {
  std::ostringstream o;
  const auto& v = b.validation;
  o << "dangling_references\t" << v.dangling_reference_count << "\n";
  o << "bt_cycle_descriptors\t" << v.bt_cycle_descriptor_count << "\n";
  o << "unreachable_descriptors\t" << v.unreachable_descriptor_count << "\n";
  o << "uncategorized_records\t" << v.uncategorized_record_count << "\n";
  o << "\nfile\tlines\tparsed\tskipped\tmalformed\tfnv1a64\n";
  for (const auto& f : b.ingest.files) {
    o << f.file << "\t" << f.stats.lines_read << "\t" << f.stats.parsed << "\t" << f.stats.skipped
      << "\t" << f.stats.malformed << "\t" << f.digest << "\n";
  }
  const auto& s = b.ingest.build;
  o << "\nduplicate_assignments\t" << s.duplicate_assignments << "\n";
  o << "duplicate_bt_edges\t" << s.duplicate_bt_edges << "\n";
  o << "duplicate_rt_pairs\t" << s.duplicate_rt_pairs << "\n";
  o << "bt_self_loops_dropped\t" << s.self_loops_dropped << "\n";
  o << "rt_self_pairs_dropped\t" << s.related_self_pairs_dropped << "\n";
  o << "use_self_loops_dropped\t" << s.equivalence_self_loops_dropped << "\n";
  o << "conflicting_use_links\t" << s.conflicting_use_links << "\n";
  o << "redirects_ignored\t" << b.ingest.redirects_ignored << "\n";
  o << "redirect_self_loops_dropped\t" << b.ingest.redirect_self_loops_dropped << "\n";
  o << "pagecat_self_loops_dropped\t" << b.ingest.pagecat_self_loops_dropped << "\n";
  o << "non_main_pages_skipped\t" << b.ingest.non_main_pages_skipped << "\n";
  return o.str();
}

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural statistics for indexing systems: tagging, classifications, thesauri",
               "subjidx"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(typology::kToolVersion));

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Full report for a bundle");
  LoadFlags aload;
  aload.attach(analyze);
  std::string out_dir;
  bool resolve_use = false, include_level0 = false;
  std::string tags_range = "1:9", bt_range = "1:9";
  std::uint64_t tail_min = 10, tail_floor = 5;
  std::size_t rank_k = 25, cooc = 10;
  analyze->add_option("-o,--out", out_dir, "Output directory")->required();
  analyze->add_flag("--resolve-use", resolve_use, "Count assignments at their preferred descriptor");
  analyze->add_flag("--include-level0", include_level0, "Keep level 0 in the normal fit");
  analyze->add_option("--tags-range", tags_range, "Exponential fit range for descriptors per record")
      ->capture_default_str();
  analyze->add_option("--bt-range", bt_range, "Exponential fit range for broader terms")
      ->capture_default_str();
  analyze->add_option("--tail-min", tail_min, "First n of the tail fit")->capture_default_str();
  analyze->add_option("--tail-floor", tail_floor, "Minimum bin count in the tail fit")
      ->capture_default_str();
  analyze->add_option("--rank-k", rank_k, "Ranks used by the popularity fit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--cooccurrence", cooc, "Co-occurring pairs to list")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // fit
  auto* fit = app.add_subcommand("fit", "Fit one family to a two-column table");
  std::string table, family, range;
  bool fit_level0 = false;
  std::uint64_t fit_floor = 5;
  std::size_t fit_k = 25;
  fit->add_option("table", table, "TSV with x and count columns")->required();
  fit->add_option("--family", family, "exponential | powerlaw | tail | normal | growth")
      ->required()
      ->check(CLI::IsMember({"exponential", "powerlaw", "tail", "normal", "growth"}));
  fit->add_option("--range", range, "Fit range a:b (exponential: default 1:9; tail: a is the start)");
  fit->add_option("--rank-k", fit_k, "Ranks used by the power-law fit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--tail-floor", fit_floor, "Minimum bin count in the tail fit")->capture_default_str();
  fit->add_flag("--include-level0", fit_level0, "Keep x = 0 in the normal fit");

  // synth
  auto* synth = app.add_subcommand("synth", "Write a generated bundle");
  synthgen::GenSpec spec;
  std::string synth_out, hierarchy = "none";
  synth->add_option("-o,--out", synth_out, "Output bundle directory")->required();
  synth->add_option("--seed", spec.seed, "Random seed")->capture_default_str();
  synth->add_option("--records", spec.record_count, "Record count")->capture_default_str();
  synth->add_option("--vocab", spec.vocab_size, "Vocabulary size")->capture_default_str();
  synth->add_option("--tags-lambda", spec.tags_lambda, "Descriptors-per-record decay")->capture_default_str();
  synth->add_option("--popularity", spec.popularity_exponent, "Zipf exponent of descriptor popularity")
      ->capture_default_str();
  synth->add_option("--hierarchy", hierarchy, "none | tree:B:D | dag:L")->capture_default_str();
  synth->add_option("--name", spec.name, "System name")->capture_default_str();

  // path
  auto* path = app.add_subcommand("path", "Shortest broader-term path to a top term");
  LoadFlags pload;
  pload.attach(path);
  std::string descriptor;
  bool dot = false;
  path->add_option("descriptor", descriptor, "Descriptor label")->required();
  path->add_flag("--dot", dot, "Also print the ancestor graph in DOT");

  // export
  auto* exp = app.add_subcommand("export", "Write the system as a normalized bundle");
  LoadFlags eload;
  eload.attach(exp);
  std::string export_out;
  exp->add_option("-o,--out", export_out, "Output bundle directory")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << typology::kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    CLI::App* sub = nullptr;
    for (auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kUsage;
  }

  try {
    if (analyze->parsed()) {
      require_bundle_dir(aload.bundle);
      Range tr = parse_range(tags_range), br = parse_range(bt_range);
      ingest::LoadedBundle b = ingest::load_bundle(aload.bundle, aload.options());

      typology::ReportOptions ro;
      ro.top_terms = b.top_terms;
      ro.virtual_root = b.virtual_root;
      ro.main_namespace_only = aload.main_namespace_only;
      ro.resolve_use = resolve_use;
      ro.exclude_level0 = !include_level0;
      ro.tags_nmin = tr.lo;
      ro.tags_nmax = tr.hi;
      ro.bt_nmin = br.lo;
      ro.bt_nmax = br.hi;
      ro.tail_nmin = tail_min;
      ro.tail_floor = tail_floor;
      ro.rank_k = rank_k;
      ro.cooccurrence_m = cooc;
      std::map<std::string, std::string> digests;
      for (const auto& f : b.ingest.files) digests[f.file] = f.digest;
      typology::SystemReport report = typology::build_report(b.system, b.validation, ro, digests);

      namespace fs = std::filesystem;
      fs::path dir(out_dir);
      fs::create_directories(dir / "plots");
      typology::write_file(dir / "report.txt", typology::render_report(report, typology::Format::kText));
      typology::write_file(dir / "report.json", typology::render_report(report, typology::Format::kJson));
      typology::write_file(dir / "report.csv", typology::render_report(report, typology::Format::kCsv));
      typology::write_file(dir / "validation.txt", validation_summary(b));
      for (const auto& s : typology::emit_plot_data(report)) {
        typology::write_file(dir / "plots" / s.filename, s.csv);
      }
      out << "system\t" << report.system_name << "\n";
      out << "kind\t" << typology::to_string(report.kind.kind) << "\n";
      out << "descriptors\t" << report.counts.descriptors << "\n";
      out << "records\t" << report.counts.records << "\n";
      out << "report\t" << (dir / "report.txt").string() << "\n";
      return kOk;
    }

    if (fit->parsed()) {
      if (!std::filesystem::exists(table)) {
        throw CLI::ValidationError("table", "table not found: " + table);
      }
      auto rows = read_table(table);
      auto p = [](double v) { return text::format_sig(v); };
      out << "family\t" << family << "\n";
      if (family == "exponential") {
        Range r = range.empty() ? Range{1, 9} : parse_range(range);
        auto f = distfit::fit_exponential(table_histogram(rows), r.lo, r.hi);
        out << "lambda\t" << p(f.lambda) << "\nintercept\t" << p(f.intercept) << "\nr_squared\t"
            << p(f.r_squared) << "\nrange\t" << f.nmin << ":" << f.nmax << "\nbins_used\t"
            << f.bins_used << "\nzero_bins_skipped\t" << f.zero_bins_skipped << "\n";
      } else if (family == "powerlaw") {
        std::sort(rows.begin(), rows.end());
        std::vector<std::uint64_t> counts;
        for (auto [x, c] : rows) {
          if (c < 0 || c != std::floor(c)) throw Error(ErrorCode::kMalformedLine, "counts must be integers");
          counts.push_back(static_cast<std::uint64_t>(c));
        }
        auto f = distfit::fit_power_law_ranks(counts, fit_k);
        out << "exponent\t" << p(f.exponent) << "\nintercept\t" << p(f.intercept) << "\nr_squared\t"
            << p(f.r_squared) << "\nranks\t" << f.lo << ":" << f.hi << "\nbins_used\t" << f.bins_used
            << "\n";
      } else if (family == "tail") {
        std::uint64_t start = range.empty() ? 10 : parse_range(range).lo;
        auto f = distfit::fit_power_law_tail(table_histogram(rows), start, fit_floor);
        out << "exponent\t" << p(f.exponent) << "\nintercept\t" << p(f.intercept) << "\nr_squared\t"
            << p(f.r_squared) << "\nrange\t" << f.lo << ":" << f.hi << "\nbins_used\t" << f.bins_used
            << "\n";
      } else if (family == "normal") {
        auto f = distfit::fit_normal(table_histogram(rows), !fit_level0);
        out << "mean\t" << p(f.mean) << "\nsigma\t" << p(f.sigma) << "\nn\t" << f.n << "\nks_statistic\t"
            << p(f.ks_statistic) << "\nks_p\t" << p(f.ks_p) << "\nexcluded_level0\t"
            << (f.excluded_level0 ? "true" : "false") << "\n";
      } else {
        std::vector<distfit::GrowthPoint> pts;
        for (auto [x, c] : rows) pts.push_back({x, c});
        auto f = distfit::fit_growth(pts);
        out << "monthly_rate\t" << p(f.monthly_rate) << "\nslope\t" << p(f.slope) << "\nintercept\t"
            << p(f.intercept) << "\nr_squared\t" << p(f.r_squared) << "\npoints\t" << f.points << "\n";
      }
      return kOk;
    }

    if (synth->parsed()) {
      try {
        spec.hierarchy = parse_hierarchy(hierarchy);
        synthgen::validate_spec(spec);
      } catch (const Error& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
      }
      IndexingSystem sys = synthgen::generate(spec);
      typology::export_bundle(sys, synth_out);
      out << "bundle\t" << synth_out << "\n";
      out << "descriptors\t" << sys.descriptor_count() << "\nrecords\t" << sys.record_count()
          << "\nassignments\t" << sys.assignment_count() << "\nbt_edges\t" << sys.bt_edge_count() << "\n";
      return kOk;
    }

    if (path->parsed()) {
      require_bundle_dir(pload.bundle);
      ingest::LoadedBundle b = ingest::load_bundle(pload.bundle, pload.options());
      const IndexingSystem& sys = b.system;
      DescriptorId d = sys.descriptor_id(descriptor);
      for (DescriptorId step : shortest_path_to_top(sys, d)) {
        if (sys.virtual_root() && step == *sys.virtual_root()) continue;
        out << sys.descriptor(step).label << "\n";
      }
      if (dot) out << typology::export_ancestor_graph(sys, d);
      return kOk;
    }

    if (exp->parsed()) {
      require_bundle_dir(eload.bundle);
      ingest::LoadedBundle b = ingest::load_bundle(eload.bundle, eload.options());
      typology::export_bundle(b.system, export_out);
      out << "bundle\t" << export_out << "\n";
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return kFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error [Io]: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace subjidx::cli

#endif  // SUBJIDX_CLI_HPP_
