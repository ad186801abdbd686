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

#ifndef SUBJIDX_INGEST_HPP_
#define SUBJIDX_INGEST_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subjidx/error.hpp"
#include "subjidx/model.hpp"
#include "subjidx/text.hpp"

namespace subjidx::ingest {

// ---------------------------------------------------------------------------
// Titles

struct WikiTitle {
  std::string ns;  // empty = main namespace
  std::string rest;

  bool in_namespace(std::string_view name) const { return ns == name; }
  std::string full() const { return ns.empty() ? rest : ns + ":" + rest; }
  friend bool operator==(const WikiTitle&, const WikiTitle&) = default;
};

inline constexpr std::string_view kCategoryNamespace = "Category";

/// Namespace names recognized as title prefixes. Only the first letter is
/// matched case-insensitively, as wiki titles are.
struct NamespaceSet {
  std::vector<std::string> names{"Category",  "Discussion", "Talk",
                                 "User",      "User talk",  "Wikipedia",
                                 "Image",     "File",       "Template",
                                 "Help",      "Portal",     "MediaWiki"};

  std::optional<std::string> match(std::string_view prefix) const {
    for (const auto& n : names) {
      if (n.size() != prefix.size() || n.empty()) continue;
      if (std::tolower(static_cast<unsigned char>(n[0])) !=
          std::tolower(static_cast<unsigned char>(prefix[0]))) {
        continue;
      }
      if (std::string_view(n).substr(1) == prefix.substr(1)) return n;
    }
    return std::nullopt;
  }
};

inline WikiTitle parse_wiki_title(std::string_view raw,
                                  const NamespaceSet& namespaces = {}) {
  std::string_view s = text::trim(raw);
  if (s.size() >= 4 && s.substr(0, 2) == "[[" && s.substr(s.size() - 2) == "]]") {
    s = text::trim(s.substr(2, s.size() - 4));
  }
  if (s.empty()) throw Error(ErrorCode::kEmptyTitle, "empty page title");
  WikiTitle title;
  std::size_t colon = s.find(':');
  if (colon != std::string_view::npos) {
    std::string prefix = text::normalize_label(s.substr(0, colon));
    if (auto ns = namespaces.match(prefix)) {
      title.ns = *ns;
      title.rest = text::normalize_label(s.substr(colon + 1));
      if (title.rest.empty()) {
        throw Error(ErrorCode::kEmptyTitle,
                    "title '" + std::string(s) + "' has an empty remainder");
      }
      return title;
    }
  }
  title.rest = text::normalize_label(s);
  return title;
}

// ---------------------------------------------------------------------------
// Line scanning

struct ParseStats {
  std::uint64_t lines_read = 0;
  std::uint64_t parsed = 0;
  std::uint64_t skipped = 0;  // comments and blank lines
  std::uint64_t malformed = 0;

  friend bool operator==(const ParseStats&, const ParseStats&) = default;
};

struct ParseOptions {
  bool strict = true;  // throw on the first malformed line
};

/// Reads LF or CRLF lines, validates UTF-8 and skips comments/blank lines.
/// `decode(line, number)` throws Error(kMalformedLine) for bad lines; in
/// lenient mode those are counted and skipped. Encoding errors always throw.
template <class Decode>
ParseStats scan_lines(std::istream& in, const ParseOptions& opts, Decode&& decode) {
  ParseStats stats;
  std::string line;
  while (std::getline(in, line)) {
    ++stats.lines_read;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!text::valid_utf8(line)) {
      throw Error(ErrorCode::kInvalidEncoding, "invalid UTF-8", stats.lines_read);
    }
    std::string_view view = line;
    std::string_view trimmed = text::trim(view);
    if (trimmed.empty() || trimmed.front() == '#') {
      ++stats.skipped;
      continue;
    }
    try {
      decode(view, stats.lines_read);
      ++stats.parsed;
    } catch (const Error& e) {
      if (opts.strict || e.code() != ErrorCode::kMalformedLine) throw;
      ++stats.malformed;
    }
  }
  return stats;
}

inline Error malformed(std::size_t line, const std::string& why) {
  return Error(ErrorCode::kMalformedLine, "line " + std::to_string(line) + ": " + why, line);
}

/// Exactly `count` TAB-separated fields; those listed in `required` must be
/// non-empty after trimming.
inline std::vector<std::string_view> fields(std::string_view line, std::size_t count,
                                            std::size_t line_no,
                                            std::size_t required) {
  auto parts = text::split_tabs(line);
  if (parts.size() != count) {
    throw malformed(line_no, "expected " + std::to_string(count) +
                                 " TAB-separated fields, got " +
                                 std::to_string(parts.size()));
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    parts[i] = text::trim(parts[i]);
    if (i < required && parts[i].empty()) {
      throw malformed(line_no, "field " + std::to_string(i + 1) + " is empty");
    }
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Flat assignments: record<TAB>descriptor

struct AssignmentLine {
  std::string record_label;
  std::string descriptor_label;
  std::size_t source_line = 0;
};

struct AssignmentList {
  std::vector<AssignmentLine> lines;
  ParseStats stats;
};

template <class Sink>
ParseStats scan_assignments(std::istream& in, const ParseOptions& opts, Sink&& sink) {
  return scan_lines(in, opts, [&](std::string_view line, std::size_t no) {
    auto f = fields(line, 2, no, 2);
    sink(f[0], f[1], no);
  });
}

inline AssignmentList parse_assignments(std::istream& in, const ParseOptions& opts = {}) {
  AssignmentList out;
  out.stats = scan_assignments(in, opts, [&](std::string_view r, std::string_view d,
                                             std::size_t no) {
    out.lines.push_back({text::normalize_label(r), text::normalize_label(d), no});
  });
  return out;
}

// ---------------------------------------------------------------------------
// Wiki category links: page_title<TAB>category_name

struct PageCatsOptions {
  NamespaceSet namespaces;
  bool main_namespace_only = false;
  ParseOptions parse;
};

struct PageCatsFragment {
  std::vector<std::pair<std::string, std::string>> assignments;  // page, category
  std::vector<std::pair<std::string, std::string>> broader;      // child, parent
  std::uint64_t self_loops_dropped = 0;
  std::uint64_t non_main_pages_skipped = 0;
  ParseStats stats;
};

/// Category column: a bare name; a stray "Category:" prefix is tolerated.
inline std::string category_name(std::string_view raw, const NamespaceSet& ns,
                                 std::size_t line_no) {
  WikiTitle t = parse_wiki_title(raw, ns);
  if (!t.ns.empty() && t.ns != kCategoryNamespace) {
    throw malformed(line_no, "category column names a '" + t.ns + "' page");
  }
  return t.rest;
}

/// sink.assign(page, category) / sink.broader(child, parent) / sink.self_loop()
/// / sink.skip_non_main().
template <class Sink>
ParseStats scan_pagecats(std::istream& in, const PageCatsOptions& opts, Sink&& sink) {
  return scan_lines(in, opts.parse, [&](std::string_view line, std::size_t no) {
    auto f = fields(line, 2, no, 2);
    WikiTitle page = parse_wiki_title(f[0], opts.namespaces);
    std::string category = category_name(f[1], opts.namespaces, no);
    if (page.ns == kCategoryNamespace) {
      if (page.rest == category) {
        sink.self_loop();
      } else {
        sink.broader(page.rest, category);
      }
    } else if (opts.main_namespace_only && !page.ns.empty()) {
      sink.skip_non_main();
    } else {
      sink.assign(page.full(), category);
    }
  });
}

inline PageCatsFragment parse_pagecats(std::istream& in, const PageCatsOptions& opts = {}) {
  PageCatsFragment out;
  struct Sink {
    PageCatsFragment& f;
    void assign(std::string page, std::string cat) {
      f.assignments.emplace_back(std::move(page), std::move(cat));
    }
    void broader(std::string child, std::string parent) {
      f.broader.emplace_back(std::move(child), std::move(parent));
    }
    void self_loop() { ++f.self_loops_dropped; }
    void skip_non_main() { ++f.non_main_pages_skipped; }
  } sink{out};
  out.stats = scan_pagecats(in, opts, sink);
  return out;
}

// ---------------------------------------------------------------------------
// Redirects: from_title<TAB>to_title

struct RedirectFragment {
  std::vector<std::pair<std::string, std::string>> use_links;  // from, to
  std::uint64_t ignored = 0;  // not Category -> Category
  std::uint64_t self_loops_dropped = 0;
  ParseStats stats;
};

inline RedirectFragment parse_redirects(std::istream& in,
                                        const NamespaceSet& namespaces = {},
                                        const ParseOptions& opts = {}) {
  RedirectFragment out;
  out.stats = scan_lines(in, opts, [&](std::string_view line, std::size_t no) {
    auto f = fields(line, 2, no, 2);
    WikiTitle from = parse_wiki_title(f[0], namespaces);
    WikiTitle to = parse_wiki_title(f[1], namespaces);
    if (from.ns != kCategoryNamespace || to.ns != kCategoryNamespace) {
      ++out.ignored;
    } else if (from.rest == to.rest) {
      ++out.self_loops_dropped;
    } else {
      out.use_links.emplace_back(from.rest, to.rest);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Classification schemes: notation<TAB>caption<TAB>parent_notation

struct ClassLine {
  std::string notation;
  std::string caption;
  std::optional<std::string> parent;
  std::size_t source_line = 0;
};

struct ClassTable {
  std::vector<ClassLine> lines;  // one per notation, first occurrence order
  ParseStats stats;
};

/// Reads a scheme and checks it is a forest: one parent per notation, every
/// parent declared, no parent cycles.
inline ClassTable read_classes(std::istream& in, const ParseOptions& opts = {}) {
  ClassTable out;
  std::unordered_map<std::string, std::size_t> index;
  out.stats = scan_lines(in, opts, [&](std::string_view line, std::size_t no) {
    auto f = fields(line, 3, no, 1);
    ClassLine c{text::normalize_label(f[0]), text::normalize_label(f[1]),
                std::nullopt, no};
    if (!f[2].empty()) c.parent = text::normalize_label(f[2]);
    if (c.parent && *c.parent == c.notation) {
      throw malformed(no, "class '" + c.notation + "' is its own parent");
    }
    auto [it, inserted] = index.try_emplace(c.notation, out.lines.size());
    if (inserted) {
      out.lines.push_back(std::move(c));
      return;
    }
    ClassLine& prev = out.lines[it->second];
    if (prev.parent != c.parent) {
      throw Error(ErrorCode::kMultipleParents, c.notation, no);
    }
    if (prev.caption.empty()) prev.caption = c.caption;
  });
  for (const ClassLine& c : out.lines) {
    if (c.parent && !index.count(*c.parent)) {
      throw Error(ErrorCode::kUnknownParent,
                  c.notation + " (parent '" + *c.parent + "')", c.source_line);
    }
  }
  // Parent pointers: a walk longer than the table size means a cycle.
  std::vector<char> state(out.lines.size(), 0);  // 0 new, 1 on walk, 2 done
  for (std::size_t start = 0; start < out.lines.size(); ++start) {
    std::vector<std::size_t> walk;
    std::size_t cur = start;
    while (state[cur] == 0) {
      state[cur] = 1;
      walk.push_back(cur);
      if (!out.lines[cur].parent) break;
      cur = index.at(*out.lines[cur].parent);
      if (state[cur] == 1) {
        throw Error(ErrorCode::kMalformedLine,
                    "parent cycle through class '" + out.lines[cur].notation + "'",
                    out.lines[cur].source_line);
      }
    }
    for (std::size_t w : walk) state[w] = 2;
  }
  return out;
}

inline void apply(const ClassTable& table, SystemBuilder& builder) {
  for (const ClassLine& c : table.lines) {
    builder.declare_descriptor(c.notation, c.caption);
    if (c.parent) builder.add_broader(c.notation, *c.parent);
  }
}

struct ClassificationOptions {
  std::string name;
  bool virtual_root = false;
  ParseOptions parse;
};

inline IndexingSystem parse_classification(std::istream& in,
                                           const ClassificationOptions& opts = {}) {
  ClassTable table = read_classes(in, opts.parse);
  SystemBuilder builder(opts.name);
  builder.set_virtual_root(opts.virtual_root);
  apply(table, builder);
  return builder.build();
}

// ---------------------------------------------------------------------------
// Terminology relations: subject<TAB>BT|NT|RT|USE|UF<TAB>object

enum class Relation { kBroader, kNarrower, kRelated, kUse, kUsedFor };

struct RelationLine {
  std::string subject;
  Relation relation;
  std::string object;
};

struct RelationsFragment {
  std::vector<RelationLine> lines;
  ParseStats stats;
};

inline RelationsFragment parse_relations(std::istream& in, const ParseOptions& opts = {}) {
  static const std::map<std::string_view, Relation> kNames{
      {"BT", Relation::kBroader}, {"NT", Relation::kNarrower},
      {"RT", Relation::kRelated}, {"USE", Relation::kUse},
      {"UF", Relation::kUsedFor}};
  RelationsFragment out;
  out.stats = scan_lines(in, opts, [&](std::string_view line, std::size_t no) {
    auto f = fields(line, 3, no, 3);
    auto rel = kNames.find(f[1]);
    if (rel == kNames.end()) {
      throw malformed(no, "unknown relation '" + std::string(f[1]) + "'");
    }
    out.lines.push_back({text::normalize_label(f[0]), rel->second,
                         text::normalize_label(f[2])});
  });
  return out;
}

inline void apply(const RelationLine& r, SystemBuilder& builder) {
  switch (r.relation) {
    case Relation::kBroader: builder.add_broader(r.subject, r.object); break;
    case Relation::kNarrower: builder.add_broader(r.object, r.subject); break;
    case Relation::kRelated: builder.add_related(r.subject, r.object); break;
    case Relation::kUse: builder.add_use(r.subject, r.object); break;
    case Relation::kUsedFor: builder.add_use(r.object, r.subject); break;
  }
}

// ---------------------------------------------------------------------------
// Record and descriptor listings, bundle metadata

struct DescriptorLine {
  std::string label;
  std::string caption;
};

inline std::vector<std::string> parse_record_list(std::istream& in, ParseStats* stats = nullptr,
                                                  const ParseOptions& opts = {}) {
  std::vector<std::string> out;
  ParseStats s = scan_lines(in, opts, [&](std::string_view line, std::size_t no) {
    auto f = fields(line, 1, no, 1);
    out.push_back(text::normalize_label(f[0]));
  });
  if (stats) *stats = s;
  return out;
}

inline std::vector<DescriptorLine> parse_descriptor_list(std::istream& in,
                                                         ParseStats* stats = nullptr,
                                                         const ParseOptions& opts = {}) {
  std::vector<DescriptorLine> out;
  ParseStats s = scan_lines(in, opts, [&](std::string_view line, std::size_t no) {
    auto parts = text::split_tabs(line);
    if (parts.size() > 2) throw malformed(no, "expected label[<TAB>caption]");
    auto f = fields(line, parts.size(), no, 1);
    out.push_back({text::normalize_label(f[0]),
                   f.size() > 1 ? text::normalize_label(f[1]) : std::string()});
  });
  if (stats) *stats = s;
  return out;
}

struct BundleMeta {
  std::optional<std::string> name;
  std::vector<std::string> top_terms;
  std::optional<bool> virtual_root;
};

inline BundleMeta parse_meta(std::istream& in, ParseStats* stats = nullptr) {
  BundleMeta meta;
  ParseStats s = scan_lines(in, ParseOptions{}, [&](std::string_view line, std::size_t no) {
    auto f = fields(line, 2, no, 2);
    if (f[0] == "name") {
      meta.name = text::normalize_label(f[1]);
    } else if (f[0] == "top_term") {
      meta.top_terms.push_back(text::normalize_label(f[1]));
    } else if (f[0] == "virtual_root") {
      if (f[1] != "true" && f[1] != "false") {
        throw malformed(no, "virtual_root must be true or false");
      }
      meta.virtual_root = f[1] == "true";
    } else {
      throw malformed(no, "unknown meta key '" + std::string(f[0]) + "'");
    }
  });
  if (stats) *stats = s;
  return meta;
}

// ---------------------------------------------------------------------------
// Assembling systems

struct BuildOptions {
  std::string name;
  std::vector<std::string> top_terms;
  bool virtual_root = false;
};

struct Fragments {
  std::vector<std::string> records;
  std::vector<DescriptorLine> descriptors;
  std::vector<AssignmentLine> assignments;
  std::vector<PageCatsFragment> pagecats;
  std::vector<RedirectFragment> redirects;
  std::vector<ClassTable> classes;
  std::vector<RelationsFragment> relations;
};

struct BuildResult {
  IndexingSystem system;
  ValidationReport validation;
  BuildStats stats;
};

inline BuildResult build_system(const Fragments& f, const BuildOptions& opts = {}) {
  SystemBuilder b(opts.name);
  b.set_virtual_root(opts.virtual_root);
  for (const auto& d : f.descriptors) b.declare_descriptor(d.label, d.caption);
  for (const auto& t : f.classes) apply(t, b);
  for (const auto& r : f.records) b.intern_record(r);
  for (const auto& a : f.assignments) b.assign(a.record_label, a.descriptor_label);
  for (const auto& p : f.pagecats) {
    for (const auto& [page, cat] : p.assignments) b.assign(page, cat);
    for (const auto& [child, parent] : p.broader) b.add_broader(child, parent);
  }
  for (const auto& r : f.redirects) {
    for (const auto& [from, to] : r.use_links) b.add_use(from, to);
  }
  for (const auto& r : f.relations) {
    for (const auto& line : r.lines) apply(line, b);
  }
  for (const auto& t : opts.top_terms) b.add_top(t);
  BuildResult out;
  out.system = b.build();
  out.stats = b.stats();
  out.validation = validate(out.system);
  return out;
}

// ---------------------------------------------------------------------------
// Bundle directories

inline constexpr const char* kBundleFiles[] = {
    "meta.tsv",        "records.tsv",  "descriptors.tsv", "classes.tsv",
    "assignments.tsv", "pagecats.tsv", "redirects.tsv",   "relations.tsv"};

struct BundleOptions {
  NamespaceSet namespaces;
  bool main_namespace_only = false;
  std::optional<bool> virtual_root;     // overrides meta.tsv
  std::vector<std::string> top_terms;   // overrides meta.tsv when non-empty
  ParseOptions parse;
};

struct FileIngest {
  std::string file;
  ParseStats stats;
  std::string digest;  // fnv1a64 of the raw bytes
};

struct IngestReport {
  std::vector<FileIngest> files;
  std::uint64_t redirects_ignored = 0;
  std::uint64_t redirect_self_loops_dropped = 0;
  std::uint64_t non_main_pages_skipped = 0;
  std::uint64_t pagecat_self_loops_dropped = 0;
  BuildStats build;
};

struct LoadedBundle {
  IndexingSystem system;
  ValidationReport validation;
  IngestReport ingest;
  bool virtual_root = false;
  std::vector<std::string> top_terms;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

// Rethrows parse errors with the file name prepended.
template <class Fn>
ParseStats with_file(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::string where = path.string();
    if (e.line() > 0) where += ":" + std::to_string(e.line());
    throw Error(e.code(), where + ": " + e.what(), e.line());
  }
}

}  // namespace detail

/// Loads any subset of the bundle files found in `dir`.
inline LoadedBundle load_bundle(const std::filesystem::path& dir,
                                const BundleOptions& opts = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "bundle directory not found: " + dir.string());
  }
  LoadedBundle out;
  SystemBuilder b;
  BundleMeta meta;
  std::map<std::string, std::string> contents;
  for (const char* name : kBundleFiles) {
    fs::path p = dir / name;
    if (!fs::exists(p)) continue;
    std::string data = detail::read_file(p);
    text::Fnv1a64 h;
    h.update(data);
    out.ingest.files.push_back({name, {}, h.hex()});
    contents.emplace(name, std::move(data));
  }

  for (auto& file : out.ingest.files) {
    fs::path path = dir / file.file;
    std::istringstream in(contents.at(file.file));
    const std::string& n = file.file;
    file.stats = detail::with_file(path, [&]() -> ParseStats {
      ParseStats s;
      if (n == "meta.tsv") {
        meta = parse_meta(in, &s);
      } else if (n == "records.tsv") {
        s = scan_lines(in, opts.parse, [&](std::string_view line, std::size_t no) {
          b.intern_record(fields(line, 1, no, 1)[0]);
        });
      } else if (n == "descriptors.tsv") {
        for (const auto& d : parse_descriptor_list(in, &s, opts.parse)) {
          b.declare_descriptor(d.label, d.caption);
        }
      } else if (n == "classes.tsv") {
        ClassTable t = read_classes(in, opts.parse);
        apply(t, b);
        s = t.stats;
      } else if (n == "assignments.tsv") {
        s = scan_assignments(in, opts.parse,
                             [&](std::string_view r, std::string_view d, std::size_t) {
                               b.assign(r, d);
                             });
      } else if (n == "pagecats.tsv") {
        struct Sink {
          SystemBuilder& b;
          IngestReport& r;
          void assign(const std::string& page, const std::string& cat) {
            b.assign(page, cat);
          }
          void broader(const std::string& c, const std::string& p) {
            b.add_broader(c, p);
          }
          void self_loop() { ++r.pagecat_self_loops_dropped; }
          void skip_non_main() { ++r.non_main_pages_skipped; }
        } sink{b, out.ingest};
        PageCatsOptions po{opts.namespaces, opts.main_namespace_only, opts.parse};
        s = scan_pagecats(in, po, sink);
      } else if (n == "redirects.tsv") {
        RedirectFragment r = parse_redirects(in, opts.namespaces, opts.parse);
        for (const auto& [from, to] : r.use_links) b.add_use(from, to);
        out.ingest.redirects_ignored += r.ignored;
        out.ingest.redirect_self_loops_dropped += r.self_loops_dropped;
        s = r.stats;
      } else if (n == "relations.tsv") {
        RelationsFragment r = parse_relations(in, opts.parse);
        for (const auto& line : r.lines) apply(line, b);
        s = r.stats;
      }
      return s;
    });
  }

  b.set_name(meta.name ? *meta.name : dir.filename().string());
  out.virtual_root = opts.virtual_root.value_or(meta.virtual_root.value_or(false));
  out.top_terms = opts.top_terms.empty() ? meta.top_terms : opts.top_terms;
  b.set_virtual_root(out.virtual_root);
  for (const auto& t : out.top_terms) b.add_top(t);
  out.system = b.build();
  out.ingest.build = b.stats();
  out.validation = validate(out.system);
  return out;
}

}  // namespace subjidx::ingest

#endif  // SUBJIDX_INGEST_HPP_
