// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "binseek/tokenizer.hpp"

namespace binseek {

/// A source-level function as ingested from project metadata.
struct SourceFunction {
  std::string id;
  std::string project;
  std::string version;
  std::string path;
  std::string name;
  std::string code;
  std::uint64_t loc = 0;
};

/// One decompiled pseudocode function. `tokens` is always reproducible from
/// `pseudocode` via tokenize(); callee_ids hold either ids of records in the
/// same corpus or `ext:<name>` markers for unresolved (imported) callees.
struct FunctionRecord {
  std::string id;
  std::string binary_id;
  std::uint64_t address = 0;
  std::optional<std::string> name_symbol;  // absent when stripped
  std::string pseudocode;
  std::vector<Token> tokens;
  std::vector<std::string> string_literals;
  std::vector<std::string> callee_ids;
  std::uint64_t loc = 0;
  bool is_thunk = false;
  bool is_virtual = false;
};

enum class Grade : std::uint8_t { A, B, C, D, Ungraded };
enum class DescriptionSource : std::uint8_t { Llm, Manual, Synthetic };

const char* to_string(Grade g);
const char* to_string(DescriptionSource s);
Grade grade_from_string(std::string_view s);
DescriptionSource description_source_from_string(std::string_view s);

/// A natural-language description bound to one function.
struct DescriptionLabel {
  std::string function_ref;
  std::string text_en;
  std::optional<std::string> text_cn;
  Grade grade = Grade::Ungraded;
  DescriptionSource source = DescriptionSource::Llm;
};

// -- Structure extraction ----------------------------------------------------

using SymbolTable = std::unordered_map<std::string, std::string>;  // name -> id

inline constexpr std::string_view kExternalPrefix = "ext:";
inline const char* kDefaultStrippedPattern = "sub_[0-9A-Fa-f]+";

bool is_external_ref(std::string_view callee_id);
std::string external_name(std::string_view callee_id);
std::string make_external_ref(std::string_view name);

struct ExtractedStructure {
  std::vector<std::string> callee_ids;
  std::vector<std::string> string_literals;
  std::uint64_t loc = 0;
  std::optional<std::string> name_symbol;
};

/// Lexical-level structure extraction from pseudocode. Callees are
/// identifiers in call position (identifier immediately followed by an
/// argument list), resolved through `symbols`; names matching
/// `stripped_pattern` leave name_symbol absent. Malformed input degrades to
/// empty structure fields, never an error.
ExtractedStructure extract_structure(
    std::string_view pseudocode, const SymbolTable& symbols,
    const std::string& stripped_pattern = kDefaultStrippedPattern);

/// Declared function name as written, before the stripped-pattern check.
/// Empty when no declaration shape is recognizable.
std::string declared_name(const std::vector<Token>& tokens);

/// Thunk shape: the body is a single forwarding statement (one call, or an
/// unconditional goto) and nothing else.
bool looks_like_thunk(const std::vector<Token>& tokens);

// -- Quality filters ---------------------------------------------------------

enum class DropReason : std::uint8_t { None, Short, Thunk, Virtual };

const char* to_string(DropReason r);

struct FilterVerdict {
  bool keep = true;
  DropReason reason = DropReason::None;
};

/// Drops source functions with loc <= 10.
FilterVerdict source_filter(const SourceFunction& f);

/// Drops binary functions with loc <= 10, thunks, and virtual functions;
/// the reason names the first rule that fired, in that order.
FilterVerdict binary_filter(const FunctionRecord& f);

// -- Corpus container --------------------------------------------------------

/// Ordered collection of FunctionRecords with id lookup. Reads are
/// const and safe to share across threads; mutation requires exclusive
/// access. Lookups are counted so tests can assert which paths touch
/// callee records.
class Corpus {
 public:
  Corpus() = default;
  Corpus(Corpus&&) = default;
  Corpus& operator=(Corpus&&) = default;
  Corpus(const Corpus& other);
  Corpus& operator=(const Corpus& other);

  void add(FunctionRecord record);  // throws DataError on duplicate id
  const FunctionRecord* find(const std::string& id) const;
  bool contains(const std::string& id) const;

  const std::vector<FunctionRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  std::uint64_t lookup_count() const { return lookups_.load(std::memory_order_relaxed); }
  void reset_lookup_count() const { lookups_.store(0, std::memory_order_relaxed); }

  /// Symbol table over declared names (including stripped placeholders) so
  /// intra-corpus call sites resolve to record ids.
  SymbolTable symbol_table() const;

 private:
  std::vector<FunctionRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  mutable std::atomic<std::uint64_t> lookups_{0};
};

// -- Ingestion and line-delimited JSON I/O -----------------------------------

struct IngestOptions {
  std::string stripped_pattern = kDefaultStrippedPattern;
  bool infer_thunks = true;  // only when the input record omits is_thunk
};

/// Raw ingest record: pseudocode plus whatever metadata the decompiler
/// export carried. Structure fields are recomputed during ingest.
struct RawFunction {
  std::string id;
  std::string binary_id;
  std::uint64_t address = 0;
  std::string pseudocode;
  std::optional<bool> is_thunk;
  bool is_virtual = false;
};

Corpus ingest(const std::vector<RawFunction>& raw, const IngestOptions& opts = {});

Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

std::vector<RawFunction> load_raw_functions(const std::string& path);

std::vector<SourceFunction> load_source_functions(const std::string& path);
void save_source_functions(const std::vector<SourceFunction>& fns,
                           const std::string& path);

std::vector<DescriptionLabel> load_descriptions(const std::string& path);
void save_descriptions(const std::vector<DescriptionLabel>& descs,
                       const std::string& path);

}  // namespace binseek
