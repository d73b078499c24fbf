// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/corpus.hpp"

#include <fstream>
#include <regex>
#include <unordered_set>

#include <json.hpp>

#include "binseek/errors.hpp"

namespace binseek {

namespace {

using ordered_json = nlohmann::ordered_json;

// Identifiers that precede '(' without being calls.
const std::unordered_set<std::string>& control_keywords() {
  static const std::unordered_set<std::string> kw = {
      "if",       "else",     "for",      "while",   "do",       "switch",
      "case",     "return",   "goto",     "sizeof",  "typedef",  "struct",
      "union",    "enum",     "static",   "const",   "unsigned", "signed",
      "int",      "char",     "long",     "short",   "float",    "double",
      "void",     "bool",     "defined",  "new",     "delete",   "operator",
      "alignof",  "decltype", "__asm",    "__try",   "__except", "__finally",
      "_BYTE",    "_WORD",    "_DWORD",   "_QWORD",  "__int8",   "__int16",
      "__int32",  "__int64",  "LOBYTE",   "HIBYTE",  "LOWORD",   "HIWORD",
      "LODWORD",  "HIDWORD",
  };
  return kw;
}

}  // namespace

const char* to_string(Grade g) {
  switch (g) {
    case Grade::A: return "A";
    case Grade::B: return "B";
    case Grade::C: return "C";
    case Grade::D: return "D";
    case Grade::Ungraded: return "ungraded";
  }
  return "?";
}

const char* to_string(DescriptionSource s) {
  switch (s) {
    case DescriptionSource::Llm: return "llm";
    case DescriptionSource::Manual: return "manual";
    case DescriptionSource::Synthetic: return "synthetic";
  }
  return "?";
}

Grade grade_from_string(std::string_view s) {
  if (s == "A") return Grade::A;
  if (s == "B") return Grade::B;
  if (s == "C") return Grade::C;
  if (s == "D") return Grade::D;
  if (s == "ungraded") return Grade::Ungraded;
  throw DataError("unknown grade: " + std::string(s));
}

DescriptionSource description_source_from_string(std::string_view s) {
  if (s == "llm") return DescriptionSource::Llm;
  if (s == "manual") return DescriptionSource::Manual;
  if (s == "synthetic") return DescriptionSource::Synthetic;
  throw DataError("unknown description source: " + std::string(s));
}

bool is_external_ref(std::string_view callee_id) {
  return callee_id.substr(0, kExternalPrefix.size()) == kExternalPrefix;
}

std::string external_name(std::string_view callee_id) {
  if (!is_external_ref(callee_id)) return std::string(callee_id);
  return std::string(callee_id.substr(kExternalPrefix.size()));
}

std::string make_external_ref(std::string_view name) {
  return std::string(kExternalPrefix) + std::string(name);
}

std::string declared_name(const std::vector<Token>& tokens) {
  std::string last_ident;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::Punct && (t.text == "(" || t.text == "{")) {
      break;
    }
    if (t.kind == TokenKind::Identifier) last_ident = t.text;
  }
  return last_ident;
}

ExtractedStructure extract_structure(std::string_view pseudocode,
                                     const SymbolTable& symbols,
                                     const std::string& stripped_pattern) {
  ExtractedStructure out;
  out.loc = count_lines(pseudocode);
  const std::vector<Token> tokens = tokenize(pseudocode);

  const std::string name = declared_name(tokens);
  if (!name.empty()) {
    const std::regex stripped(stripped_pattern);
    if (!std::regex_match(name, stripped)) out.name_symbol = name;
  }

  for (const Token& t : tokens) {
    if (t.kind == TokenKind::String) out.string_literals.push_back(t.text);
  }

  // Calls can only appear in the body; without braces fall back to
  // everything after the declaration's parameter list opener.
  std::size_t body_start = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind == TokenKind::Punct && tokens[i].text == "{") {
      body_start = i + 1;
      break;
    }
  }
  if (body_start == tokens.size()) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].kind == TokenKind::Punct && tokens[i].text == "(") {
        body_start = i + 1;
        break;
      }
    }
  }

  std::unordered_set<std::string> seen;
  for (std::size_t i = body_start; i + 1 < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind != TokenKind::Identifier) continue;
    const Token& next = tokens[i + 1];
    if (next.kind != TokenKind::Punct || next.text != "(") continue;
    if (control_keywords().contains(t.text)) continue;
    if (!seen.insert(t.text).second) continue;
    auto it = symbols.find(t.text);
    out.callee_ids.push_back(it != symbols.end() ? it->second
                                                 : make_external_ref(t.text));
  }
  return out;
}

bool looks_like_thunk(const std::vector<Token>& tokens) {
  std::size_t open = tokens.size();
  std::size_t close = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::Punct) continue;
    if (tokens[i].text == "{" && open == tokens.size()) open = i;
    if (tokens[i].text == "}") close = i;
  }
  if (open >= close) return false;

  std::size_t statements = 0;
  bool has_call = false;
  bool has_goto = false;
  for (std::size_t i = open + 1; i < close; ++i) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::Punct && t.text == ";") ++statements;
    if (t.kind == TokenKind::Identifier && t.text == "goto") has_goto = true;
    if (t.kind == TokenKind::Identifier && i + 1 < close &&
        tokens[i + 1].kind == TokenKind::Punct && tokens[i + 1].text == "(" &&
        !control_keywords().contains(t.text)) {
      has_call = true;
    }
  }
  return statements == 1 && (has_call || has_goto);
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::None: return "none";
    case DropReason::Short: return "short";
    case DropReason::Thunk: return "thunk";
    case DropReason::Virtual: return "virtual";
  }
  return "?";
}

FilterVerdict source_filter(const SourceFunction& f) {
  if (f.loc <= 10) return {false, DropReason::Short};
  return {true, DropReason::None};
}

FilterVerdict binary_filter(const FunctionRecord& f) {
  if (f.loc <= 10) return {false, DropReason::Short};
  if (f.is_thunk) return {false, DropReason::Thunk};
  if (f.is_virtual) return {false, DropReason::Virtual};
  return {true, DropReason::None};
}

Corpus::Corpus(const Corpus& other)
    : records_(other.records_), by_id_(other.by_id_) {}

Corpus& Corpus::operator=(const Corpus& other) {
  if (this != &other) {
    records_ = other.records_;
    by_id_ = other.by_id_;
    lookups_.store(0, std::memory_order_relaxed);
  }
  return *this;
}

void Corpus::add(FunctionRecord record) {
  if (by_id_.contains(record.id)) {
    throw DataError("duplicate function id: " + record.id);
  }
  by_id_.emplace(record.id, records_.size());
  records_.push_back(std::move(record));
}

const FunctionRecord* Corpus::find(const std::string& id) const {
  lookups_.fetch_add(1, std::memory_order_relaxed);
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

bool Corpus::contains(const std::string& id) const {
  return by_id_.contains(id);
}

SymbolTable Corpus::symbol_table() const {
  SymbolTable table;
  for (const FunctionRecord& r : records_) {
    const std::string name = declared_name(r.tokens);
    if (!name.empty()) table.emplace(name, r.id);
  }
  return table;
}

Corpus ingest(const std::vector<RawFunction>& raw, const IngestOptions& opts) {
  // First pass: declared names of all records, so intra-corpus calls to
  // stripped placeholders still resolve.
  SymbolTable symbols;
  std::vector<std::vector<Token>> token_cache;
  token_cache.reserve(raw.size());
  for (const RawFunction& rf : raw) {
    token_cache.push_back(tokenize(rf.pseudocode));
    const std::string name = declared_name(token_cache.back());
    if (!name.empty()) symbols.emplace(name, rf.id);
  }

  Corpus corpus;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RawFunction& rf = raw[i];
    ExtractedStructure st =
        extract_structure(rf.pseudocode, symbols, opts.stripped_pattern);
    FunctionRecord rec;
    rec.id = rf.id;
    rec.binary_id = rf.binary_id;
    rec.address = rf.address;
    rec.name_symbol = std::move(st.name_symbol);
    rec.pseudocode = rf.pseudocode;
    rec.tokens = std::move(token_cache[i]);
    rec.string_literals = std::move(st.string_literals);
    rec.callee_ids = std::move(st.callee_ids);
    rec.loc = st.loc;
    rec.is_virtual = rf.is_virtual;
    rec.is_thunk = rf.is_thunk.has_value()
                       ? *rf.is_thunk
                       : (opts.infer_thunks && looks_like_thunk(rec.tokens));
    corpus.add(std::move(rec));
  }
  return corpus;
}

// -- JSONL -------------------------------------------------------------------

namespace {

std::vector<ordered_json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::vector<ordered_json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(ordered_json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_jsonl(const std::vector<ordered_json>& rows,
                 const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path);
  for (const auto& row : rows) out << row.dump() << "\n";
  if (!out) throw DataError("write failed: " + path);
}

template <typename T>
T get_field(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) {
    throw DataError(where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(where + ": bad field '" + key + "': " + e.what());
  }
}

}  // namespace

Corpus load_corpus(const std::string& path) {
  Corpus corpus;
  for (const auto& j : read_jsonl(path)) {
    const std::string where = path + " record";
    FunctionRecord rec;
    rec.id = get_field<std::string>(j, "id", where);
    rec.binary_id = get_field<std::string>(j, "binary_id", where);
    rec.address = get_field<std::uint64_t>(j, "address", where);
    if (j.contains("name_symbol")) {
      rec.name_symbol = get_field<std::string>(j, "name_symbol", where);
    }
    rec.pseudocode = get_field<std::string>(j, "pseudocode", where);
    rec.string_literals =
        get_field<std::vector<std::string>>(j, "string_literals", where);
    rec.callee_ids =
        get_field<std::vector<std::string>>(j, "callee_ids", where);
    rec.loc = get_field<std::uint64_t>(j, "loc", where);
    rec.is_thunk = get_field<bool>(j, "is_thunk", where);
    rec.is_virtual = get_field<bool>(j, "is_virtual", where);
    rec.tokens = tokenize(rec.pseudocode);
    corpus.add(std::move(rec));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::vector<ordered_json> rows;
  rows.reserve(corpus.size());
  for (const FunctionRecord& r : corpus.records()) {
    ordered_json j;
    j["id"] = r.id;
    j["binary_id"] = r.binary_id;
    j["address"] = r.address;
    if (r.name_symbol) j["name_symbol"] = *r.name_symbol;
    j["pseudocode"] = r.pseudocode;
    j["string_literals"] = r.string_literals;
    j["callee_ids"] = r.callee_ids;
    j["loc"] = r.loc;
    j["is_thunk"] = r.is_thunk;
    j["is_virtual"] = r.is_virtual;
    rows.push_back(std::move(j));
  }
  write_jsonl(rows, path);
}

std::vector<RawFunction> load_raw_functions(const std::string& path) {
  std::vector<RawFunction> out;
  for (const auto& j : read_jsonl(path)) {
    const std::string where = path + " record";
    RawFunction rf;
    rf.id = get_field<std::string>(j, "id", where);
    rf.pseudocode = get_field<std::string>(j, "pseudocode", where);
    if (j.contains("binary_id")) {
      rf.binary_id = get_field<std::string>(j, "binary_id", where);
    }
    if (j.contains("address")) {
      rf.address = get_field<std::uint64_t>(j, "address", where);
    }
    if (j.contains("is_thunk")) {
      rf.is_thunk = get_field<bool>(j, "is_thunk", where);
    }
    if (j.contains("is_virtual")) {
      rf.is_virtual = get_field<bool>(j, "is_virtual", where);
    }
    out.push_back(std::move(rf));
  }
  return out;
}

std::vector<SourceFunction> load_source_functions(const std::string& path) {
  std::vector<SourceFunction> out;
  for (const auto& j : read_jsonl(path)) {
    const std::string where = path + " record";
    SourceFunction f;
    f.id = get_field<std::string>(j, "id", where);
    f.project = get_field<std::string>(j, "project", where);
    f.version = get_field<std::string>(j, "version", where);
    f.path = get_field<std::string>(j, "path", where);
    f.name = get_field<std::string>(j, "name", where);
    f.code = get_field<std::string>(j, "code", where);
    f.loc = j.contains("loc") ? get_field<std::uint64_t>(j, "loc", where)
                              : count_lines(f.code);
    out.push_back(std::move(f));
  }
  return out;
}

void save_source_functions(const std::vector<SourceFunction>& fns,
                           const std::string& path) {
  std::vector<ordered_json> rows;
  rows.reserve(fns.size());
  for (const SourceFunction& f : fns) {
    ordered_json j;
    j["id"] = f.id;
    j["project"] = f.project;
    j["version"] = f.version;
    j["path"] = f.path;
    j["name"] = f.name;
    j["code"] = f.code;
    j["loc"] = f.loc;
    rows.push_back(std::move(j));
  }
  write_jsonl(rows, path);
}

std::vector<DescriptionLabel> load_descriptions(const std::string& path) {
  std::vector<DescriptionLabel> out;
  for (const auto& j : read_jsonl(path)) {
    const std::string where = path + " record";
    DescriptionLabel d;
    d.function_ref = get_field<std::string>(j, "function_ref", where);
    d.text_en = get_field<std::string>(j, "text_en", where);
    if (d.text_en.empty()) throw DataError(where + ": empty text_en");
    if (j.contains("text_cn")) {
      d.text_cn = get_field<std::string>(j, "text_cn", where);
    }
    d.grade = grade_from_string(get_field<std::string>(j, "grade", where));
    d.source = description_source_from_string(
        get_field<std::string>(j, "source", where));
    out.push_back(std::move(d));
  }
  return out;
}

void save_descriptions(const std::vector<DescriptionLabel>& descs,
                       const std::string& path) {
  std::vector<ordered_json> rows;
  rows.reserve(descs.size());
  for (const DescriptionLabel& d : descs) {
    ordered_json j;
    j["function_ref"] = d.function_ref;
    j["text_en"] = d.text_en;
    if (d.text_cn) j["text_cn"] = *d.text_cn;
    j["grade"] = to_string(d.grade);
    j["source"] = to_string(d.source);
    rows.push_back(std::move(j));
  }
  write_jsonl(rows, path);
}

}  // namespace binseek
