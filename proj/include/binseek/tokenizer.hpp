// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace binseek {

enum class TokenKind : std::uint8_t {
  Identifier,
  Number,
  String,
  Op,
  Punct,
};

const char* to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;

  bool operator==(const Token&) const = default;
};

/// Lexical split of C-like decompiler pseudocode. Whitespace and comments
/// are discarded; string-literal content is kept verbatim (quotes stripped,
/// escapes untouched). Never fails: unrecognized bytes come out as
/// single-character Punct tokens, empty input yields an empty sequence.
std::vector<Token> tokenize(std::string_view text);

/// Number of newline-delimited lines ("" has 0, trailing newline adds none).
std::uint64_t count_lines(std::string_view text);

}  // namespace binseek
