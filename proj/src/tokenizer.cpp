// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/tokenizer.hpp"

#include <array>
#include <cctype>

namespace binseek {

namespace {

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_digit(char c) {
  return std::isdigit(static_cast<unsigned char>(c));
}

inline bool is_hex_digit(char c) {
  return std::isxdigit(static_cast<unsigned char>(c));
}

constexpr std::array<std::string_view, 4> kThreeCharOps = {"<<=", ">>=", "->*",
                                                           "..."};
constexpr std::array<std::string_view, 20> kTwoCharOps = {
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "::"};
constexpr std::string_view kOneCharOps = "+-*/%=<>!&|^~.?";

}  // namespace

const char* to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "ident";
    case TokenKind::Number: return "num";
    case TokenKind::String: return "string";
    case TokenKind::Op: return "op";
    case TokenKind::Punct: return "punct";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  auto peek = [&](std::size_t k) { return i + k < n ? s[i + k] : '\0'; };

  while (i < n) {
    const char c = s[i];

    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }

    if (c == '/' && peek(1) == '/') {
      while (i < n && s[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && peek(1) == '*') {
      i += 2;
      while (i + 1 < n && !(s[i] == '*' && s[i + 1] == '/')) ++i;
      i = (i + 1 < n) ? i + 2 : n;
      continue;
    }

    if (c == '"') {
      ++i;
      std::string content;
      while (i < n && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < n) {
          content.push_back(s[i]);
          content.push_back(s[i + 1]);
          i += 2;
        } else {
          content.push_back(s[i]);
          ++i;
        }
      }
      if (i < n) ++i;  // closing quote; unterminated literal takes the rest
      out.push_back({TokenKind::String, std::move(content)});
      continue;
    }

    if (c == '\'') {
      // Character constants are integral in C; classify as Number.
      ++i;
      std::string content;
      while (i < n && s[i] != '\'') {
        if (s[i] == '\\' && i + 1 < n) {
          content.push_back(s[i]);
          content.push_back(s[i + 1]);
          i += 2;
        } else {
          content.push_back(s[i]);
          ++i;
        }
      }
      if (i < n) ++i;
      out.push_back({TokenKind::Number, std::move(content)});
      continue;
    }

    if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < n && is_ident_char(s[i])) ++i;
      out.push_back({TokenKind::Identifier, std::string(s.substr(start, i - start))});
      continue;
    }

    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) {
      std::size_t start = i;
      if (c == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
        i += 2;
        while (i < n && (is_hex_digit(s[i]) || s[i] == '\'')) ++i;
        // Hex float exponent.
        if (i < n && (s[i] == 'p' || s[i] == 'P')) {
          ++i;
          if (i < n && (s[i] == '+' || s[i] == '-')) ++i;
          while (i < n && is_digit(s[i])) ++i;
        }
      } else {
        while (i < n && is_digit(s[i])) ++i;
        if (i < n && s[i] == '.') {
          ++i;
          while (i < n && is_digit(s[i])) ++i;
        }
        if (i < n && (s[i] == 'e' || s[i] == 'E')) {
          if (is_digit(peek(1)) ||
              ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2)))) {
            ++i;
            if (s[i] == '+' || s[i] == '-') ++i;
            while (i < n && is_digit(s[i])) ++i;
          }
        }
      }
      while (i < n && (s[i] == 'u' || s[i] == 'U' || s[i] == 'l' ||
                       s[i] == 'L' || s[i] == 'f' || s[i] == 'F')) {
        ++i;
      }
      out.push_back({TokenKind::Number, std::string(s.substr(start, i - start))});
      continue;
    }

    bool matched = false;
    for (auto op : kThreeCharOps) {
      if (s.substr(i, 3) == op) {
        out.push_back({TokenKind::Op, std::string(op)});
        i += 3;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (auto op : kTwoCharOps) {
      if (s.substr(i, 2) == op) {
        out.push_back({TokenKind::Op, std::string(op)});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;

    if (kOneCharOps.find(c) != std::string_view::npos) {
      out.push_back({TokenKind::Op, std::string(1, c)});
    } else {
      // Known punctuation and any stray byte both land here.
      out.push_back({TokenKind::Punct, std::string(1, c)});
    }
    ++i;
  }
  return out;
}

std::uint64_t count_lines(std::string_view text) {
  if (text.empty()) return 0;
  std::uint64_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  if (text.back() != '\n') ++lines;
  return lines;
}

}  // namespace binseek
