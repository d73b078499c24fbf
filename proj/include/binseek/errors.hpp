// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace binseek {

/// File, serialization, or corpus-contract failure. CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Remote LLM endpoint unreachable or replied garbage. CLI exit code 3.
class ExternalServiceError : public std::runtime_error {
 public:
  explicit ExternalServiceError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Query plus target pseudocode alone exceed the reranker token budget.
class OutOfContextError : public std::runtime_error {
 public:
  explicit OutOfContextError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace binseek
