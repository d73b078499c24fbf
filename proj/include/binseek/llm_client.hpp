// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "binseek/corpus.hpp"

namespace binseek {

/// JSON-over-HTTP transport to a hosted LLM: POST {"prompt": ...} to the
/// endpoint, read {"text": ...} back. Provider specifics live behind this
/// little adapter.
struct LlmClientConfig {
  std::string endpoint;  // e.g. http://127.0.0.1:8089/generate
  int max_retries = 3;
  int backoff_base_ms = 100;
  int backoff_cap_ms = 2000;
  int timeout_s = 30;
};

/// Prompt asking for a one-sentence bilingual comment on a source function.
std::string render_generation_prompt(const SourceFunction& fn);

/// Prompt asking for an A-D quality grade of a generated description.
std::string render_discrimination_prompt(const SourceFunction& fn,
                                         const std::string& comment);

/// First fenced ```json block in a reply (falling back to the outermost
/// braced span), or nothing when none parses.
std::optional<std::string> extract_fenced_json(const std::string& reply);

/// Raw transport call with capped exponential backoff; throws
/// ExternalServiceError after retries are exhausted.
std::string llm_call(const LlmClientConfig& cfg, const std::string& prompt);

/// Generate a description for `fn` via the remote model. The reply must
/// carry an `en` key; `cn` is optional. Grade starts Ungraded.
DescriptionLabel llm_generate_description(const LlmClientConfig& cfg,
                                          const SourceFunction& fn);

/// Grade an existing description A-D via the remote model; replies outside
/// {A, B, C, D} are rejected.
Grade llm_grade_description(const LlmClientConfig& cfg,
                            const SourceFunction& fn,
                            const DescriptionLabel& label);

}  // namespace binseek
