// Copyright (c) 2026 The BinSeek Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "binseek/llm_client.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "binseek/errors.hpp"

namespace binseek {

namespace {

constexpr const char* kGenerationTemplate = R"(# Role
Imagine you are an experienced software developer.

# Task
The user will provide a source code function and its basic information each time.
Your task is to analyze its semantics and generate a comment to the function.
The comment should be a brief description of the function in one sentence.

# Rules
When you are generating the comment, please follow the rules below:

1. Comment should be accurate, precise, and helpful for code understanding.
2. You can refer to the original comments in the source code, but you cannot directly copy the original comments.
3. You also need to provide a Chinese version, which should have the same meaning as the English version.
4. You need to write comments into a JSON format string, for example:
```json
{
    "en": "Brief description of the function in one sentence",
    "cn": "The chinese version of the description"
}
```

# Input

Here is a source code from {path} file in the {project} {version} project:
```C/C++
{code}
```

You should generate a comment for the function named `{func_name}`.

Start generating
)";

constexpr const char* kDiscriminationTemplate = R"(# Role
Imagine you are an experienced software developer and code reviewer.

# Task
The user will provide a C/C++ source code function and a generated natural language description (comment) for it.
Your task is to evaluate the quality of the generated description based on its accuracy, relevance, and conciseness.

# Rules
Please rate the description on a scale from A to D based on the following criteria:

- **A (Excellent)**: The description is accurate, precise, and captures the core functionality perfectly without errors.
- **B (Good)**: The description is generally accurate and helpful, but may miss minor details or contains slight redundancy.
- **C (Fair)**: The description is vague, too generic, or contains minor inaccuracies/irrelevant content.
- **D (Poor)**: The description is factually incorrect, completely irrelevant, hallucinations, or consists of meaningless repetition.

You need to write the evaluation result into a JSON format string:
```json
{
    "score": "A",
    "reason": "Brief explanation of the rating"
}
```

# Input

Here is a source code from {path} file in the {project} {version} project:
```C/C++
{code}
```

The comment is generated for the function named `{func_name}`.

Here is the generated description:
```
{comment}
```

Start evaluating
)";

std::string replace_all(std::string text, const std::string& needle,
                        const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), value);
    pos += value.size();
  }
  return text;
}

std::string render_common(std::string text, const SourceFunction& fn) {
  text = replace_all(std::move(text), "{path}", fn.path);
  text = replace_all(std::move(text), "{project}", fn.project);
  text = replace_all(std::move(text), "{version}", fn.version);
  text = replace_all(std::move(text), "{code}", fn.code);
  text = replace_all(std::move(text), "{func_name}", fn.name);
  return text;
}

struct ParsedEndpoint {
  std::string host_port;  // scheme://host:port for httplib
  std::string path;
};

ParsedEndpoint parse_endpoint(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ExternalServiceError("invalid endpoint url: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

nlohmann::json parse_reply_json(const std::string& reply,
                                const std::string& what) {
  const auto fenced = extract_fenced_json(reply);
  if (!fenced) {
    throw ExternalServiceError(what + ": no parseable JSON in reply: " + reply);
  }
  try {
    return nlohmann::json::parse(*fenced);
  } catch (const nlohmann::json::exception& e) {
    throw ExternalServiceError(what + ": bad JSON in reply (" + e.what() +
                               "): " + reply);
  }
}

}  // namespace

std::string render_generation_prompt(const SourceFunction& fn) {
  return render_common(kGenerationTemplate, fn);
}

std::string render_discrimination_prompt(const SourceFunction& fn,
                                         const std::string& comment) {
  std::string text = render_common(kDiscriminationTemplate, fn);
  return replace_all(std::move(text), "{comment}", comment);
}

std::optional<std::string> extract_fenced_json(const std::string& reply) {
  const std::string fence = "```json";
  std::size_t start = reply.find(fence);
  std::size_t body_start;
  if (start != std::string::npos) {
    body_start = start + fence.size();
  } else {
    start = reply.find("```");
    if (start == std::string::npos) {
      // No fence at all: take the outermost braced span.
      const std::size_t open = reply.find('{');
      const std::size_t close = reply.rfind('}');
      if (open == std::string::npos || close == std::string::npos ||
          close < open) {
        return std::nullopt;
      }
      return reply.substr(open, close - open + 1);
    }
    body_start = start + 3;
  }
  const std::size_t end = reply.find("```", body_start);
  if (end == std::string::npos) return std::nullopt;
  return reply.substr(body_start, end - body_start);
}

std::string llm_call(const LlmClientConfig& cfg, const std::string& prompt) {
  const ParsedEndpoint ep = parse_endpoint(cfg.endpoint);
  nlohmann::json body;
  body["prompt"] = prompt;
  const std::string payload = body.dump();

  std::string last_error;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) {
      const int delay = std::min(cfg.backoff_cap_ms,
                                 cfg.backoff_base_ms * (1 << (attempt - 1)));
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    httplib::Client client(ep.host_port);
    client.set_connection_timeout(cfg.timeout_s, 0);
    client.set_read_timeout(cfg.timeout_s, 0);
    auto res = client.Post(ep.path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "http status " + std::to_string(res->status);
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(res->body);
      if (!j.contains("text") || !j["text"].is_string()) {
        throw ExternalServiceError(
            "llm reply missing 'text' field: " + res->body);
      }
      return j["text"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ExternalServiceError("llm reply is not JSON (" +
                                 std::string(e.what()) + "): " + res->body);
    }
  }
  throw ExternalServiceError("llm endpoint " + cfg.endpoint +
                             " unreachable after " +
                             std::to_string(cfg.max_retries + 1) +
                             " attempts (" + last_error + ")");
}

DescriptionLabel llm_generate_description(const LlmClientConfig& cfg,
                                          const SourceFunction& fn) {
  const std::string reply = llm_call(cfg, render_generation_prompt(fn));
  const nlohmann::json j = parse_reply_json(reply, "llm_generate_description");
  if (!j.contains("en") || !j["en"].is_string() ||
      j["en"].get<std::string>().empty()) {
    throw ExternalServiceError(
        "llm_generate_description: reply missing 'en': " + reply);
  }
  DescriptionLabel label;
  label.function_ref = fn.id;
  label.text_en = j["en"].get<std::string>();
  if (j.contains("cn") && j["cn"].is_string()) {
    label.text_cn = j["cn"].get<std::string>();
  }
  label.grade = Grade::Ungraded;
  label.source = DescriptionSource::Llm;
  return label;
}

Grade llm_grade_description(const LlmClientConfig& cfg,
                            const SourceFunction& fn,
                            const DescriptionLabel& label) {
  const std::string reply =
      llm_call(cfg, render_discrimination_prompt(fn, label.text_en));
  const nlohmann::json j = parse_reply_json(reply, "llm_grade_description");
  if (!j.contains("score") || !j["score"].is_string()) {
    throw ExternalServiceError(
        "llm_grade_description: reply missing 'score': " + reply);
  }
  const std::string score = j["score"].get<std::string>();
  if (score == "A") return Grade::A;
  if (score == "B") return Grade::B;
  if (score == "C") return Grade::C;
  if (score == "D") return Grade::D;
  throw ExternalServiceError("llm_grade_description: grade outside A-D: " +
                             score);
}

}  // namespace binseek
