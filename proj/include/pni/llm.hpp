// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "pni/prompt.hpp"
#include "pni/wire.hpp"

namespace pni {

inline constexpr std::string_view kLlmApiKeyEnv = "PNI_LLM_API_KEY";

struct LlmConfig {
  /// Chat completions are POSTed to `{base_url}/chat/completions`.
  std::string base_url = "https://api.openai.com/v1";
  std::string model_name = "gpt-3.5-turbo";
  std::string api_key;
  double timeout_s = 60.0;
  int max_retries = 3;
  double temperature = 0.0;
  /// Delay before retry i (0-based) is backoff_base_s * 2^i.
  double backoff_base_s = 1.0;

  /// Throws kConfig.
  void check() const;
};

/// Completion source used by the edit engine.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string complete(const PromptBundle& prompt) = 0;
  virtual std::string_view id() const = 0;
};

/// OpenAI-style request body: model, temperature and the message list.
Json chat_request_body(const LlmConfig& config, const PromptBundle& prompt);

/// First choice's message content. Throws kLlmProtocol.
std::string parse_chat_response(std::string_view body);

class HttpLlmClient final : public LlmBackend {
 public:
  /// Throws kConfig on an invalid config or a missing api key.
  explicit HttpLlmClient(LlmConfig config);

  /// Retries network errors, 5xx and 429 up to max_retries times; then
  /// throws kLlmUnavailable. Other 4xx throw kLlmRejected at once; an
  /// unreadable body throws kLlmProtocol.
  std::string complete(const PromptBundle& prompt) override;
  std::string_view id() const override { return "http"; }

  const LlmConfig& config() const { return config_; }

 private:
  std::string redact(std::string text) const;

  LlmConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

enum class ExhaustionPolicy { kRepeatLast, kError };

struct StubScript {
  std::vector<std::string> completions;
  ExhaustionPolicy exhaustion = ExhaustionPolicy::kRepeatLast;
};

/// `{"completions": [...], "exhaustion": "repeat-last"|"error"}` or a bare
/// array of strings. Throws kConfig.
StubScript parse_stub_script(std::string_view text);
StubScript load_stub_script(const std::filesystem::path& path);

/// Replays canned completions in order. Calls are serialized.
class StubLlm final : public LlmBackend {
 public:
  /// Throws kConfig on an empty script.
  explicit StubLlm(StubScript script);

  /// Throws kStubExhausted past the end under the error policy.
  std::string complete(const PromptBundle& prompt) override;
  std::string_view id() const override { return "stub"; }

  std::size_t calls() const;
  std::vector<PromptBundle> prompts() const;

 private:
  mutable std::mutex mu_;
  StubScript script_;
  std::size_t next_ = 0;
  std::vector<PromptBundle> prompts_;
};

}  // namespace pni
