// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/llm.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "pni/error.hpp"
#include "pni/io.hpp"
#include "http_util.hpp"

namespace pni {

namespace {

[[noreturn]] void config_fail(std::string message) {
  throw Error(ErrorCode::kConfig, std::move(message), "llm");
}

}  // namespace

void LlmConfig::check() const {
  if (!(timeout_s > 0)) config_fail("llm timeout must be positive");
  if (max_retries < 0) config_fail("llm max_retries must be non-negative");
  if (!(temperature >= 0.0 && temperature <= 2.0)) config_fail("llm temperature must be in [0, 2]");
  if (!(backoff_base_s >= 0)) config_fail("llm backoff must be non-negative");
  if (model_name.empty()) config_fail("llm model_name is empty");
  if (!detail::split_url(base_url)) config_fail(fmt::format("llm base_url is not an http(s) URL: '{}'", base_url));
}

Json chat_request_body(const LlmConfig& config, const PromptBundle& prompt) {
  Json messages = Json::array();
  messages.push_back(Json{{"role", "system"}, {"content", prompt.system_text}});
  for (const auto& turn : prompt.turns) {
    messages.push_back(Json{{"role", std::string(role_name(turn.role))}, {"content", turn.content}});
  }
  return Json{{"model", config.model_name},
              {"temperature", config.temperature},
              {"messages", std::move(messages)}};
}

std::string parse_chat_response(std::string_view body) {
  auto fail = [](std::string why) -> std::string {
    throw Error(ErrorCode::kLlmProtocol, "llm protocol error", std::move(why));
  };
  Json json;
  try {
    json = Json::parse(body.begin(), body.end());
  } catch (const Json::exception&) {
    return fail("response is not JSON");
  }
  if (!json.is_object()) return fail("response is not an object");
  auto choices = json.find("choices");
  if (choices == json.end() || !choices->is_array() || choices->empty()) {
    return fail("response has no choices");
  }
  const Json& first = (*choices)[0];
  if (!first.is_object()) return fail("choice is not an object");
  auto message = first.find("message");
  if (message == first.end() || !message->is_object()) return fail("choice has no message");
  auto content = message->find("content");
  if (content == message->end() || !content->is_string()) return fail("message has no content");
  return content->get<std::string>();
}

HttpLlmClient::HttpLlmClient(LlmConfig config) : config_(std::move(config)) {
  config_.check();
  if (config_.api_key.empty()) config_fail(fmt::format("{} is not set", kLlmApiKeyEnv));
  const auto url = *detail::split_url(config_.base_url);
  scheme_host_port_ = url.origin;
  path_ = url.path + "/chat/completions";
}

std::string HttpLlmClient::redact(std::string text) const {
  if (config_.api_key.empty()) return text;
  for (std::size_t at = text.find(config_.api_key); at != std::string::npos;
       at = text.find(config_.api_key, at)) {
    text.replace(at, config_.api_key.size(), "[redacted]");
  }
  return text;
}

std::string HttpLlmClient::complete(const PromptBundle& prompt) {
  if (prompt.turns.empty()) throw Error(ErrorCode::kInvalidArgument, "prompt has no turns");
  const std::string body = chat_request_body(config_, prompt).dump();
  const httplib::Headers headers = {{"Authorization", "Bearer " + config_.api_key}};
  const int attempts = config_.max_retries + 1;
  std::string last_problem;

  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const double delay = config_.backoff_base_s * std::pow(2.0, attempt - 1);
      spdlog::warn("llm attempt {} failed ({}); retrying in {:.2f}s", attempt, last_problem, delay);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    httplib::Client client(scheme_host_port_);
    detail::set_timeouts(client, config_.timeout_s);
    spdlog::debug("llm request {} of {} to {}{}", attempt + 1, attempts, scheme_host_port_, path_);
    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_problem = redact(fmt::format("network error: {}", httplib::to_string(res.error())));
      continue;
    }
    const int status = res->status;
    if (status == 429 || status >= 500) {
      last_problem = fmt::format("HTTP {}", status);
      continue;
    }
    if (status < 200 || status >= 300) {
      throw Error(ErrorCode::kLlmRejected, "llm request rejected",
                  redact(fmt::format("HTTP {}: {}", status, detail::excerpt(res->body))));
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - started)
                        .count();
    spdlog::info("llm completion received in {} ms ({} bytes)", ms, res->body.size());
    try {
      return parse_chat_response(res->body);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), redact(e.detail()));
    }
  }
  spdlog::error("llm unavailable after {} attempts ({})", attempts, last_problem);
  throw Error(ErrorCode::kLlmUnavailable, "llm unavailable",
              fmt::format("{} attempts; last: {}", attempts, last_problem));
}

StubScript parse_stub_script(std::string_view text) {
  Json json;
  try {
    json = Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    config_fail(fmt::format("stub script is not valid JSON: {}", e.what()));
  }
  StubScript script;
  const Json* list = &json;
  if (json.is_object()) {
    auto it = json.find("completions");
    if (it == json.end()) config_fail("stub script is missing 'completions'");
    list = &*it;
    if (auto policy = json.find("exhaustion"); policy != json.end()) {
      if (*policy == "repeat-last") {
        script.exhaustion = ExhaustionPolicy::kRepeatLast;
      } else if (*policy == "error") {
        script.exhaustion = ExhaustionPolicy::kError;
      } else {
        config_fail("stub 'exhaustion' must be \"repeat-last\" or \"error\"");
      }
    }
  }
  if (!list->is_array()) config_fail("stub completions must be an array of strings");
  for (const auto& c : *list) {
    if (!c.is_string()) config_fail("stub completions must be an array of strings");
    script.completions.push_back(c.get<std::string>());
  }
  if (script.completions.empty()) config_fail("stub script has no completions");
  return script;
}

StubScript load_stub_script(const std::filesystem::path& path) {
  return parse_stub_script(read_text_file(path));
}

StubLlm::StubLlm(StubScript script) : script_(std::move(script)) {
  if (script_.completions.empty()) config_fail("stub script has no completions");
}

std::string StubLlm::complete(const PromptBundle& prompt) {
  std::lock_guard lock(mu_);
  prompts_.push_back(prompt);
  const std::size_t i = next_++;
  if (i < script_.completions.size()) return script_.completions[i];
  if (script_.exhaustion == ExhaustionPolicy::kError) {
    throw Error(ErrorCode::kStubExhausted, "stub script exhausted",
                fmt::format("{} completions, call {}", script_.completions.size(), i + 1));
  }
  return script_.completions.back();
}

std::size_t StubLlm::calls() const {
  std::lock_guard lock(mu_);
  return next_;
}

std::vector<PromptBundle> StubLlm::prompts() const {
  std::lock_guard lock(mu_);
  return prompts_;
}

}  // namespace pni
