// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/config.hpp"

#include <cstdlib>
#include <set>

#include <fmt/format.h>

#include "pni/error.hpp"
#include "pni/io.hpp"
#include "pni/wire.hpp"

#ifndef PNI_DEFAULT_CORPUS
#define PNI_DEFAULT_CORPUS "data/corpus/default_corpus.json"
#endif

namespace pni {

namespace {

[[noreturn]] void fail(const std::string& path, std::string_view what) {
  throw Error(ErrorCode::kConfig, fmt::format("config {}: {}", path, what), path);
}

void reject_unknown(const Json& section, const std::string& path,
                    std::initializer_list<std::string_view> known) {
  if (!section.is_object()) fail(path, "must be an object");
  for (const auto& [key, value] : section.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || k == key;
    if (!ok) fail(path + "." + key, "unknown key");
  }
}

std::string get_string(const Json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "must be a string");
  return v.get<std::string>();
}

double get_number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "must be a number");
  return v.get<double>();
}

std::int64_t get_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "must be an integer");
  return v.get<std::int64_t>();
}

bool get_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "must be a boolean");
  return v.get<bool>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void parse_llm(const Json& s, const std::filesystem::path& base, ServiceConfig::Llm& llm) {
  reject_unknown(s, "llm",
                 {"mode", "base_url", "model_name", "timeout_s", "max_retries", "temperature",
                  "backoff_s", "stub_script"});
  for (const auto& [key, v] : s.items()) {
    const std::string path = "llm." + key;
    if (key == "mode") {
      const std::string mode = get_string(v, path);
      if (mode == "live") {
        llm.mode = LlmMode::kLive;
      } else if (mode == "stub") {
        llm.mode = LlmMode::kStub;
      } else {
        fail(path, "must be \"live\" or \"stub\"");
      }
    } else if (key == "base_url") {
      llm.client.base_url = get_string(v, path);
    } else if (key == "model_name") {
      llm.client.model_name = get_string(v, path);
    } else if (key == "timeout_s") {
      llm.client.timeout_s = get_number(v, path);
    } else if (key == "max_retries") {
      llm.client.max_retries = static_cast<int>(get_int(v, path));
    } else if (key == "temperature") {
      llm.client.temperature = get_number(v, path);
    } else if (key == "backoff_s") {
      llm.client.backoff_base_s = get_number(v, path);
    } else if (key == "stub_script") {
      llm.stub_script = resolve(base, get_string(v, path));
    }
  }
}

void parse_renderer(const Json& s, RenderBackendConfig& r) {
  reject_unknown(s, "renderer", {"kind", "endpoint", "timeout_s", "max_in_flight"});
  for (const auto& [key, v] : s.items()) {
    const std::string path = "renderer." + key;
    if (key == "kind") {
      auto kind = parse_renderer_kind(get_string(v, path));
      if (!kind) fail(path, "must be \"mock\" or \"diffusion-http\"");
      r.kind = *kind;
    } else if (key == "endpoint") {
      r.endpoint = get_string(v, path);
    } else if (key == "timeout_s") {
      r.timeout_s = get_number(v, path);
    } else if (key == "max_in_flight") {
      r.max_in_flight = static_cast<int>(get_int(v, path));
    }
  }
}

void parse_server(const Json& s, const std::filesystem::path& base, ServiceConfig::Server& srv) {
  reject_unknown(s, "server", {"bind_address", "port", "data_dir"});
  for (const auto& [key, v] : s.items()) {
    const std::string path = "server." + key;
    if (key == "bind_address") {
      srv.bind_address = get_string(v, path);
    } else if (key == "port") {
      const auto port = get_int(v, path);
      if (port < 0 || port > 65535) fail(path, "must be in [0, 65535]");
      srv.port = static_cast<int>(port);
    } else if (key == "data_dir") {
      srv.data_dir = resolve(base, get_string(v, path));
    }
  }
}

void parse_prompting(const Json& s, const std::filesystem::path& base,
                     ServiceConfig::Prompting& p) {
  reject_unknown(s, "prompting", {"k", "corpus_path", "canvas"});
  for (const auto& [key, v] : s.items()) {
    const std::string path = "prompting." + key;
    if (key == "k") {
      const auto k = get_int(v, path);
      if (k < 1) fail(path, "must be at least 1");
      p.k = static_cast<std::size_t>(k);
    } else if (key == "corpus_path") {
      p.corpus_path = resolve(base, get_string(v, path));
    } else if (key == "canvas") {
      reject_unknown(v, path, {"width", "height"});
      if (v.contains("width")) p.canvas.width = get_int(v["width"], path + ".width");
      if (v.contains("height")) p.canvas.height = get_int(v["height"], path + ".height");
      if (!p.canvas.valid()) fail(path, fmt::format("sides must be at least {}", Canvas::kMinSide));
    }
  }
}

void parse_validation(const Json& s, ValidationOptions& o) {
  reject_unknown(s, "validation", {"epsilon_fraction", "clamp_policy"});
  for (const auto& [key, v] : s.items()) {
    const std::string path = "validation." + key;
    if (key == "epsilon_fraction") {
      o.epsilon_fraction = get_number(v, path);
      if (!(o.epsilon_fraction >= 0 && o.epsilon_fraction <= 1)) fail(path, "must be in [0, 1]");
    } else if (key == "clamp_policy") {
      o.clamp_policy = get_bool(v, path);
    }
  }
}

std::optional<std::string> env(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace

std::filesystem::path default_corpus_path() { return PNI_DEFAULT_CORPUS; }

ServiceConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  Json json;
  try {
    json = Json::parse(text.begin(), text.end());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig, fmt::format("config is not valid JSON: {}", e.what()));
  }
  ServiceConfig config;
  config.prompting.corpus_path = default_corpus_path();
  reject_unknown(json, "$", {"llm", "renderer", "server", "prompting", "validation"});
  if (json.contains("llm")) parse_llm(json["llm"], base_dir, config.llm);
  if (json.contains("renderer")) parse_renderer(json["renderer"], config.renderer);
  if (json.contains("server")) parse_server(json["server"], base_dir, config.server);
  if (json.contains("prompting")) parse_prompting(json["prompting"], base_dir, config.prompting);
  if (json.contains("validation")) parse_validation(json["validation"], config.validation);

  config.llm.client.check();
  config.renderer.check();
  if (config.llm.mode == LlmMode::kStub && config.llm.stub_script.empty()) {
    fail("llm.stub_script", "is required in stub mode");
  }
  return config;
}

void apply_environment(ServiceConfig& config) {
  if (auto key = env(kLlmApiKeyEnv)) config.llm.client.api_key = *key;
  if (auto stub = env(kLlmStubEnv)) {
    config.llm.mode = LlmMode::kStub;
    config.llm.stub_script = *stub;
  }
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& path) {
  std::optional<std::filesystem::path> chosen = path;
  if (auto from_env = env(kConfigPathEnv)) chosen = *from_env;
  ServiceConfig config;
  if (chosen) {
    config = parse_config(read_text_file(*chosen), chosen->parent_path());
  } else {
    config = parse_config("{}", {});
  }
  apply_environment(config);
  return config;
}

}  // namespace pni
