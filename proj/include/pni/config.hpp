// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pni/llm.hpp"
#include "pni/renderer.hpp"
#include "pni/validator.hpp"

namespace pni {

inline constexpr std::string_view kConfigPathEnv = "PNI_CONFIG";
/// Path to a stub script; when set the LLM runs in stub mode.
inline constexpr std::string_view kLlmStubEnv = "PNI_LLM_STUB";

enum class LlmMode { kLive, kStub };

struct ServiceConfig {
  struct Llm {
    LlmMode mode = LlmMode::kLive;
    LlmConfig client;
    std::filesystem::path stub_script;
  };
  struct Server {
    std::string bind_address = "127.0.0.1";
    /// 0 picks a free port.
    int port = 8080;
    std::filesystem::path data_dir = "pni-data";
  };
  struct Prompting {
    /// Unset means min(15, |corpus|).
    std::optional<std::size_t> k;
    std::filesystem::path corpus_path;
    /// Canvas for sessions created from a text prompt.
    Canvas canvas;
  };

  Llm llm;
  RenderBackendConfig renderer;
  Server server;
  Prompting prompting;
  ValidationOptions validation;
};

/// The corpus shipped with the source tree.
std::filesystem::path default_corpus_path();

/// Parses the JSON config. Relative paths resolve against `base_dir`.
/// Unknown keys are errors. Throws kConfig.
ServiceConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);

/// Reads the file named by PNI_CONFIG, else `path`, else defaults; then
/// applies PNI_LLM_API_KEY and PNI_LLM_STUB.
ServiceConfig load_config(const std::optional<std::filesystem::path>& path);

/// Environment overrides on an already parsed config.
void apply_environment(ServiceConfig& config);

}  // namespace pni
