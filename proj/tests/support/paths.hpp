// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

namespace pni::testing {

inline std::filesystem::path source_dir() { return PNI_SOURCE_DIR; }

inline std::filesystem::path default_corpus_path() {
  return source_dir() / "data" / "corpus" / "default_corpus.json";
}

}  // namespace pni::testing
