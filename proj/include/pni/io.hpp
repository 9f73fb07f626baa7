// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace pni {

/// Throws kIo naming the path.
std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temp file, fsyncs it, renames it over `path` and
/// fsyncs the directory. Readers see the old or the new content, never a mix.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace pni
