// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pni/error.hpp"

namespace pni {

/// Exit codes of the `pni` tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;       // validation or instruction failure
inline constexpr int kExitEnvironment = 2;  // config, I/O or backend failure

/// Exit code an error maps to.
int exit_code_for(ErrorCode code);

/// Runs the tool. `args` excludes the program name. Results go to `out`,
/// JSON errors to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pni
