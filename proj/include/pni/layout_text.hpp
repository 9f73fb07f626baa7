// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "pni/layout.hpp"

namespace pni {

/// Line that separates chain-of-thought prose from the output layout.
inline constexpr std::string_view kOutputLayoutSentinel = "OUTPUT LAYOUT:";

/// Canonical layout document:
///
///   {
///     "canvas": {"width": 512, "height": 512},
///     "background": "a plain wall",
///     "objects": [
///       {"id": 0, "caption": "an orange", "box": {"x": 150, "y": 400, "width": 100, "height": 100}}
///     ]
///   }
///
/// Fixed key order, two-space indent, one object per line, no trailing
/// newline. Equal layouts always produce identical bytes.
std::string serialize_layout(const Layout& layout);

/// Strict parse. Keys may come in any order and unknown keys are ignored.
/// Errors are Error(kJsonSyntax) with a byte offset, Error(kSchema) for a
/// missing key, wrong type or out-of-range number, and Error(kInvariant) for
/// a layout that violates check_layout_invariants.
Layout parse_layout(std::string_view text);

/// Syntax and schema checks only; the result may violate layout invariants.
/// Used where violations are reported rather than rejected.
Layout parse_layout_unchecked(std::string_view text);

/// Pulls the layout text out of an LLM completion: everything after the last
/// `OUTPUT LAYOUT:` line, or failing that the last balanced top-level `{...}`.
/// Throws Error(kNoLayoutFound) when neither exists.
std::string extract_layout_block(std::string_view completion);

}  // namespace pni
