// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

// JSON encodings shared by the HTTP API, session files and the CLI.

#pragma once

#include <json.hpp>

#include "pni/error.hpp"
#include "pni/instruction.hpp"
#include "pni/layout.hpp"
#include "pni/validator.hpp"

namespace pni {

using Json = nlohmann::ordered_json;

Json layout_to_json(const Layout& layout);
/// Schema-checked decode; `check_invariants` additionally applies
/// check_layout_invariants.
Layout layout_from_json(const Json& json, bool check_invariants = true);

/// {"kind": "box", "x": .., "y": .., "width": .., "height": ..},
/// {"kind": "point", "x": .., "y": ..} or
/// {"kind": "arrow", "from": {"x", "y"}, "to": {"x", "y"}}.
Json shape_to_json(const Shape& shape);
Shape shape_from_json(const Json& json);

/// {"tokens": [{"text": ..} | {"ref": ..}], "shapes": {id: shape}}.
Json instruction_to_json(const MultimodalInstruction& instruction);
/// Decodes and runs check_instruction.
MultimodalInstruction instruction_from_json(const Json& json);

/// {"error": {"code": .., "message": .., "detail"?: .., "offset"?: ..}}.
Json error_to_json(const Error& error);

Json report_to_json(const ValidationReport& report);
ValidationReport report_from_json(const Json& json);

}  // namespace pni
