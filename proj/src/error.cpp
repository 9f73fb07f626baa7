// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/error.hpp"

namespace pni {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kUnplaceableBox: return "unplaceable-box";
    case ErrorCode::kPointOutsideCanvas: return "point-outside-canvas";
    case ErrorCode::kShapeSyntax: return "shape-syntax";
    case ErrorCode::kShapeValidation: return "shape-validation";
    case ErrorCode::kDanglingReference: return "dangling-shape-reference";
    case ErrorCode::kInvalidInstruction: return "invalid-instruction";
    case ErrorCode::kJsonSyntax: return "json-syntax";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kInvariant: return "invariant";
    case ErrorCode::kNoLayoutFound: return "no-layout-found";
    case ErrorCode::kNotOracleCommand: return "not-oracle-command";
    case ErrorCode::kEmptySelection: return "empty-selection";
    case ErrorCode::kCorpus: return "corpus";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kLlmUnavailable: return "llm-unavailable";
    case ErrorCode::kLlmRejected: return "llm-rejected";
    case ErrorCode::kLlmProtocol: return "llm-protocol";
    case ErrorCode::kStubExhausted: return "stub-exhausted";
    case ErrorCode::kRendererUnavailable: return "renderer-unavailable";
    case ErrorCode::kRendererRejected: return "renderer-rejected";
    case ErrorCode::kRendererProtocol: return "renderer-protocol";
    case ErrorCode::kUnknownSession: return "unknown-session";
    case ErrorCode::kNothingToUndo: return "nothing-to-undo";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace pni
