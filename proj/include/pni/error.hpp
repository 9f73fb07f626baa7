// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pni {

enum class ErrorCode {
  kInvalidArgument,
  kUnplaceableBox,
  kPointOutsideCanvas,
  kShapeSyntax,
  kShapeValidation,
  kDanglingReference,
  kInvalidInstruction,
  kJsonSyntax,
  kSchema,
  kInvariant,
  kNoLayoutFound,
  kNotOracleCommand,
  kEmptySelection,
  kCorpus,
  kIo,
  kLlmUnavailable,
  kLlmRejected,
  kLlmProtocol,
  kStubExhausted,
  kRendererUnavailable,
  kRendererRejected,
  kRendererProtocol,
  kUnknownSession,
  kNothingToUndo,
  kConfig,
};

/// Stable machine-readable name, e.g. "unplaceable-box".
std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library. `detail` carries a sub-kind where one
/// code covers several cases (e.g. "duplicate-id" under kInvariant); `offset`
/// is a byte position into the parsed input when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {},
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(message),
        code_(code),
        detail_(std::move(detail)),
        offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const { return error_code_name(code_); }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> offset_;
};

}  // namespace pni
