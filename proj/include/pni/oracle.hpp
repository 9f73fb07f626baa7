// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pni/instruction.hpp"
#include "pni/layout.hpp"

namespace pni {

// Deterministic interpreter for the four-verb edit language:
//
//   move SHAPE to SHAPE
//   add <caption> at SHAPE
//   delete SHAPE
//   recaption SHAPE to <caption>
//
// Keywords match case-insensitively; captions are kept verbatim.

enum class CommandKind { kMove, kAdd, kDelete, kRecaption };

std::string_view command_kind_name(CommandKind kind);

/// Side length of a point-anchored Add, capped by the canvas.
inline constexpr std::int64_t kDefaultAddSide = 128;

struct Command {
  CommandKind kind = CommandKind::kMove;
  /// Move, Delete, Recaption.
  std::optional<BoundingBox> selector;
  /// Move, Add: a point or a box.
  std::optional<Shape> destination;
  /// Add, Recaption.
  std::string caption;

  friend bool operator==(const Command&, const Command&) = default;
};

/// Throws Error(kNotOracleCommand) for anything outside the four patterns,
/// including a non-box selector or an arrow destination.
Command parse_command(const MultimodalInstruction& instruction);

/// Same as parse_command but returns nullopt instead of throwing.
std::optional<Command> try_parse_command(const MultimodalInstruction& instruction);

/// Ids the command acts on in `layout` (empty for Add).
std::vector<ObjectId> command_targets(const Layout& layout, const Command& command);

/// Applies the command. Objects it does not select come through unchanged, as
/// do canvas and background.
///   Move to point: each selected box is centered on the point and clamped.
///   Move to box:   the first selected object adopts the box (clamped); the
///                  rest shift by the same center offset (clamped).
///   Add:           appends id = next_id() with the destination box, or a
///                  128x128 box centered on a point destination (clamped).
///   Delete:        removes selected objects.
///   Recaption:     replaces captions of selected objects.
/// Errors: kEmptySelection ("selection resolves to no object"), plus
/// kUnplaceableBox / kPointOutsideCanvas from the geometry helpers.
Layout apply_command(const Layout& layout, const Command& command);

}  // namespace pni
