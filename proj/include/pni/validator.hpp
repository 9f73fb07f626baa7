// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pni/instruction.hpp"
#include "pni/layout.hpp"

namespace pni {

struct ValidationCheck {
  std::string rule_id;
  bool passed = true;
  std::string detail;

  friend bool operator==(const ValidationCheck&, const ValidationCheck&) = default;
};

/// `ok` is the conjunction of every check's `passed` flag.
struct ValidationReport {
  bool ok = true;
  std::vector<ValidationCheck> checks;

  void add(std::string rule_id, bool passed, std::string detail = {});
  const ValidationCheck* find(std::string_view rule_id) const;
  std::vector<std::string> failed_rules() const;
  std::size_t failure_count() const;

  friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

struct ValidationOptions {
  /// Move/Add tolerance as a fraction of the longer canvas side.
  double epsilon_fraction = 0.05;
  /// Off-canvas boxes that fit are shifted in and reported instead of failing.
  bool clamp_policy = true;
};

/// Rule ids reported by validate_structure.
inline constexpr std::string_view kRuleCanvasSize = "canvas-size";
inline constexpr std::string_view kRuleUniqueIds = "unique-ids";
inline constexpr std::string_view kRulePositiveBox = "positive-box";
inline constexpr std::string_view kRuleInCanvas = "in-canvas";
inline constexpr std::string_view kRuleCaption = "non-empty-caption";
/// Rule ids added by validate_edit.
inline constexpr std::string_view kRuleCanvasFixed = "canvas-fixed";
inline constexpr std::string_view kRuleBackground = "background";
inline constexpr std::string_view kRuleIdFresh = "id-fresh";
inline constexpr std::string_view kRuleFrame = "frame";
inline constexpr std::string_view kRuleOracle = "oracle";

/// True for the rules validate_structure emits.
bool is_structural_rule(std::string_view rule_id);

struct ClampResult {
  Layout layout;
  std::vector<ObjectId> clamped;
  std::vector<ObjectId> oversize;
};

/// Shifts every off-canvas box that fits back inside; oversize boxes are
/// left as they are and listed.
ClampResult clamp_layout(const Layout& layout);

/// Checks a possibly invalid layout. Never throws.
ValidationReport validate_structure(const Layout& layout, const ValidationOptions& options = {});

/// Checks that `after` is a plausible result of applying `instruction` to
/// `before`:
///   - structure rules on `after` (with the clamp policy);
///   - the canvas is unchanged;
///   - background changes are reported, never failed;
///   - new ids are above every id in `before`;
///   - frame: objects not selected by any drawn box (or arrow tail) are
///     unchanged. Vacuous for instructions without shapes;
///   - oracle, for instructions in the four-verb language: Delete and
///     Recaption must match the interpreter exactly; Move and Add must keep
///     the interpreter's sizes with centers within epsilon of its centers.
ValidationReport validate_edit(const Layout& before, const Layout& after,
                               const MultimodalInstruction& instruction,
                               const ValidationOptions& options = {});

}  // namespace pni
