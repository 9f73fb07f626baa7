// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pni/geometry.hpp"

namespace pni {

using ObjectId = std::int64_t;

struct SceneObject {
  ObjectId id = 0;
  std::string caption;
  BoundingBox box;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

/// An image described as a background caption plus captioned boxes. Object
/// order is meaningful and preserved by every operation that keeps objects.
struct Layout {
  Canvas canvas;
  std::string background;
  std::vector<SceneObject> objects;

  const SceneObject* find(ObjectId id) const;
  /// max(id) + 1, or 0 for an empty layout.
  ObjectId next_id() const;

  friend bool operator==(const Layout&, const Layout&) = default;
};

/// Selection results with coverage at or above this ratio are multi-selected.
inline constexpr std::int64_t kSelectCoverageNum = 7;
inline constexpr std::int64_t kSelectCoverageDen = 10;

/// True when the caption is empty or all whitespace.
bool caption_is_blank(std::string_view caption);

/// Throws Error(kInvariant) naming the first violated invariant: canvas too
/// small, duplicate id, non-positive box, empty caption, or negative id.
void check_layout_invariants(const Layout& layout);

/// Objects selected by a user-drawn box: every object with coverage >= 0.7,
/// by descending coverage then ascending id. When none qualifies, the single
/// object with the largest positive IoU (lowest id on ties). May be empty.
std::vector<ObjectId> resolve_selection(const Layout& layout, const BoundingBox& selector);

}  // namespace pni
