// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/layout.hpp"

#include <algorithm>
#include <unordered_set>

#include <fmt/format.h>

#include "pni/error.hpp"

namespace pni {

const SceneObject* Layout::find(ObjectId id) const {
  auto it = std::find_if(objects.begin(), objects.end(),
                         [id](const SceneObject& o) { return o.id == id; });
  return it == objects.end() ? nullptr : &*it;
}

ObjectId Layout::next_id() const {
  ObjectId next = 0;
  for (const auto& o : objects) next = std::max(next, o.id + 1);
  return next;
}

bool caption_is_blank(std::string_view caption) {
  return caption.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

void check_layout_invariants(const Layout& layout) {
  if (!layout.canvas.valid()) {
    throw Error(ErrorCode::kInvariant,
                fmt::format("canvas too small: {}x{} (minimum {}x{})", layout.canvas.width,
                            layout.canvas.height, Canvas::kMinSide, Canvas::kMinSide),
                "canvas-too-small");
  }
  std::unordered_set<ObjectId> seen;
  for (const auto& o : layout.objects) {
    if (o.id < 0) {
      throw Error(ErrorCode::kInvariant, fmt::format("negative id {}", o.id), "negative-id");
    }
    if (!seen.insert(o.id).second) {
      throw Error(ErrorCode::kInvariant, fmt::format("duplicate id {}", o.id), "duplicate-id");
    }
    if (!o.box.valid()) {
      throw Error(ErrorCode::kInvariant, fmt::format("non-positive box for object {}", o.id),
                  "non-positive-box");
    }
    if (caption_is_blank(o.caption)) {
      throw Error(ErrorCode::kInvariant, fmt::format("empty caption for object {}", o.id),
                  "empty-caption");
    }
  }
}

std::vector<ObjectId> resolve_selection(const Layout& layout, const BoundingBox& selector) {
  const Ratio threshold(kSelectCoverageNum, kSelectCoverageDen);

  struct Scored {
    Ratio score;
    ObjectId id;
  };
  std::vector<Scored> hits;
  for (const auto& o : layout.objects) {
    Ratio c = coverage(selector, o.box);
    if (c >= threshold) hits.push_back({c, o.id});
  }
  if (!hits.empty()) {
    std::sort(hits.begin(), hits.end(), [](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.id < b.id;
    });
    std::vector<ObjectId> ids;
    ids.reserve(hits.size());
    for (const auto& h : hits) ids.push_back(h.id);
    return ids;
  }

  std::optional<Scored> best;
  for (const auto& o : layout.objects) {
    Ratio overlap = iou(selector, o.box);
    if (overlap.num() == 0) continue;
    if (!best || overlap > best->score || (overlap == best->score && o.id < best->id)) {
      best = Scored{overlap, o.id};
    }
  }
  if (!best) return {};
  return {best->id};
}

}  // namespace pni
