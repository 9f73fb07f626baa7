// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/validator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "pni/error.hpp"
#include "pni/oracle.hpp"
#include "text_util.hpp"

namespace pni {

void ValidationReport::add(std::string rule_id, bool passed, std::string detail) {
  checks.push_back({std::move(rule_id), passed, std::move(detail)});
  ok = ok && passed;
}

const ValidationCheck* ValidationReport::find(std::string_view rule_id) const {
  for (const auto& c : checks) {
    if (c.rule_id == rule_id) return &c;
  }
  return nullptr;
}

std::vector<std::string> ValidationReport::failed_rules() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.rule_id);
  }
  return out;
}

std::size_t ValidationReport::failure_count() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

bool is_structural_rule(std::string_view rule_id) {
  return rule_id == kRuleCanvasSize || rule_id == kRuleUniqueIds ||
         rule_id == kRulePositiveBox || rule_id == kRuleInCanvas || rule_id == kRuleCaption;
}

ClampResult clamp_layout(const Layout& layout) {
  ClampResult result{layout, {}, {}};
  for (auto& o : result.layout.objects) {
    if (!o.box.valid() || layout.canvas.contains(o.box)) continue;
    if (o.box.width > layout.canvas.width || o.box.height > layout.canvas.height) {
      result.oversize.push_back(o.id);
      continue;
    }
    o.box = clamp_to_canvas(o.box, layout.canvas);
    result.clamped.push_back(o.id);
  }
  return result;
}

namespace {

std::string id_list(std::string_view what, const std::vector<ObjectId>& ids) {
  return fmt::format("{} {}", what, fmt::join(ids, ", "));
}

std::string clamp_detail(const std::vector<ObjectId>& ids) {
  std::vector<std::string> parts;
  for (ObjectId id : ids) parts.push_back(fmt::format("clamped object {}", id));
  return fmt::format("{}", fmt::join(parts, "; "));
}

}  // namespace

ValidationReport validate_structure(const Layout& layout, const ValidationOptions& options) {
  ValidationReport report;

  report.add(std::string(kRuleCanvasSize), layout.canvas.valid(),
             layout.canvas.valid() ? "" : fmt::format("canvas {}x{} below {} px",
                                                      layout.canvas.width, layout.canvas.height,
                                                      Canvas::kMinSide));

  std::set<ObjectId> seen;
  std::vector<ObjectId> duplicates, negative, degenerate, blank, outside;
  for (const auto& o : layout.objects) {
    if (!seen.insert(o.id).second) duplicates.push_back(o.id);
    if (o.id < 0) negative.push_back(o.id);
    if (!o.box.valid()) degenerate.push_back(o.id);
    if (caption_is_blank(o.caption)) blank.push_back(o.id);
  }
  std::string id_detail;
  if (!duplicates.empty()) id_detail = id_list("duplicate id", duplicates);
  if (!negative.empty()) {
    if (!id_detail.empty()) id_detail += "; ";
    id_detail += id_list("negative id", negative);
  }
  report.add(std::string(kRuleUniqueIds), duplicates.empty() && negative.empty(), id_detail);
  report.add(std::string(kRulePositiveBox), degenerate.empty(),
             degenerate.empty() ? "" : id_list("non-positive box on object", degenerate));

  const ClampResult clamp = clamp_layout(layout);
  if (options.clamp_policy) {
    std::string detail = clamp_detail(clamp.clamped);
    if (!clamp.oversize.empty()) {
      if (!detail.empty()) detail += "; ";
      detail += id_list("larger than canvas: object", clamp.oversize);
    }
    report.add(std::string(kRuleInCanvas), clamp.oversize.empty(), std::move(detail));
  } else {
    std::vector<ObjectId> all = clamp.clamped;
    all.insert(all.end(), clamp.oversize.begin(), clamp.oversize.end());
    std::sort(all.begin(), all.end());
    report.add(std::string(kRuleInCanvas), all.empty(),
               all.empty() ? "" : id_list("outside canvas: object", all));
  }

  report.add(std::string(kRuleCaption), blank.empty(),
             blank.empty() ? "" : id_list("empty caption on object", blank));
  return report;
}

namespace {

bool mentions_background(const MultimodalInstruction& instruction) {
  const std::string text = detail::to_lower(instruction.plain_text());
  return text.find("background") != std::string::npos;
}

// Object ids a drawn shape may legitimately touch: boxes select through
// resolve_selection, arrows through the object under their tail. Points are
// destinations and select nothing.
std::unordered_set<ObjectId> selected_by_shapes(const Layout& before,
                                                const MultimodalInstruction& instruction) {
  std::unordered_set<ObjectId> out;
  for (const Shape* shape : instruction.referenced_shapes()) {
    std::vector<ObjectId> ids;
    if (const auto* b = shape->box()) {
      ids = resolve_selection(before, *b);
    } else if (const auto* a = shape->arrow()) {
      ids = resolve_selection(before, BoundingBox{a->from.x, a->from.y, 1, 1});
    }
    out.insert(ids.begin(), ids.end());
  }
  return out;
}

void check_frame(const Layout& before, const Layout& after,
                 const MultimodalInstruction& instruction, ValidationReport& report) {
  if (!instruction.has_refs()) {
    report.add(std::string(kRuleFrame), true, "not applicable: instruction has no shapes");
    return;
  }
  const auto selected = selected_by_shapes(before, instruction);
  std::vector<std::string> problems;
  for (const auto& o : before.objects) {
    if (selected.count(o.id)) continue;
    const SceneObject* now = after.find(o.id);
    if (!now) {
      problems.push_back(fmt::format("object {} removed", o.id));
    } else if (!(*now == o)) {
      problems.push_back(fmt::format("object {} changed", o.id));
    }
  }
  report.add(std::string(kRuleFrame), problems.empty(), fmt::format("{}", fmt::join(problems, "; ")));
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
  const Point ca = a.center(), cb = b.center();
  return std::hypot(static_cast<double>(ca.x - cb.x), static_cast<double>(ca.y - cb.y));
}

// Same size, center within epsilon.
std::optional<std::string> near_box(const SceneObject& got, const SceneObject& want,
                                    double epsilon) {
  if (got.box.width != want.box.width || got.box.height != want.box.height) {
    return fmt::format("object {} size {}x{}, expected {}x{}", got.id, got.box.width,
                       got.box.height, want.box.width, want.box.height);
  }
  const double d = center_distance(got.box, want.box);
  if (d > epsilon) {
    return fmt::format("object {} center off by {:.1f} px (limit {:.1f})", got.id, d, epsilon);
  }
  if (got.caption != want.caption) return fmt::format("object {} caption changed", got.id);
  return std::nullopt;
}

std::vector<std::string> compare_move(const Layout& expected, const Layout& after,
                                      double epsilon) {
  std::vector<std::string> problems;
  if (expected.objects.size() != after.objects.size()) {
    problems.push_back(fmt::format("expected {} objects, got {}", expected.objects.size(),
                                   after.objects.size()));
  }
  for (const auto& want : expected.objects) {
    const SceneObject* got = after.find(want.id);
    if (!got) {
      problems.push_back(fmt::format("object {} missing", want.id));
    } else if (auto p = near_box(*got, want, epsilon)) {
      problems.push_back(*p);
    }
  }
  return problems;
}

std::vector<std::string> compare_add(const Layout& before, const Layout& expected,
                                     const Layout& after, double epsilon) {
  std::vector<std::string> problems;
  std::vector<const SceneObject*> fresh;
  for (const auto& o : after.objects) {
    if (!before.find(o.id)) fresh.push_back(&o);
  }
  for (const auto& o : before.objects) {
    if (!after.find(o.id)) problems.push_back(fmt::format("object {} missing", o.id));
  }
  if (fresh.size() != 1) {
    problems.push_back(fmt::format("expected 1 new object, got {}", fresh.size()));
    return problems;
  }
  SceneObject want = expected.objects.back();
  want.id = fresh.front()->id;
  if (auto p = near_box(*fresh.front(), want, epsilon)) problems.push_back(*p);
  return problems;
}

void check_oracle(const Layout& before, const Layout& after, const Command& cmd,
                  const ValidationOptions& options, ValidationReport& report) {
  const std::string rule(kRuleOracle);
  Layout expected;
  try {
    expected = apply_command(before, cmd);
  } catch (const Error& e) {
    report.add(rule, false, fmt::format("oracle cannot apply {}: {}", command_kind_name(cmd.kind),
                                        e.what()));
    return;
  }
  const double epsilon =
      options.epsilon_fraction *
      static_cast<double>(std::max(before.canvas.width, before.canvas.height));

  std::vector<std::string> problems;
  switch (cmd.kind) {
    case CommandKind::kDelete:
    case CommandKind::kRecaption:
      if (!(after == expected)) problems.push_back("differs from oracle result");
      break;
    case CommandKind::kMove:
      problems = compare_move(expected, after, epsilon);
      break;
    case CommandKind::kAdd:
      problems = compare_add(before, expected, after, epsilon);
      break;
  }
  const std::string head = fmt::format("{}", command_kind_name(cmd.kind));
  report.add(rule, problems.empty(),
             problems.empty() ? head : fmt::format("{}: {}", head, fmt::join(problems, "; ")));
}

}  // namespace

ValidationReport validate_edit(const Layout& before, const Layout& after,
                               const MultimodalInstruction& instruction,
                               const ValidationOptions& options) {
  ValidationReport report = validate_structure(after, options);

  const bool canvas_same = before.canvas == after.canvas;
  report.add(std::string(kRuleCanvasFixed), canvas_same,
             canvas_same ? "" : fmt::format("canvas {}x{} became {}x{}", before.canvas.width,
                                            before.canvas.height, after.canvas.width,
                                            after.canvas.height));

  if (before.background == after.background) {
    report.add(std::string(kRuleBackground), true);
  } else {
    const bool expected = !instruction.has_refs() && mentions_background(instruction);
    report.add(std::string(kRuleBackground), true,
               expected ? "background changed; instruction mentions the background"
                        : "background changed without a background instruction (advisory)");
  }

  const ObjectId floor = before.next_id();
  std::vector<ObjectId> reused;
  for (const auto& o : after.objects) {
    if (!before.find(o.id) && o.id < floor) reused.push_back(o.id);
  }
  report.add(std::string(kRuleIdFresh), reused.empty(),
             reused.empty() ? "" : fmt::format("new object reuses id below {}: {}", floor,
                                               fmt::join(reused, ", ")));

  check_frame(before, after, instruction, report);

  if (auto cmd = try_parse_command(instruction)) {
    check_oracle(before, after, *cmd, options, report);
  }
  return report;
}

}  // namespace pni
