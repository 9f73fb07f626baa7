// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

#include "pni/oracle.hpp"

#include <algorithm>
#include <unordered_set>

#include "pni/error.hpp"
#include "text_util.hpp"

namespace pni {

std::string_view command_kind_name(CommandKind kind) {
  switch (kind) {
    case CommandKind::kMove: return "move";
    case CommandKind::kAdd: return "add";
    case CommandKind::kDelete: return "delete";
    case CommandKind::kRecaption: return "recaption";
  }
  return "unknown";
}

namespace {

struct TokenView {
  const std::string* text = nullptr;
  const Shape* shape = nullptr;
};

std::optional<std::vector<TokenView>> view_tokens(const MultimodalInstruction& instruction) {
  std::vector<TokenView> out;
  for (const auto& tok : instruction.tokens) {
    if (const auto* span = std::get_if<TextSpan>(&tok)) {
      if (detail::trim(span->text).empty()) continue;
      out.push_back({&span->text, nullptr});
    } else {
      auto it = instruction.shapes.find(std::get<ShapeRef>(tok).shape_id);
      if (it == instruction.shapes.end()) return std::nullopt;
      out.push_back({nullptr, &it->second});
    }
  }
  return out;
}

bool is_word(const TokenView& t, std::string_view word) {
  return t.text && detail::normalize_words(*t.text) == word;
}

// Text of the form "<head> <payload>" or "<payload> <tail>"; returns the
// payload verbatim (trimmed) when the keywords match case-insensitively.
std::optional<std::string> strip_keywords(const std::string& raw, std::string_view head,
                                          std::string_view tail) {
  std::string_view s = detail::trim(raw);
  auto starts_with_word = [](std::string_view text, std::string_view word) {
    return text.size() > word.size() && detail::to_lower(text.substr(0, word.size())) == word &&
           detail::is_space(text[word.size()]);
  };
  auto ends_with_word = [](std::string_view text, std::string_view word) {
    return text.size() > word.size() &&
           detail::to_lower(text.substr(text.size() - word.size())) == word &&
           detail::is_space(text[text.size() - word.size() - 1]);
  };
  if (!head.empty()) {
    if (!starts_with_word(s, head)) return std::nullopt;
    s = detail::trim(s.substr(head.size()));
  }
  if (!tail.empty()) {
    if (!ends_with_word(s, tail)) return std::nullopt;
    s = detail::trim(s.substr(0, s.size() - tail.size()));
  }
  if (s.empty()) return std::nullopt;
  return std::string(s);
}

bool is_destination(const Shape* s) { return s && (s->point() || s->box()); }

std::optional<Command> match(const std::vector<TokenView>& t) {
  if (t.size() == 4 && is_word(t[0], "move") && t[1].shape && t[1].shape->box() &&
      is_word(t[2], "to") && is_destination(t[3].shape)) {
    return Command{CommandKind::kMove, *t[1].shape->box(), *t[3].shape, {}};
  }
  if (t.size() == 2 && t[0].text && is_destination(t[1].shape)) {
    if (auto caption = strip_keywords(*t[0].text, "add", "at")) {
      return Command{CommandKind::kAdd, std::nullopt, *t[1].shape, *caption};
    }
  }
  if (t.size() == 2 && is_word(t[0], "delete") && t[1].shape && t[1].shape->box()) {
    return Command{CommandKind::kDelete, *t[1].shape->box(), std::nullopt, {}};
  }
  if (t.size() == 3 && is_word(t[0], "recaption") && t[1].shape && t[1].shape->box() &&
      t[2].text) {
    if (auto caption = strip_keywords(*t[2].text, "to", "")) {
      return Command{CommandKind::kRecaption, *t[1].shape->box(), std::nullopt, *caption};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Command> try_parse_command(const MultimodalInstruction& instruction) {
  auto tokens = view_tokens(instruction);
  if (!tokens) return std::nullopt;
  return match(*tokens);
}

Command parse_command(const MultimodalInstruction& instruction) {
  if (auto cmd = try_parse_command(instruction)) return *cmd;
  throw Error(ErrorCode::kNotOracleCommand, "not an oracle command");
}

std::vector<ObjectId> command_targets(const Layout& layout, const Command& command) {
  if (!command.selector) return {};
  return resolve_selection(layout, *command.selector);
}

namespace {

Point offset(const Point& from, const Point& to) { return {to.x - from.x, to.y - from.y}; }

SceneObject* find_mut(Layout& layout, ObjectId id) {
  auto it = std::find_if(layout.objects.begin(), layout.objects.end(),
                         [id](const SceneObject& o) { return o.id == id; });
  return it == layout.objects.end() ? nullptr : &*it;
}

void apply_move(Layout& out, const std::vector<ObjectId>& targets, const Shape& destination) {
  if (const auto* p = destination.point()) {
    for (ObjectId id : targets) {
      SceneObject* o = find_mut(out, id);
      o->box = move_center_to(o->box, *p, out.canvas);
    }
    return;
  }
  const BoundingBox& dest = *destination.box();
  SceneObject* leader = find_mut(out, targets.front());
  const Point delta = offset(leader->box.center(), dest.center());
  leader->box = clamp_to_canvas(dest, out.canvas);
  for (std::size_t i = 1; i < targets.size(); ++i) {
    SceneObject* o = find_mut(out, targets[i]);
    BoundingBox shifted = o->box;
    shifted.x += delta.x;
    shifted.y += delta.y;
    o->box = clamp_to_canvas(shifted, out.canvas);
  }
}

BoundingBox add_box(const Shape& destination, const Canvas& canvas) {
  if (const auto* b = destination.box()) return clamp_to_canvas(*b, canvas);
  const Point& p = *destination.point();
  const BoundingBox seed{0, 0, std::min(kDefaultAddSide, canvas.width),
                         std::min(kDefaultAddSide, canvas.height)};
  return move_center_to(seed, p, canvas);
}

}  // namespace

Layout apply_command(const Layout& layout, const Command& command) {
  Layout out = layout;
  if (command.kind == CommandKind::kAdd) {
    out.objects.push_back(
        SceneObject{layout.next_id(), command.caption, add_box(*command.destination, layout.canvas)});
    return out;
  }

  const std::vector<ObjectId> targets = command_targets(layout, command);
  if (targets.empty()) {
    throw Error(ErrorCode::kEmptySelection, "selection resolves to no object");
  }

  switch (command.kind) {
    case CommandKind::kMove:
      apply_move(out, targets, *command.destination);
      break;
    case CommandKind::kDelete: {
      const std::unordered_set<ObjectId> doomed(targets.begin(), targets.end());
      std::erase_if(out.objects, [&](const SceneObject& o) { return doomed.count(o.id) > 0; });
      break;
    }
    case CommandKind::kRecaption:
      for (ObjectId id : targets) find_mut(out, id)->caption = command.caption;
      break;
    case CommandKind::kAdd:
      break;
  }
  return out;
}

}  // namespace pni
