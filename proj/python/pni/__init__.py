# Copyright 2026 The pni Authors
# SPDX-License-Identifier: Apache-2.0
"""Layout parsing, the four-verb interpreter, validation and mock rendering.

Layouts are plain dicts in the wire format:
``{"canvas": {"width", "height"}, "background": str, "objects": [...]}``.
"""

import json
from fractions import Fraction

from pni import _pni
from pni._pni import PniError

__all__ = [
    "PniError",
    "apply_oracle",
    "coverage",
    "iou",
    "layout_hash",
    "parse_instruction",
    "parse_layout",
    "render_svg",
    "serialize_layout",
    "validate_edit",
]


def _dump(layout):
    return json.dumps(layout)


def parse_layout(text):
    """Canonical layout text to a dict. Raises PniError."""
    return json.loads(_pni.parse_layout(text))


def serialize_layout(layout):
    return _pni.serialize_layout(_dump(layout))


def parse_instruction(text):
    """Instruction text with inline shape literals to ``{"tokens", "shapes"}``."""
    return json.loads(_pni.parse_instruction(text))


def apply_oracle(layout, instruction):
    """Runs a move/add/delete/recaption instruction without a language model."""
    return json.loads(_pni.apply_oracle(_dump(layout), instruction))


def validate_edit(before, after, instruction):
    """Validation report ``{"ok", "checks": [...]}`` for a proposed edit."""
    return json.loads(_pni.validate_edit(_dump(before), _dump(after), instruction))


def iou(a, b):
    """Exact intersection over union of two ``(x, y, w, h)`` boxes."""
    return Fraction(*_pni.iou(tuple(a), tuple(b)))


def coverage(selector, obj):
    return Fraction(*_pni.coverage(tuple(selector), tuple(obj)))


def render_svg(layout):
    return _pni.render_svg(_dump(layout))


def layout_hash(layout):
    return _pni.layout_hash(_dump(layout))
