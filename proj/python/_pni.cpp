// Copyright 2026 The pni Authors
// SPDX-License-Identifier: Apache-2.0

// JSON-string bindings; the pni package turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pni/error.hpp"
#include "pni/geometry.hpp"
#include "pni/instruction.hpp"
#include "pni/layout_text.hpp"
#include "pni/oracle.hpp"
#include "pni/renderer.hpp"
#include "pni/validator.hpp"
#include "pni/wire.hpp"

namespace py = pybind11;

namespace {

pni::Layout layout_arg(const std::string& json, bool check = true) {
  try {
    return pni::layout_from_json(pni::Json::parse(json), check);
  } catch (const pni::Json::exception& e) {
    throw pni::Error(pni::ErrorCode::kJsonSyntax, e.what());
  }
}

std::string layout_out(const pni::Layout& layout) { return pni::layout_to_json(layout).dump(); }

std::pair<std::int64_t, std::int64_t> as_pair(const pni::Ratio& r) { return {r.num(), r.den()}; }

using BoxTuple = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;

pni::BoundingBox box_arg(const BoxTuple& b) {
  return {std::get<0>(b), std::get<1>(b), std::get<2>(b), std::get<3>(b)};
}

}  // namespace

PYBIND11_MODULE(_pni, m) {
  m.doc() = "Layout editing core";

  static py::exception<pni::Error> error(m, "PniError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const pni::Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(py::str(e.what()));
      exc.attr("code") = std::string(e.code_name());
      exc.attr("detail") = e.detail();
      exc.attr("offset") = e.offset() ? py::cast(*e.offset()) : py::none();
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("parse_layout", [](const std::string& text) { return layout_out(pni::parse_layout(text)); },
        py::arg("text"));
  m.def("serialize_layout",
        [](const std::string& json) { return pni::serialize_layout(layout_arg(json)); },
        py::arg("layout_json"));
  m.def("parse_instruction",
        [](const std::string& text) {
          return pni::instruction_to_json(pni::parse_instruction_text(text)).dump();
        },
        py::arg("text"));
  m.def("apply_oracle",
        [](const std::string& layout_json, const std::string& instruction) {
          const auto cmd = pni::parse_command(pni::parse_instruction_text(instruction));
          return layout_out(pni::apply_command(layout_arg(layout_json), cmd));
        },
        py::arg("layout_json"), py::arg("instruction"));
  m.def("validate_edit",
        [](const std::string& before, const std::string& after, const std::string& instruction) {
          const auto report = pni::validate_edit(
              layout_arg(before), layout_arg(after, false),
              pni::parse_instruction_text(instruction));
          return pni::report_to_json(report).dump();
        },
        py::arg("before_json"), py::arg("after_json"), py::arg("instruction"));
  m.def("iou",
        [](const BoxTuple& a, const BoxTuple& b) { return as_pair(pni::iou(box_arg(a), box_arg(b))); },
        py::arg("a"), py::arg("b"));
  m.def("coverage",
        [](const BoxTuple& selector, const BoxTuple& object) {
          return as_pair(pni::coverage(box_arg(selector), box_arg(object)));
        },
        py::arg("selector"), py::arg("object"));
  m.def("render_svg", [](const std::string& json) { return pni::render_svg(layout_arg(json)); },
        py::arg("layout_json"));
  m.def("layout_hash", [](const std::string& json) { return pni::layout_hash(layout_arg(json)); },
        py::arg("layout_json"));
}
