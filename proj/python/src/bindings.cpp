#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "zncoh/error.hpp"
#include "zncoh/report.hpp"

namespace py = pybind11;

namespace {

zncoh::InputDocument parse(const std::string& document) {
  zncoh::Json doc;
  try {
    doc = zncoh::Json::parse(document);
  } catch (const zncoh::Json::parse_error& e) {
    throw zncoh::Error(zncoh::ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  return zncoh::parse_input(doc);
}

std::size_t degree_bound(const zncoh::InputDocument& input, std::optional<std::size_t> max_degree) {
  return max_degree.value_or(input.spec.n + 3);
}

zncoh::EngineChoice engine_of(const std::string& name) {
  if (name == "formula") return zncoh::EngineChoice::Formula;
  if (name == "oracle") return zncoh::EngineChoice::Oracle;
  if (name == "both") return zncoh::EngineChoice::Both;
  throw zncoh::Error(zncoh::ErrorKind::InvalidInput, "engine must be formula, oracle or both");
}

zncoh::VariantChoice variant_of(const std::string& name) {
  if (name == "published") return zncoh::VariantChoice::Published;
  if (name == "corrected") return zncoh::VariantChoice::Corrected;
  if (name == "both") return zncoh::VariantChoice::Both;
  throw zncoh::Error(zncoh::ErrorKind::InvalidInput, "variant must be published, corrected or both");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Integral cohomology of Z^n x| Z/m; every function takes and returns JSON text.";

  static PyObject* error_type = PyErr_NewException("zncoh._core.ZncohError", PyExc_ValueError, nullptr);
  m.add_object("ZncohError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const zncoh::Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("kind") = std::string(zncoh::to_string(e.kind()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  m.def(
      "analyze",
      [](const std::string& document, std::optional<std::size_t> max_degree, const std::string& engine,
         const std::string& variant) {
        const auto input = parse(document);
        zncoh::RunOptions o;
        o.max_degree = degree_bound(input, max_degree);
        o.engine = engine_of(engine);
        o.variant = variant_of(variant);
        return zncoh::run_analyze(input, o).dump();
      },
      py::arg("document"), py::arg("max_degree") = py::none(), py::arg("engine") = "both",
      py::arg("variant") = "both");
  m.def(
      "compare",
      [](const std::string& document, std::optional<std::size_t> max_degree) {
        const auto input = parse(document);
        return zncoh::run_compare(input, degree_bound(input, max_degree)).dump();
      },
      py::arg("document"), py::arg("max_degree") = py::none());
  m.def(
      "rank",
      [](const std::string& document, std::optional<std::size_t> max_degree) {
        const auto input = parse(document);
        return zncoh::run_rank(input, degree_bound(input, max_degree)).dump();
      },
      py::arg("document"), py::arg("max_degree") = py::none());
  m.def(
      "rst", [](const std::string& document, std::optional<long> prime) { return zncoh::run_rst(parse(document), prime).dump(); },
      py::arg("document"), py::arg("prime") = py::none());
  m.def(
      "isotropy",
      [](const std::string& document, std::optional<long> prime) {
        return zncoh::run_isotropy(parse(document), prime).dump();
      },
      py::arg("document"), py::arg("prime") = py::none());
  m.def(
      "census", [](const std::string& document) { return zncoh::run_census(parse(document)).dump(); },
      py::arg("document"));
  m.def(
      "render",
      [](const std::string& result, const std::string& format, std::optional<long> prime) {
        const auto j = zncoh::Json::parse(result);
        if (format == "md") return zncoh::render_markdown(j, prime);
        if (format == "csv") return zncoh::render_csv(j, prime);
        throw zncoh::Error(zncoh::ErrorKind::InvalidInput, "format must be md or csv");
      },
      py::arg("result"), py::arg("format") = "md", py::arg("prime") = py::none());
}
