#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "structlaws/checks.hpp"
#include "structlaws/cli.hpp"
#include "structlaws/examples.hpp"
#include "structlaws/syntax.hpp"

namespace py = pybind11;
using namespace structlaws;

namespace {

Context context_of(const ExampleBundle& b, const std::optional<std::vector<Index>>& ctx) {
  if (!ctx) return default_context(b.signature());
  Context c;
  for (Index i : *ctx) c.counts.push_back(i);
  return c;
}

TermPtr parse(const ExampleBundle& b, const std::string& text) {
  return parse_term(b.signature(), &b.stack.aux(), text);
}

std::string show(const ExampleBundle& b, const TermPtr& t) { return print_term(b.signature(), &b.stack.aux(), *t); }

py::object json_of(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(structlaws, m) {
  m.doc() = "Structural laws over multi-sorted syntax with binding";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ScopeError>(m, "ScopeError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<OpenTermError>(m, "OpenTermError", base.ptr());
  py::register_exception<UnknownOp>(m, "UnknownOp", base.ptr());
  py::register_exception<UnknownLaw>(m, "UnknownLaw", base.ptr());

  m.def("bundle_names", &bundle_names);

  py::class_<ExampleBundle>(m, "Bundle")
      .def(py::init([](const std::string& name) { return build(name); }), py::arg("name"))
      .def_static("from_text", [](const std::string& sig, const std::string& laws, const std::string& eqs) {
        return load_bundle("files", sig, laws, eqs);
      }, py::arg("signature"), py::arg("laws"), py::arg("eqs") = "")
      .def_readonly("name", &ExampleBundle::name)
      .def_property_readonly("layer_widths", [](const ExampleBundle& b) {
        std::vector<std::size_t> w;
        for (const auto& l : b.stack.layers()) w.push_back(l.size());
        return w;
      })
      .def_property_readonly("systems", [](const ExampleBundle& b) {
        std::vector<std::string> out;
        for (const auto& e : b.systems) out.push_back(e.name);
        return out;
      })
      .def_property_readonly("oracles", [](const ExampleBundle& b) {
        std::vector<std::string> out;
        for (const auto& o : b.oracles) out.push_back(o.aux);
        return out;
      })
      .def_property_readonly("scoped", [](const ExampleBundle& b) { return b.signature().scoped(); })
      .def("canonical", [](const ExampleBundle& b, const std::string& term) { return show(b, parse(b, term)); },
           py::arg("term"))
      .def("normalize", [](const ExampleBundle& b, const std::string& term,
                           const std::optional<std::vector<Index>>& ctx) {
        return show(b, normalize(b.stack, parse(b, term), context_of(b, ctx)));
      }, py::arg("term"), py::arg("ctx") = py::none())
      .def("enumerate", [](const ExampleBundle& b, const std::string& sort, std::size_t size,
                           const std::optional<std::vector<Index>>& ctx, bool aux) {
        Sort s = instantiate(parse_sort_expr(b.signature(), parse_sexp(sort), "sort"), {});
        std::vector<std::string> out;
        for (const auto& t : enum_terms(b.stack, EnumSpec{s, context_of(b, ctx), size, true, aux}))
          out.push_back(show(b, t));
        return out;
      }, py::arg("sort"), py::arg("size"), py::arg("ctx") = py::none(), py::arg("aux") = false)
      .def("crosscheck", [](const ExampleBundle& b, std::size_t size, std::size_t param_size, Index ctx) {
        Bounds bd;
        bd.size = size;
        bd.param_size = param_size;
        bd.ctx = ctx;
        return json_of(report_json(crosscheck(b, bd), false));
      }, py::arg("size") = 4, py::arg("param_size") = 2, py::arg("ctx") = 1);

  m.def("peano_value", [](const std::string& term) {
    ExampleBundle b = build("peano");
    return peano_value(b.stack, *parse(b, term));
  }, py::arg("term"));

  m.def("run_cli", [](const std::vector<std::string>& args, const std::string& stdin_text) {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = run_cli(args, in, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), py::arg("stdin") = "");
}
