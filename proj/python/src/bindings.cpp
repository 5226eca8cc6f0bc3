#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "patholab/corpus.hpp"
#include "patholab/parser.hpp"

namespace py = pybind11;
using namespace patholab;

namespace {

corpus::Config make_config(int refute_depth, long refute_steps, int model_size) {
  if (refute_depth < 0 || refute_steps < 0) throw py::value_error("budgets must be non-negative");
  if (model_size < 1 || model_size > 8) throw py::value_error("model_size must be between 1 and 8");
  corpus::Config config;
  config.budget.max_instantiation_depth = refute_depth;
  config.budget.max_steps = refute_steps;
  config.model_size = model_size;
  return config;
}

std::string classify(const std::string& formula, int refute_depth, long refute_steps, int model_size) {
  corpus::Config config = make_config(refute_depth, refute_steps, model_size);
  corpus::Report report;
  {
    py::gil_scoped_release release;
    report = corpus::classify_text(formula, config);
  }
  return corpus::to_json(report, true).dump();
}

std::string run_corpus(const std::string& text, int refute_depth, long refute_steps, int model_size) {
  corpus::Config config = make_config(refute_depth, refute_steps, model_size);
  py::gil_scoped_release release;
  return corpus::to_json(corpus::run_corpus(corpus::parse_corpus(text), config), config).dump();
}

std::string audit(const std::string& text, int refute_depth, long refute_steps, int model_size) {
  corpus::Config config = make_config(refute_depth, refute_steps, model_size);
  py::gil_scoped_release release;
  return corpus::to_json(corpus::audit_1jt(corpus::parse_corpus(text), config), config).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of patholab";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("canonical", [](const std::string& text) { return print(parse(text)); }, py::arg("formula"),
        "Parse a formula and print it in canonical form.");
  m.def("free_variables", [](const std::string& text) { return free_vars(parse(text)); }, py::arg("formula"));
  m.def("is_stratified", [](const std::string& text) { return strat::is_stratified(strat::stratify(parse(text))); },
        py::arg("formula"));

  m.def("classify_json", &classify, py::arg("formula"), py::arg("refute_depth"), py::arg("refute_steps"),
        py::arg("model_size"));
  m.def("run_corpus_json", &run_corpus, py::arg("text"), py::arg("refute_depth"), py::arg("refute_steps"),
        py::arg("model_size"));
  m.def("audit_json", &audit, py::arg("text"), py::arg("refute_depth"), py::arg("refute_steps"),
        py::arg("model_size"));
  m.def("bundled_corpus", [] { return corpus::bundled_corpus(); });
}
