#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tpq/cli.hpp"
#include "tpq/toml.hpp"

namespace py = pybind11;
using namespace tpq;

namespace {

cli::Options options(int n, std::uint64_t seed, int max_dim, int trials, bool timing) {
  cli::Options o;
  o.n = n;
  o.seed = seed;
  o.max_dim = max_dim;
  o.trials = trials;
  o.timing = timing;
  return o;
}

std::string dump(const cli::Report& r) { return cli::to_json(r).dump(); }

ChartPtr chart_of(const std::vector<std::string>& coords, const std::vector<std::pair<std::string, std::string>>& pairs) {
  return make_chart(coords, pairs);
}

}  // namespace

PYBIND11_MODULE(_tpq, m) {
  m.doc() = "Exact checks for twisted Poisson structures (native part)";

  py::register_exception<Error>(m, "TpqError", PyExc_ValueError);
  py::register_exception<toml::ParseError>(m, "StructureSyntaxError", PyExc_ValueError);

  m.attr("COMMANDS") = cli::kCommands;
  m.attr("EXAMPLES") = cli::kExamples;

  m.def(
      "run_command",
      [](const std::string& command, const std::string& target, int n, std::uint64_t seed, int max_dim, int trials,
         bool timing) {
        py::gil_scoped_release release;
        return dump(cli::run_command(command, target, options(n, seed, max_dim, trials, timing)));
      },
      py::arg("command"), py::arg("target"), py::arg("n") = 2, py::arg("seed") = 1, py::arg("max_dim") = 0,
      py::arg("trials") = 20, py::arg("timing") = true, "JSON report of one command on a file or example name");

  m.def(
      "run_on_text",
      [](const std::string& command, const std::string& text, std::uint64_t seed, int max_dim, int trials, bool timing) {
        auto opt = options(2, seed, max_dim, trials, timing);
        cli::StructureFile s = cli::parse_structure(text, max_dim);
        py::gil_scoped_release release;
        return dump(cli::run_on_structure(command, s, opt));
      },
      py::arg("command"), py::arg("text"), py::arg("seed") = 1, py::arg("max_dim") = 0, py::arg("trials") = 20,
      py::arg("timing") = true, "JSON report of one command on structure-file text; raises on parse errors");

  m.def(
      "normalize_structure", [](const std::string& text) { return cli::save_structure(cli::parse_structure(text)); },
      py::arg("text"), "Parse structure-file text and write it back in canonical form");

  m.def(
      "canonical",
      [](const std::string& expr, const std::vector<std::string>& coords,
         const std::vector<std::pair<std::string, std::string>>& pairs) {
        auto c = chart_of(coords, pairs);
        return parse_expr(expr, *c).to_string(*c);
      },
      py::arg("expr"), py::arg("coordinates"), py::arg("conjugate_pairs") = std::vector<std::pair<std::string, std::string>>{},
      "Canonical text of an expression over the given coordinates");

  m.def(
      "differentiate",
      [](const std::string& expr, const std::string& coord, const std::vector<std::string>& coords,
         const std::vector<std::pair<std::string, std::string>>& pairs) {
        auto c = chart_of(coords, pairs);
        return differentiate(parse_expr(expr, *c), coord, *c).to_string(*c);
      },
      py::arg("expr"), py::arg("coordinate"), py::arg("coordinates"),
      py::arg("conjugate_pairs") = std::vector<std::pair<std::string, std::string>>{});
}
