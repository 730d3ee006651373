#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "calor/errors.hpp"
#include "calor/fem2d.hpp"
#include "calor/frame.hpp"
#include "calor/genwall.hpp"
#include "calor/pde_template.hpp"
#include "calor/quasi1d.hpp"
#include "calor/report.hpp"
#include "calor/system.hpp"

namespace py = pybind11;

namespace {

calor::PdeTemplate template_from_text(const std::string& text) {
  return calor::assemble_template(calor::frame::parse_document(text));
}

std::string classify_text(const std::string& text) {
  auto pc = calor::classify_problem(template_from_text(text));
  return pc.tag == calor::ClassTag::Quasi1d ? "quasi-1d" : "generalized-wall";
}

std::pair<double, double> bounds_of_text(const std::string& text) {
  auto f = calor::frame::parse_document(text);
  auto t = calor::assemble_template(f);
  auto pc = calor::classify_problem(t);
  auto sys = calor::connect_system(calor::instantiate_components(t), f);
  auto c = calor::compute_constants(t, pc);
  auto ub = calor::compute_upper_bound(sys, calor::find_slices(sys), c);
  auto lb = calor::compute_lower_bound(sys, calor::find_parallelepipeds(sys), c);
  return {calor::to_double(lb.h), calor::to_double(ub.h)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "controlled-English steady heat-conduction solver";

  py::register_exception<calor::Error>(m, "CalorError");

  m.def(
      "solve_file",
      [](const std::string& path, bool fe, double tol,
         const std::string& out_dir, bool json_only) {
        calor::report::SolveOptions opt;
        opt.fe = fe;
        opt.tol = tol;
        opt.out_dir = out_dir;
        opt.json_only = json_only;
        auto outcome = calor::report::run_solve(path, opt);
        return py::make_tuple(outcome.exit_code, outcome.report.dump(2));
      },
      py::arg("path"), py::arg("fe") = false, py::arg("tol") = 1e-3,
      py::arg("out_dir") = ".", py::arg("json_only") = true,
      "Run the full solve pipeline; returns (exit_code, report_json).");

  m.def("template_json",
        [](const std::string& text) {
          return calor::to_canonical_json(template_from_text(text));
        },
        py::arg("text"), "Canonical PDE-template JSON for a statement.");

  m.def("classify", &classify_text, py::arg("text"),
        "Problem class of a statement: 'quasi-1d' or 'generalized-wall'.");

  m.def("bounds", &bounds_of_text, py::arg("text"),
        "(H_LB, H_UB) variational bound pair of a generalized-wall "
        "statement.");
}
