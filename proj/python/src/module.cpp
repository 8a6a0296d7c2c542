#include "stfosls/cases.hpp"
#include "stfosls/cli.hpp"
#include "stfosls/driver.hpp"
#include "stfosls/errors.hpp"
#include "stfosls/marking.hpp"
#include "stfosls/mesh.hpp"
#include "stfosls/quadrature.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

namespace py = pybind11;
using namespace stfosls;

namespace
{

ConvectionForm parse_form(const std::string& form)
{
  if (form == "flux")
    return ConvectionForm::Flux;
  if (form == "gradient")
    return ConvectionForm::Gradient;
  throw ParameterError("form must be 'flux' or 'gradient'");
}

MarkingStrategy parse_strategy(const std::string& name)
{
  if (name == "doerfler")
    return MarkingStrategy::Doerfler;
  if (name == "maximum")
    return MarkingStrategy::Maximum;
  throw ParameterError("marking must be 'doerfler' or 'maximum'");
}

py::dict to_dict(const RunLog& log)
{
  py::list records;
  for (const RunRecord& r : log.records)
  {
    py::dict d;
    d["level"] = r.level;
    d["dofs"] = r.dofs;
    d["elements"] = r.elements;
    d["h_max"] = r.h_max;
    d["estimator"] = r.estimator;
    d["error"] = r.error ? py::cast(*r.error) : py::none();
    d["marked"] = r.marked;
    d["cg_iterations"] = r.solver.iterations;
    d["galerkin_defect"] = r.galerkin_defect;
    records.append(d);
  }
  py::dict out;
  out["system"] = log.system;
  out["form"] = log.form;
  out["reason"] = std::string(to_string(log.reason));
  out["records"] = records;
  out["mesh"] = log.final_mesh;
  return out;
}

py::dict run_case(const std::string& name, const std::string& form, int degree,
                  const std::string& mode, const std::string& marking, double theta,
                  int levels, int max_iterations, std::size_t max_dofs, double tolerance,
                  int nt, int nx)
{
  const BuiltinCase bc = make_case(name, parse_form(form));
  const Mesh mesh = uniform_initial_mesh(bc.t_end, bc.omega, nt, nx);
  RunOptions options;
  options.degree = degree;
  if (degree != 1 and degree != 2)
    throw ParameterError("degree must be 1 or 2");
  if (bc.exact)
    options.exact = &*bc.exact;
  RunLog log;
  {
    py::gil_scoped_release release;
    if (mode == "uniform")
      log = uniform_run(*bc.system, mesh, levels, options);
    else if (mode == "adaptive")
      log = adaptive_run(*bc.system, mesh, {parse_strategy(marking), theta},
                         {max_iterations, max_dofs, tolerance}, options);
    else
      throw ParameterError("mode must be 'adaptive' or 'uniform'");
  }
  return to_dict(log);
}

} // namespace

PYBIND11_MODULE(_stfosls, m)
{
  m.doc() = "Adaptive space-time least-squares finite elements";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("num_elements", &Mesh::num_elements)
      .def_property_readonly("num_points", &Mesh::num_points)
      .def_property_readonly("points",
                             [](const Mesh& mesh)
                             {
                               std::vector<std::pair<double, double>> out;
                               for (const Point& p : mesh.points())
                                 out.emplace_back(p.t, p.x);
                               return out;
                             })
      .def_property_readonly("elements",
                             [](const Mesh& mesh)
                             {
                               std::vector<std::array<std::int32_t, 3>> out;
                               for (const Element& e : mesh.elements())
                                 out.push_back(e.vertices);
                               return out;
                             })
      .def("measure", [](const Mesh& mesh, std::int32_t k) { return element_measure(mesh, k); })
      .def("max_mesh_size", &max_mesh_size)
      .def("is_conforming", &is_conforming)
      .def("similarity_class_count", &similarity_class_count)
      .def("bisect",
           [](const Mesh& mesh, MarkSet marks)
           {
             std::sort(marks.begin(), marks.end());
             marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
             for (auto k : marks)
             {
               if (k < 0 or static_cast<std::size_t>(k) >= mesh.num_elements())
                 throw py::index_error("element index out of range");
             }
             return bisect(mesh, marks);
           })
      .def("bisect_all", &bisect_all)
      .def("dump",
           [](const Mesh& mesh)
           {
             std::ostringstream out;
             write_mesh(out, mesh);
             return out.str();
           })
      .def_static("load",
                  [](const std::string& text)
                  {
                    std::istringstream in(text);
                    return read_mesh(in);
                  });

  m.def("uniform_mesh", &uniform_initial_mesh, py::arg("t_end") = 1.0,
        py::arg("omega") = std::pair<double, double>{0.0, 1.0}, py::arg("nt") = 2,
        py::arg("nx") = 2);

  m.def(
      "triangle_quadrature",
      [](int degree)
      {
        const QuadratureRule rule = triangle_quadrature(degree);
        return py::make_tuple(rule.points, rule.weights);
      },
      py::arg("degree"));

  m.def("mark_doerfler",
        [](const std::vector<double>& eta, double theta) { return mark_doerfler(eta, theta); },
        py::arg("indicators"), py::arg("theta"));
  m.def("mark_maximum",
        [](const std::vector<double>& eta, double theta) { return mark_maximum(eta, theta); },
        py::arg("indicators"), py::arg("theta"));
  m.def(
      "verify_marking_property",
      [](const std::vector<double>& eta, const MarkSet& marks)
      { return verify_marking_property(eta, marks, [](double t) { return t; }); },
      py::arg("indicators"), py::arg("marks"));

  m.def("builtin_case_names", &builtin_case_names);
  m.def("run_case", &run_case, py::arg("case"), py::arg("form") = "flux",
        py::arg("degree") = 1, py::arg("mode") = "adaptive", py::arg("marking") = "doerfler",
        py::arg("theta") = 0.5, py::arg("levels") = 5, py::arg("max_iterations") = 25,
        py::arg("max_dofs") = 50'000, py::arg("tolerance") = 0.0, py::arg("nt") = 2,
        py::arg("nx") = 2);

  m.def(
      "verify",
      [](std::uint64_t seed)
      {
        std::ostringstream out;
        const int code = cli::cmd_verify(seed, out);
        return py::make_tuple(code == 0, out.str());
      },
      py::arg("seed") = 20240611);
}
