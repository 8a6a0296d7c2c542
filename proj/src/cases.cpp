#include "stfosls/cases.hpp"
#include "stfosls/errors.hpp"

namespace stfosls
{

BuiltinCase make_case(std::string_view name, ConvectionForm form, double t_end)
{
  BuiltinCase out;
  out.name = std::string(name);
  out.t_end = t_end;

  auto manufactured = [&](const ManufacturedCase& mc, const CoefficientField& cf)
  {
    out.system = parabolic_system(from_manufactured(mc, cf, form, t_end, out.omega));
    out.exact = exact_error_data(mc, cf);
  };

  if (name == "heat-smooth")
  {
    manufactured(heat_smooth_solution(), CoefficientField{});
  }
  else if (name == "convection-reaction")
  {
    CoefficientField cf;
    cf.b = [](Point) { return 1.0; };
    cf.c = [](Point) { return 1.0; };
    manufactured(heat_smooth_solution(), cf);
  }
  else if (name == "variable-a")
  {
    manufactured(variable_a_solution(), variable_a_coefficients());
  }
  else if (name == "incompatible")
  {
    ParabolicProblem problem;
    problem.t_end = t_end;
    problem.omega = out.omega;
    problem.form = form;
    problem.data.u0 = [](double) { return 1.0; };
    out.system = parabolic_system(std::move(problem));
  }
  else if (name == "poisson-smooth")
  {
    out.system = poisson_system(poisson_smooth_rhs());
    out.exact = poisson_smooth_exact();
    out.t_end = 1.0;
  }
  else
  {
    throw ParameterError("unknown case '" + std::string(name) + "'");
  }
  return out;
}

std::vector<std::string> builtin_case_names()
{
  return {"heat-smooth", "convection-reaction", "variable-a", "incompatible",
          "poisson-smooth"};
}

} // namespace stfosls
