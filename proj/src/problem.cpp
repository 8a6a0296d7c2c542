#include "stfosls/problem.hpp"
#include "stfosls/errors.hpp"

#include <cmath>
#include <numbers>

namespace stfosls
{

using std::numbers::pi;

std::string_view to_string(ConvectionForm form)
{
  return form == ConvectionForm::Flux ? "flux" : "gradient";
}

void check_problem(const ParabolicProblem& problem, int n)
{
  const auto [a, b] = problem.omega;
  if (!(problem.t_end > 0.0) or !(a < b))
    throw ParameterError("problem: invalid space-time rectangle");
  const auto& cf = problem.coefficients;
  const auto& data = problem.data;
  if (!cf.A or !cf.b or !cf.c or !data.f1 or !data.f2 or !data.u0)
    throw ParameterError("problem: missing coefficient or data function");

  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      const Point p{problem.t_end * (i + 0.5) / n, a + (b - a) * (j + 0.5) / n};
      const double A = cf.A(p);
      if (!(A > 0.0) or !std::isfinite(A))
        throw ParameterError("problem: A is not uniformly positive");
      for (double v : {cf.b(p), cf.c(p), data.f1(p), data.f2(p), data.u0(p.x)})
      {
        if (!std::isfinite(v))
          throw ParameterError("problem: non-finite coefficient or data value");
      }
    }
  }
}

DataVector data_vector(const ParabolicProblem& problem)
{
  DataVector out;
  out.flux = problem.data.f2;
  out.initial = problem.data.u0;
  if (problem.form == ConvectionForm::Flux)
  {
    out.div = [cf = problem.coefficients, data = problem.data](Point p)
    { return data.f1(p) - cf.b(p) / cf.A(p) * data.f2(p); };
  }
  else
  {
    // With u2 = -A u_x + f2, the gradient form of the divergence component
    // equals f1 directly.
    out.div = problem.data.f1;
  }
  return out;
}

ParabolicProblem from_manufactured(const ManufacturedCase& mc,
                                   const CoefficientField& coefficients,
                                   ConvectionForm form, double t_end,
                                   std::pair<double, double> omega)
{
  ParabolicProblem problem;
  problem.t_end = t_end;
  problem.omega = omega;
  problem.coefficients = coefficients;
  problem.form = form;

  ScalarField flux_div = mc.flux_div;
  if (!flux_div)
  {
    flux_div = [A = coefficients.A, u_xx = mc.u_xx](Point p)
    { return A(p) * u_xx(p); };
  }
  problem.data.f1 = [mc, coefficients, flux_div](Point p)
  {
    return mc.u_t(p) - flux_div(p) + coefficients.b(p) * mc.u_x(p)
           + coefficients.c(p) * mc.u(p);
  };
  problem.data.f2 = [](Point) { return 0.0; };
  problem.data.u0 = [u = mc.u](double x) { return u(Point{0.0, x}); };
  return problem;
}

ExactSolution exact_error_data(const ManufacturedCase& mc,
                               const CoefficientField& coefficients)
{
  ScalarField flux_div = mc.flux_div;
  if (!flux_div)
  {
    flux_div = [A = coefficients.A, u_xx = mc.u_xx](Point p)
    { return A(p) * u_xx(p); };
  }
  ExactSolution exact;
  exact.sample = [mc, A = coefficients.A, flux_div](Point p)
  {
    ExactSample s;
    s.primary.value = mc.u(p);
    s.primary.grad = {mc.u_t(p), mc.u_x(p)};
    s.flux = {-A(p) * mc.u_x(p)};
    s.divergence = mc.u_t(p) - flux_div(p);
    return s;
  };
  return exact;
}

ManufacturedCase heat_smooth_solution()
{
  ManufacturedCase mc;
  mc.u = [](Point p) { return std::exp(-p.t) * std::sin(pi * p.x); };
  mc.u_t = [](Point p) { return -std::exp(-p.t) * std::sin(pi * p.x); };
  mc.u_x = [](Point p) { return pi * std::exp(-p.t) * std::cos(pi * p.x); };
  mc.u_xx = [](Point p) { return -pi * pi * std::exp(-p.t) * std::sin(pi * p.x); };
  return mc;
}

CoefficientField variable_a_coefficients()
{
  CoefficientField cf;
  cf.A = [](Point p) { return 1.0 + 0.5 * p.t * p.x; };
  return cf;
}

ManufacturedCase variable_a_solution()
{
  ManufacturedCase mc = heat_smooth_solution();
  // d/dx((1 + t x / 2) u_x) = (t / 2) u_x + (1 + t x / 2) u_xx
  mc.flux_div = [u_x = mc.u_x, u_xx = mc.u_xx](Point p)
  { return 0.5 * p.t * u_x(p) + (1.0 + 0.5 * p.t * p.x) * u_xx(p); };
  return mc;
}

ManufacturedCase zero_solution()
{
  ManufacturedCase mc;
  mc.u = mc.u_t = mc.u_x = mc.u_xx = [](Point) { return 0.0; };
  return mc;
}

} // namespace stfosls
