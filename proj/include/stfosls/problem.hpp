#pragma once

#include "stfosls/mesh.hpp"
#include "stfosls/spaces.hpp"

#include <functional>
#include <string_view>
#include <utility>
#include <vector>

namespace stfosls
{

using ScalarField = std::function<double(Point)>;

/// Coefficients of  u_t - d/dx(A u_x) + b u_x + c u = f  (one space dimension,
/// so A is the scalar of the SPD matrix).
struct CoefficientField
{
  ScalarField A = [](Point) { return 1.0; };
  ScalarField b = [](Point) { return 0.0; };
  ScalarField c = [](Point) { return 0.0; };
};

/// Right-hand side split f(v) = (f1, v) + (f2, v_x) and initial datum.
struct ProblemData
{
  ScalarField f1 = [](Point) { return 0.0; };
  ScalarField f2 = [](Point) { return 0.0; };
  std::function<double(double)> u0 = [](double) { return 0.0; };
};

/// Which lower-order term enters the divergence component of G:
/// Flux:     div u - b A^{-1} u2 + c u1
/// Gradient: div u + b d/dx u1 + c u1
enum class ConvectionForm
{
  Flux,
  Gradient
};

std::string_view to_string(ConvectionForm form);

struct ParabolicProblem
{
  double t_end = 1.0;
  std::pair<double, double> omega{0.0, 1.0};
  CoefficientField coefficients;
  ProblemData data;
  ConvectionForm form = ConvectionForm::Flux;
};

/// Sampled check of the coefficient and data invariants (A > 0, everything
/// finite) on a uniform grid of the space-time rectangle. Throws
/// ParameterError on violation.
void check_problem(const ParabolicProblem& problem, int samples_per_direction = 17);

/// Pointwise targets of the three residual components of G.
struct DataVector
{
  ScalarField flux;  ///< f2
  ScalarField div;   ///< f1 - b A^{-1} f2 (flux form) or f1 (gradient form)
  std::function<double(double)> initial; ///< u0
};

DataVector data_vector(const ParabolicProblem& problem);

/// Closed-form solution u with u(t,a) = u(t,b) = 0.
struct ManufacturedCase
{
  ScalarField u;
  ScalarField u_t;
  ScalarField u_x;
  ScalarField u_xx;
  /// d/dx(A u_x). Required when A is not constant; when empty, A u_xx is used.
  ScalarField flux_div;
};

/// f1 := u_t - d/dx(A u_x) + b u_x + c u, f2 := 0, u0 := u(0,.)
ParabolicProblem from_manufactured(const ManufacturedCase& mc,
                                   const CoefficientField& coefficients,
                                   ConvectionForm form, double t_end = 1.0,
                                   std::pair<double, double> omega = {0.0, 1.0});

/// Reference values of the exact solution needed for U-norm errors:
/// the primary field with its space-time gradient, the flux fields and the
/// space-time divergence.
struct ExactSample
{
  FieldJet primary;
  std::vector<double> flux;
  double divergence = 0.0;
};

struct ExactSolution
{
  std::function<ExactSample(Point)> sample;
};

/// u1 = u, u2 = -A u_x, div u = u_t - d/dx(A u_x).
ExactSolution exact_error_data(const ManufacturedCase& mc,
                               const CoefficientField& coefficients);

/// u = exp(-t) sin(pi x) on (0,1).
ManufacturedCase heat_smooth_solution();

/// A = 1 + t x / 2
CoefficientField variable_a_coefficients();

/// heat_smooth_solution with d/dx(A u_x) for variable_a_coefficients.
ManufacturedCase variable_a_solution();

/// u = 0
ManufacturedCase zero_solution();

} // namespace stfosls
