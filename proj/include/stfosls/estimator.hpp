#pragma once

#include "stfosls/mesh.hpp"
#include "stfosls/problem.hpp"
#include "stfosls/spaces.hpp"
#include "stfosls/system.hpp"

#include <span>
#include <vector>

namespace stfosls
{

/// Elementwise least-squares indicators eta(K) = ||f - G u_h||_{L(K)} and the
/// global estimator eta = (sum eta(K)^2)^{1/2}.
struct Indicators
{
  std::vector<double> local;
  double global = 0.0;
};

Indicators compute_indicators(const Mesh& mesh, const DofMap& dofmap,
                              const FirstOrderSystem& system,
                              std::span<const double> coefficients,
                              int quadrature_degree);

/// Contributions to ||u - u_h||_U including the initial trace term.
struct ErrorReport
{
  double primary = 0.0;          ///< ||u1 - u1_h||
  double primary_gradient = 0.0; ///< ||grad_x(u1 - u1_h)|| (full grad for Poisson)
  double flux = 0.0;             ///< ||u2 - u2_h||
  double divergence = 0.0;       ///< ||div(u - u_h)||
  double initial_trace = 0.0;    ///< ||(u1 - u1_h)(0,.)||
  double combined = 0.0;
};

ErrorReport u_norm_error(const Mesh& mesh, const DofMap& dofmap,
                         const FirstOrderSystem& system,
                         std::span<const double> coefficients,
                         const ExactSolution& exact, int quadrature_degree);

/// eta / ||u - u_h||_U; +infinity when the error vanishes.
double efficiency_reliability_ratio(const Indicators& indicators,
                                    const ErrorReport& error);

} // namespace stfosls
