#pragma once

#include <array>
#include <vector>

namespace stfosls
{

/// Quadrature on the reference triangle {(xi,eta): xi,eta >= 0, xi+eta <= 1}
/// or on the unit interval [0,1].
struct QuadratureRule
{
  /// Reference coordinates (xi, eta). For edge rules eta is 0 and xi is the
  /// edge parameter.
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre points and weights mapped to [0,1].
QuadratureRule gauss_legendre(int num_points);

/// Collapsed (Duffy) Gauss rule on the reference triangle, exact for
/// polynomials of total degree <= exactness. Weights sum to 1/2.
QuadratureRule triangle_quadrature(int exactness);

/// Gauss rule on [0,1] exact for polynomials of degree <= exactness.
QuadratureRule edge_quadrature(int exactness);

inline constexpr int max_quadrature_degree = 40;

} // namespace stfosls
