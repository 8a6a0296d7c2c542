#include "stfosls/quadrature.hpp"
#include "stfosls/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace stfosls
{

QuadratureRule gauss_legendre(int num_points)
{
  if (num_points < 1)
    throw ParameterError("gauss_legendre: need at least one point");

  const int n = num_points;
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.degree = 2 * n - 1;

  // Newton iteration on P_n from the Chebyshev-like initial guess; the roots
  // are symmetric so only half are computed.
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter)
    {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j)
      {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged root.
    {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j)
      {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map from [-1,1] to [0,1].
    rule.points[i] = {0.5 * (1.0 - z), 0.0};
    rule.points[n - 1 - i] = {0.5 * (1.0 + z), 0.0};
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

QuadratureRule triangle_quadrature(int exactness)
{
  if (exactness < 0 or exactness > max_quadrature_degree)
  {
    throw ParameterError("triangle_quadrature: unsupported degree "
                         + std::to_string(exactness));
  }
  // x = u (1 - v), y = v with Jacobian (1 - v): a degree-k polynomial becomes
  // degree k + 1 in v, so n points with 2n - 1 >= k + 1 suffice.
  const int n = std::max(1, (exactness + 3) / 2);
  const QuadratureRule line = gauss_legendre(n);

  QuadratureRule rule;
  rule.degree = exactness;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int j = 0; j < n; ++j)
  {
    const double v = line.points[j][0];
    for (int i = 0; i < n; ++i)
    {
      const double u = line.points[i][0];
      rule.points.push_back({u * (1.0 - v), v});
      rule.weights.push_back(line.weights[i] * line.weights[j] * (1.0 - v));
    }
  }
  return rule;
}

QuadratureRule edge_quadrature(int exactness)
{
  if (exactness < 0 or exactness > max_quadrature_degree)
  {
    throw ParameterError("edge_quadrature: unsupported degree "
                         + std::to_string(exactness));
  }
  QuadratureRule rule = gauss_legendre(std::max(1, (exactness + 2) / 2));
  rule.degree = exactness;
  return rule;
}

} // namespace stfosls
