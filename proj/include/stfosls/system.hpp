#pragma once

#include "stfosls/mesh.hpp"
#include "stfosls/problem.hpp"
#include "stfosls/spaces.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stfosls
{

/// Pointwise linear first-order operator. Residual component k of G applied
/// to fields (w_0, ..., w_{n-1}) at a point is
///
///   sum_f  c(k,f,0) w_f + c(k,f,1) d1 w_f + c(k,f,2) d2 w_f
///
/// where (d1, d2) = (d/dt, d/dx) on the space-time mesh.
class PointOperator
{
public:
  PointOperator() = default;
  PointOperator(std::size_t num_components, std::size_t num_fields)
      : _num_components(num_components), _num_fields(num_fields),
        _coeffs(num_components * num_fields * 3, 0.0)
  {
  }

  std::size_t num_components() const { return _num_components; }
  std::size_t num_fields() const { return _num_fields; }

  double& operator()(std::size_t k, std::size_t f, int j)
  {
    return _coeffs[(k * _num_fields + f) * 3 + j];
  }
  double operator()(std::size_t k, std::size_t f, int j) const
  {
    return _coeffs[(k * _num_fields + f) * 3 + j];
  }

  void reset() { std::fill(_coeffs.begin(), _coeffs.end(), 0.0); }

private:
  std::size_t _num_components = 0;
  std::size_t _num_fields = 0;
  std::vector<double> _coeffs;
};

/// Which derivatives make up the U(omega) seminorm: the gradient components of
/// the primary field (field 0) that are measured, and the (field, direction)
/// pairs summed into the space-time divergence. Fields 1.. are flux fields.
struct NormLayout
{
  std::array<bool, 2> primary_gradient{true, true};
  std::vector<std::pair<std::size_t, int>> divergence;
};

/// A least-squares formulation  G u = f  with G an isomorphism between a
/// product of H1-type spaces and L = L2^m x (optionally) L2 on the initial
/// facets. The trace component, when present, acts on field 0.
class FirstOrderSystem
{
public:
  virtual ~FirstOrderSystem() = default;

  virtual std::string name() const = 0;
  virtual std::vector<FieldSpec> fields() const = 0;
  virtual std::size_t num_components() const = 0;
  virtual bool has_initial_trace() const = 0;
  virtual NormLayout norm_layout() const = 0;

  /// Fill the operator coefficients at a point. The operator is sized
  /// num_components x fields().size().
  virtual void operator_at(Point p, PointOperator& op) const = 0;

  /// Targets of the interior residual components at a point.
  virtual void data_at(Point p, std::span<double> target) const = 0;

  /// Target of the initial-trace component.
  virtual double initial_data(Point) const { return 0.0; }

  std::size_t num_fields() const { return fields().size(); }
};

/// Residual components (G w)(p) for field jets w.
std::vector<double> eval_G(const FirstOrderSystem& system, Point p,
                           std::span<const FieldJet> fields);

/// Interior data targets at p, followed by the initial target when requested.
std::vector<double> eval_data(const FirstOrderSystem& system, Point p,
                              bool on_initial_facet = false);

/// Image of the parabolic operator at one point.
struct GImage
{
  double r_flux = 0.0;
  double r_div = 0.0;
  std::optional<double> r_init;
};

/// Space-time FOSLS system for u = (u1, u2) = (u, -A u_x):
///   G u = (u2 + A d/dx u1,  d/dt u1 + d/dx u2 + lower-order terms,  u1(0,.))
/// with homogeneous Dirichlet conditions for u1 on the lateral boundary.
class ParabolicSystem final : public FirstOrderSystem
{
public:
  explicit ParabolicSystem(ParabolicProblem problem);

  std::string name() const override { return "parabolic"; }
  std::vector<FieldSpec> fields() const override;
  std::size_t num_components() const override { return 2; }
  bool has_initial_trace() const override { return true; }
  NormLayout norm_layout() const override;

  void operator_at(Point p, PointOperator& op) const override;
  void data_at(Point p, std::span<double> target) const override;
  double initial_data(Point p) const override;

  const ParabolicProblem& problem() const { return _problem; }

  GImage eval_G(Point p, const FieldJet& u1, const FieldJet& u2,
                bool on_initial_facet = false) const;

private:
  ParabolicProblem _problem;
  DataVector _data;
};

/// Stationary least-squares formulation of -Laplace(u) = f with sigma = -grad u:
///   G (u, sigma1, sigma2) = (sigma + grad u, div sigma),  data (0, 0, f)
/// on the same two-dimensional mesh read as (x1, x2) = (t, x). u vanishes on
/// the whole boundary; sigma is unconstrained.
class PoissonSystem final : public FirstOrderSystem
{
public:
  explicit PoissonSystem(ScalarField f);

  std::string name() const override { return "poisson"; }
  std::vector<FieldSpec> fields() const override;
  std::size_t num_components() const override { return 3; }
  bool has_initial_trace() const override { return false; }
  NormLayout norm_layout() const override;

  void operator_at(Point p, PointOperator& op) const override;
  void data_at(Point p, std::span<double> target) const override;

private:
  ScalarField _f;
};

std::shared_ptr<ParabolicSystem> parabolic_system(ParabolicProblem problem);
std::shared_ptr<PoissonSystem> poisson_system(ScalarField f);

/// u = sin(pi x1) sin(pi x2), sigma = -grad u, f = 2 pi^2 u.
ScalarField poisson_smooth_rhs();
ExactSolution poisson_smooth_exact();

} // namespace stfosls
