#include "stfosls/estimator.hpp"
#include "stfosls/errors.hpp"

#include "element_kernel.hpp"

#include <cmath>
#include <limits>

namespace stfosls
{

Indicators compute_indicators(const Mesh& mesh, const DofMap& dofmap,
                              const FirstOrderSystem& system,
                              std::span<const double> coefficients,
                              int quadrature_degree)
{
  if (coefficients.size() != dofmap.num_dofs())
    throw ParameterError("compute_indicators: coefficient vector size mismatch");

  detail::ElementKernel kernel(mesh, dofmap, system, quadrature_degree);
  const std::size_t nl = kernel.num_local();
  const std::size_t nc = kernel.num_components();
  const std::size_t nb = kernel.nodes_per_element();

  Indicators out;
  out.local.resize(mesh.num_elements());
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    kernel.compute(static_cast<std::int32_t>(k));
    double eta2 = 0.0;
    for (std::size_t q = 0; q < kernel.num_points(); ++q)
    {
      for (std::size_t c = 0; c < nc; ++c)
      {
        double g = 0.0;
        for (std::size_t l = 0; l < nl; ++l)
        {
          if (kernel.dof(l) >= 0)
            g += coefficients[kernel.dof(l)] * kernel.image(q, l, c);
        }
        const double r = kernel.data(q, c) - g;
        eta2 += kernel.weight(q) * r * r;
      }
    }
    for (const auto& tp : kernel.trace_points())
    {
      double trace = 0.0;
      for (std::size_t l = 0; l < nb; ++l)
      {
        if (kernel.dof(l) >= 0)
          trace += coefficients[kernel.dof(l)] * tp.basis[l];
      }
      const double r = tp.target - trace;
      eta2 += tp.weight * r * r;
    }
    out.local[k] = std::sqrt(eta2);
    total += eta2;
  }
  out.global = std::sqrt(total);
  return out;
}

ErrorReport u_norm_error(const Mesh& mesh, const DofMap& dofmap,
                         const FirstOrderSystem& system,
                         std::span<const double> coefficients,
                         const ExactSolution& exact, int quadrature_degree)
{
  if (coefficients.size() != dofmap.num_dofs())
    throw ParameterError("u_norm_error: coefficient vector size mismatch");

  const NormLayout layout = system.norm_layout();
  const std::size_t nf = dofmap.num_fields();
  const ReferenceElement ref(dofmap.degree());
  const QuadratureRule rule = triangle_quadrature(quadrature_degree);
  const QuadratureRule edge_rule = edge_quadrature(quadrature_degree);

  double e_primary = 0.0, e_grad = 0.0, e_flux = 0.0, e_div = 0.0, e_trace = 0.0;
  std::vector<FieldJet> jets(nf);
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const auto ki = static_cast<std::int32_t>(k);
    const AffineMap map = affine_map(mesh, ki);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const double w = rule.weights[q] * map.det;
      const Point p = map.map(rule.points[q]);
      for (std::size_t f = 0; f < nf; ++f)
        jets[f] = evaluate_field(coefficients, dofmap, ref, map, ki, f, rule.points[q]);
      const ExactSample s = exact.sample(p);

      const double d0 = s.primary.value - jets[0].value;
      e_primary += w * d0 * d0;
      for (int j = 0; j < 2; ++j)
      {
        if (layout.primary_gradient[j])
        {
          const double dg = s.primary.grad[j] - jets[0].grad[j];
          e_grad += w * dg * dg;
        }
      }
      for (std::size_t f = 1; f < nf; ++f)
      {
        const double df = s.flux[f - 1] - jets[f].value;
        e_flux += w * df * df;
      }
      double div_h = 0.0;
      for (const auto& [f, j] : layout.divergence)
        div_h += jets[f].grad[j];
      const double dd = s.divergence - div_h;
      e_div += w * dd * dd;
    }

    if (!system.has_initial_trace())
      continue;
    const Element& element = mesh.element(ki);
    for (int e = 0; e < 3; ++e)
    {
      if (element.tags[e] != FacetTag::Initial)
        continue;
      const auto& a = ref.nodes()[e];
      const auto& b = ref.nodes()[(e + 1) % 3];
      const auto coords = mesh.coordinates(ki);
      const Point& pa = coords[e];
      const Point& pb = coords[(e + 1) % 3];
      const double length = std::hypot(pb.t - pa.t, pb.x - pa.x);
      for (std::size_t q = 0; q < edge_rule.size(); ++q)
      {
        const double t = edge_rule.points[q][0];
        const std::array<double, 2> xi{(1 - t) * a[0] + t * b[0],
                                       (1 - t) * a[1] + t * b[1]};
        const Point p = map.map(xi);
        const FieldJet jet = evaluate_field(coefficients, dofmap, ref, map, ki, 0, xi);
        const double d = exact.sample(p).primary.value - jet.value;
        e_trace += edge_rule.weights[q] * length * d * d;
      }
    }
  }

  ErrorReport report;
  report.primary = std::sqrt(e_primary);
  report.primary_gradient = std::sqrt(e_grad);
  report.flux = std::sqrt(e_flux);
  report.divergence = std::sqrt(e_div);
  report.initial_trace = std::sqrt(e_trace);
  report.combined = std::sqrt(e_primary + e_grad + e_flux + e_div + e_trace);
  return report;
}

double efficiency_reliability_ratio(const Indicators& indicators,
                                    const ErrorReport& error)
{
  if (error.combined == 0.0)
    return std::numeric_limits<double>::infinity();
  return indicators.global / error.combined;
}

} // namespace stfosls
