#include "element_kernel.hpp"
#include "stfosls/errors.hpp"

#include <cmath>

namespace stfosls::detail
{

ElementKernel::ElementKernel(const Mesh& mesh, const DofMap& dofmap,
                             const FirstOrderSystem& system,
                             int quadrature_degree)
    : _mesh(mesh), _dofmap(dofmap), _system(system),
      _ref(dofmap.degree()), _rule(triangle_quadrature(quadrature_degree)),
      _edge_rule(edge_quadrature(quadrature_degree)),
      _table(_ref.tabulate(_rule)), _num_fields(system.num_fields()),
      _nodes_per_element(dofmap.nodes_per_element()),
      _num_local(_num_fields * _nodes_per_element),
      _num_components(system.num_components()),
      _has_trace(system.has_initial_trace()),
      _op(_num_components, _num_fields)
{
  if (dofmap.num_fields() != _num_fields)
    throw ParameterError("dofmap and system disagree on the number of fields");
  for (int e = 0; e < 3; ++e)
    _edge_tables[e] = _ref.tabulate_edge(_edge_rule, e);
  _dofs.resize(_num_local);
  _weights.resize(_rule.size());
  _points.resize(_rule.size());
  _images.resize(_rule.size() * _num_local * _num_components);
  _data.resize(_rule.size() * _num_components);
}

void ElementKernel::compute(std::int32_t k)
{
  const auto nodes = _dofmap.element_nodes(k);
  for (std::size_t f = 0; f < _num_fields; ++f)
  {
    for (std::size_t i = 0; i < _nodes_per_element; ++i)
      _dofs[f * _nodes_per_element + i] = _dofmap.dof(f, nodes[i]);
  }

  const AffineMap map = affine_map(_mesh, k);
  const std::size_t nb = _nodes_per_element;
  std::vector<std::array<double, 2>> grads(nb);
  for (std::size_t q = 0; q < _rule.size(); ++q)
  {
    _weights[q] = _rule.weights[q] * map.det;
    _points[q] = map.map(_rule.points[q]);
    for (std::size_t i = 0; i < nb; ++i)
      grads[i] = map.gradient(_table.grad(q, i));

    _system.operator_at(_points[q], _op);
    _system.data_at(_points[q],
                    std::span(_data).subspan(q * _num_components, _num_components));

    for (std::size_t f = 0; f < _num_fields; ++f)
    {
      for (std::size_t i = 0; i < nb; ++i)
      {
        const std::size_t l = f * nb + i;
        const double v = _table.value(q, i);
        double* out = &_images[(q * _num_local + l) * _num_components];
        for (std::size_t c = 0; c < _num_components; ++c)
        {
          out[c] = _op(c, f, 0) * v + _op(c, f, 1) * grads[i][0]
                   + _op(c, f, 2) * grads[i][1];
        }
      }
    }
  }

  _trace.clear();
  if (!_has_trace)
    return;
  const Element& element = _mesh.element(k);
  const auto coords = _mesh.coordinates(k);
  for (int e = 0; e < 3; ++e)
  {
    if (element.tags[e] != FacetTag::Initial)
      continue;
    const Point& a = coords[e];
    const Point& b = coords[(e + 1) % 3];
    const double length = std::hypot(b.t - a.t, b.x - a.x);
    const auto& table = _edge_tables[e];
    for (std::size_t q = 0; q < _edge_rule.size(); ++q)
    {
      const double s = _edge_rule.points[q][0];
      TracePoint tp;
      tp.weight = _edge_rule.weights[q] * length;
      tp.point = {(1.0 - s) * a.t + s * b.t, (1.0 - s) * a.x + s * b.x};
      tp.target = _system.initial_data(tp.point);
      tp.basis.resize(nb);
      for (std::size_t i = 0; i < nb; ++i)
        tp.basis[i] = table.value(q, i);
      _trace.push_back(std::move(tp));
    }
  }
}

} // namespace stfosls::detail
