#include "stfosls/spaces.hpp"
#include "stfosls/errors.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

namespace stfosls
{

namespace
{

constexpr std::array<std::array<double, 2>, 3> barycentric_gradients{
    {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};

std::array<double, 3> barycentric(std::array<double, 2> xi)
{
  return {1.0 - xi[0] - xi[1], xi[0], xi[1]};
}

} // namespace

//-----------------------------------------------------------------------------
ReferenceElement::ReferenceElement(int degree) : _degree(degree)
{
  if (degree != 1 and degree != 2)
  {
    throw ParameterError("unsupported polynomial degree "
                         + std::to_string(degree) + " (expected 1 or 2)");
  }
  _nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  if (degree == 2)
  {
    for (int e = 0; e < 3; ++e)
    {
      const auto& a = _nodes[e];
      const auto& b = _nodes[(e + 1) % 3];
      _nodes.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
    }
  }
}
//-----------------------------------------------------------------------------
void ReferenceElement::evaluate(std::array<double, 2> xi,
                                std::span<double> values) const
{
  const auto lambda = barycentric(xi);
  if (_degree == 1)
  {
    for (int i = 0; i < 3; ++i)
      values[i] = lambda[i];
    return;
  }
  for (int i = 0; i < 3; ++i)
    values[i] = lambda[i] * (2.0 * lambda[i] - 1.0);
  for (int e = 0; e < 3; ++e)
    values[3 + e] = 4.0 * lambda[e] * lambda[(e + 1) % 3];
}
//-----------------------------------------------------------------------------
void ReferenceElement::evaluate_gradients(
    std::array<double, 2> xi, std::span<std::array<double, 2>> grads) const
{
  const auto lambda = barycentric(xi);
  const auto& dl = barycentric_gradients;
  if (_degree == 1)
  {
    for (int i = 0; i < 3; ++i)
      grads[i] = dl[i];
    return;
  }
  for (int i = 0; i < 3; ++i)
  {
    const double s = 4.0 * lambda[i] - 1.0;
    grads[i] = {s * dl[i][0], s * dl[i][1]};
  }
  for (int e = 0; e < 3; ++e)
  {
    const int a = e, b = (e + 1) % 3;
    grads[3 + e] = {4.0 * (lambda[b] * dl[a][0] + lambda[a] * dl[b][0]),
                    4.0 * (lambda[b] * dl[a][1] + lambda[a] * dl[b][1])};
  }
}
//-----------------------------------------------------------------------------
ReferenceElement::Table
ReferenceElement::tabulate(const QuadratureRule& rule) const
{
  Table table;
  table.num_points = rule.size();
  table.num_basis = num_nodes();
  table.values.resize(table.num_points * table.num_basis);
  table.grads.resize(table.num_points * table.num_basis);
  for (std::size_t q = 0; q < rule.size(); ++q)
  {
    evaluate(rule.points[q],
             std::span(table.values).subspan(q * table.num_basis, table.num_basis));
    evaluate_gradients(
        rule.points[q],
        std::span(table.grads).subspan(q * table.num_basis, table.num_basis));
  }
  return table;
}
//-----------------------------------------------------------------------------
ReferenceElement::Table
ReferenceElement::tabulate_edge(const QuadratureRule& rule, int e) const
{
  const auto& a = _nodes[e];
  const auto& b = _nodes[(e + 1) % 3];
  QuadratureRule mapped = rule;
  for (auto& p : mapped.points)
  {
    const double s = p[0];
    p = {(1.0 - s) * a[0] + s * b[0], (1.0 - s) * a[1] + s * b[1]};
  }
  return tabulate(mapped);
}
//-----------------------------------------------------------------------------
ReferenceElement build_reference(int degree) { return ReferenceElement(degree); }
//-----------------------------------------------------------------------------
Point AffineMap::map(std::array<double, 2> xi) const
{
  return {origin.t + jacobian[0][0] * xi[0] + jacobian[0][1] * xi[1],
          origin.x + jacobian[1][0] * xi[0] + jacobian[1][1] * xi[1]};
}
//-----------------------------------------------------------------------------
std::array<double, 2>
AffineMap::gradient(const std::array<double, 2>& g) const
{
  const auto& m = inverse_transpose;
  return {m[0][0] * g[0] + m[0][1] * g[1], m[1][0] * g[0] + m[1][1] * g[1]};
}
//-----------------------------------------------------------------------------
AffineMap affine_map(const Mesh& mesh, std::int32_t k)
{
  const auto p = mesh.coordinates(k);
  AffineMap m;
  m.origin = p[0];
  m.jacobian = {{{p[1].t - p[0].t, p[2].t - p[0].t},
                 {p[1].x - p[0].x, p[2].x - p[0].x}}};
  const auto& j = m.jacobian;
  m.det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  if (!(m.det > 0.0))
    throw ParameterError("affine_map: degenerate element");
  const double inv = 1.0 / m.det;
  m.inverse_transpose = {{{j[1][1] * inv, -j[1][0] * inv},
                          {-j[0][1] * inv, j[0][0] * inv}}};
  return m;
}
//-----------------------------------------------------------------------------
DofMap::DofMap(const Mesh& mesh, int degree, std::vector<FieldSpec> fields)
    : _degree(degree), _fields(std::move(fields))
{
  if (degree != 1 and degree != 2)
    throw ParameterError("DofMap: unsupported degree " + std::to_string(degree));
  if (_fields.empty())
    throw ParameterError("DofMap: at least one field required");

  _nodes_per_element = (degree == 1) ? 3 : 6;
  const std::size_t ne = mesh.num_elements();
  _element_nodes.resize(ne * _nodes_per_element);
  _node_points = mesh.points();

  std::unordered_map<std::uint64_t, std::int32_t> edge_nodes;
  for (std::size_t k = 0; k < ne; ++k)
  {
    const Element& e = mesh.elements()[k];
    std::int32_t* nodes = _element_nodes.data() + k * _nodes_per_element;
    for (int i = 0; i < 3; ++i)
      nodes[i] = e.vertices[i];
    if (degree == 2)
    {
      for (int i = 0; i < 3; ++i)
      {
        std::int32_t a = e.vertices[i], b = e.vertices[(i + 1) % 3];
        if (a > b)
          std::swap(a, b);
        const std::uint64_t key
            = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
        auto [it, inserted] = edge_nodes.try_emplace(
            key, static_cast<std::int32_t>(_node_points.size()));
        if (inserted)
        {
          const Point& pa = _node_points[a];
          const Point& pb = _node_points[b];
          _node_points.push_back({0.5 * (pa.t + pb.t), 0.5 * (pa.x + pb.x)});
        }
        nodes[3 + i] = it->second;
      }
    }
  }

  const std::size_t nn = _node_points.size();
  _node_dofs.assign(_fields.size(), std::vector<std::int32_t>(nn, 0));
  for (std::size_t f = 0; f < _fields.size(); ++f)
  {
    const FacetTagMask mask = _fields[f].constrained_tags;
    if (mask == 0)
      continue;
    auto& constrained = _node_dofs[f];
    for (std::size_t k = 0; k < ne; ++k)
    {
      const Element& e = mesh.elements()[k];
      const std::int32_t* nodes = _element_nodes.data() + k * _nodes_per_element;
      for (int i = 0; i < 3; ++i)
      {
        if ((tag_bit(e.tags[i]) & mask) == 0)
          continue;
        constrained[nodes[i]] = -1;
        constrained[nodes[(i + 1) % 3]] = -1;
        if (degree == 2)
          constrained[nodes[3 + i]] = -1;
      }
    }
  }

  _field_size.resize(_fields.size());
  _field_offset.resize(_fields.size());
  std::int32_t next = 0;
  for (std::size_t f = 0; f < _fields.size(); ++f)
  {
    _field_offset[f] = static_cast<std::size_t>(next);
    for (auto& d : _node_dofs[f])
      d = (d < 0) ? -1 : next++;
    _field_size[f] = static_cast<std::size_t>(next) - _field_offset[f];
  }
  _num_dofs = static_cast<std::size_t>(next);
}
//-----------------------------------------------------------------------------
DofMap build_dofmap(const Mesh& mesh, int degree, std::vector<FieldSpec> fields)
{
  return DofMap(mesh, degree, std::move(fields));
}
//-----------------------------------------------------------------------------
DofMap build_dofmap(const Mesh& mesh, int degree, bool constrain_lateral)
{
  FieldSpec u1;
  if (constrain_lateral)
    u1.constrained_tags = tag_bit(FacetTag::LateralDirichlet);
  return DofMap(mesh, degree, {u1, FieldSpec{}});
}
//-----------------------------------------------------------------------------
FieldJet evaluate_field(std::span<const double> coeffs, const DofMap& dofmap,
                        const ReferenceElement& ref, const AffineMap& map,
                        std::int32_t k, std::size_t field,
                        std::array<double, 2> xi)
{
  if (coeffs.size() != dofmap.num_dofs())
    throw ParameterError("evaluate_field: coefficient vector size mismatch");
  const std::size_t n = ref.num_nodes();
  std::array<double, 6> values{};
  std::array<std::array<double, 2>, 6> grads{};
  ref.evaluate(xi, std::span(values).first(n));
  ref.evaluate_gradients(xi, std::span(grads).first(n));

  FieldJet jet;
  std::array<double, 2> ref_grad{0.0, 0.0};
  const auto nodes = dofmap.element_nodes(k);
  for (std::size_t i = 0; i < n; ++i)
  {
    const std::int32_t d = dofmap.dof(field, nodes[i]);
    if (d < 0)
      continue;
    jet.value += coeffs[d] * values[i];
    ref_grad[0] += coeffs[d] * grads[i][0];
    ref_grad[1] += coeffs[d] * grads[i][1];
  }
  jet.grad = map.gradient(ref_grad);
  return jet;
}
//-----------------------------------------------------------------------------
FieldJet evaluate_field(std::span<const double> coeffs, const DofMap& dofmap,
                        const Mesh& mesh, std::int32_t k, std::size_t field,
                        std::array<double, 2> xi)
{
  if (k < 0 or static_cast<std::size_t>(k) >= mesh.num_elements())
    throw ParameterError("evaluate_field: element index out of range");
  if (field >= dofmap.num_fields())
    throw ParameterError("evaluate_field: field index out of range");
  return evaluate_field(coeffs, dofmap, ReferenceElement(dofmap.degree()),
                        affine_map(mesh, k), k, field, xi);
}
//-----------------------------------------------------------------------------
void interpolate(std::span<double> coeffs, const DofMap& dofmap,
                 std::size_t field, const std::function<double(Point)>& fn)
{
  if (coeffs.size() != dofmap.num_dofs())
    throw ParameterError("interpolate: coefficient vector size mismatch");
  for (std::size_t node = 0; node < dofmap.num_nodes(); ++node)
  {
    const std::int32_t d = dofmap.dof(field, static_cast<std::int32_t>(node));
    if (d >= 0)
      coeffs[d] = fn(dofmap.node_point(static_cast<std::int32_t>(node)));
  }
}

} // namespace stfosls
