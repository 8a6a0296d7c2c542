#pragma once

#include "stfosls/mesh.hpp"
#include "stfosls/quadrature.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace stfosls
{

/// Value and space-time gradient (d/dt, d/dx) of a scalar field at a point.
struct FieldJet
{
  double value = 0.0;
  std::array<double, 2> grad{0.0, 0.0};
};

/// Nodal Lagrange basis of degree 1 or 2 on the reference triangle.
///
/// Nodes are the three vertices (0,0), (1,0), (0,1) followed, for degree 2,
/// by the midpoints of local edges 0, 1, 2 (edge e joins vertices e and
/// e + 1 mod 3).
class ReferenceElement
{
public:
  explicit ReferenceElement(int degree);

  int degree() const { return _degree; }
  std::size_t num_nodes() const { return _nodes.size(); }
  const std::vector<std::array<double, 2>>& nodes() const { return _nodes; }

  /// Basis values at a reference point.
  void evaluate(std::array<double, 2> xi, std::span<double> values) const;

  /// Reference gradients (d/dxi, d/deta) at a reference point.
  void evaluate_gradients(std::array<double, 2> xi,
                          std::span<std::array<double, 2>> grads) const;

  /// Basis values and reference gradients at every point of a rule.
  struct Table
  {
    std::size_t num_points = 0;
    std::size_t num_basis = 0;
    std::vector<double> values;                 // [point][basis]
    std::vector<std::array<double, 2>> grads;   // [point][basis]

    double value(std::size_t q, std::size_t i) const
    {
      return values[q * num_basis + i];
    }
    const std::array<double, 2>& grad(std::size_t q, std::size_t i) const
    {
      return grads[q * num_basis + i];
    }
  };

  Table tabulate(const QuadratureRule& rule) const;

  /// Tabulate at points of a unit-interval rule placed on local edge e.
  Table tabulate_edge(const QuadratureRule& rule, int e) const;

private:
  int _degree;
  std::vector<std::array<double, 2>> _nodes;
};

ReferenceElement build_reference(int degree);

/// Quadrature of the default exactness 2p + 2 used for assembly and
/// estimation.
inline int default_quadrature_degree(int p) { return 2 * p + 2; }

/// Affine map from the reference triangle onto element K.
struct AffineMap
{
  Point origin;
  /// Columns are the images of the reference edge vectors.
  std::array<std::array<double, 2>, 2> jacobian{};
  /// Inverse transpose of the jacobian, used to pull back gradients.
  std::array<std::array<double, 2>, 2> inverse_transpose{};
  double det = 0.0;

  Point map(std::array<double, 2> xi) const;
  std::array<double, 2> gradient(const std::array<double, 2>& ref_grad) const;
};

AffineMap affine_map(const Mesh& mesh, std::int32_t k);

/// Constraint of one scalar field: Lagrange nodes on facets whose tag is in
/// the mask are fixed to zero and removed from the system.
struct FieldSpec
{
  FacetTagMask constrained_tags = 0;
};

/// Global numbering of the product space S^p x ... x S^p with homogeneous
/// Dirichlet constraints eliminated.
///
/// All scalar fields share one Lagrange node numbering (vertices first, then
/// edge midpoints in order of first appearance). Free dofs are numbered field
/// by field: all dofs of field 0, then field 1, ...
class DofMap
{
public:
  DofMap(const Mesh& mesh, int degree, std::vector<FieldSpec> fields);

  int degree() const { return _degree; }
  std::size_t num_fields() const { return _fields.size(); }
  std::size_t num_nodes() const { return _node_points.size(); }
  std::size_t nodes_per_element() const { return _nodes_per_element; }
  std::size_t num_dofs() const { return _num_dofs; }

  /// Number of free dofs of one field.
  std::size_t field_size(std::size_t f) const { return _field_size[f]; }
  std::size_t field_offset(std::size_t f) const { return _field_offset[f]; }

  std::span<const std::int32_t> element_nodes(std::int32_t k) const
  {
    return {_element_nodes.data() + k * _nodes_per_element, _nodes_per_element};
  }

  /// Global dof of (field, node), or -1 when the node is constrained.
  std::int32_t dof(std::size_t field, std::int32_t node) const
  {
    return _node_dofs[field][node];
  }

  const Point& node_point(std::int32_t node) const { return _node_points[node]; }

private:
  int _degree;
  std::vector<FieldSpec> _fields;
  std::size_t _nodes_per_element;
  std::vector<std::int32_t> _element_nodes;
  std::vector<Point> _node_points;
  std::vector<std::vector<std::int32_t>> _node_dofs;
  std::vector<std::size_t> _field_size;
  std::vector<std::size_t> _field_offset;
  std::size_t _num_dofs = 0;
};

DofMap build_dofmap(const Mesh& mesh, int degree,
                    std::vector<FieldSpec> fields);

/// Two-field parabolic space S^p(_0) x S^p: field 0 (u1) constrained on
/// LateralDirichlet facets iff constrain_lateral, field 1 (u2) unconstrained.
DofMap build_dofmap(const Mesh& mesh, int degree, bool constrain_lateral);

/// Value and gradient of one field of a discrete function on element k at a
/// reference point.
FieldJet evaluate_field(std::span<const double> coeffs, const DofMap& dofmap,
                        const ReferenceElement& ref, const AffineMap& map,
                        std::int32_t k, std::size_t field,
                        std::array<double, 2> xi);

FieldJet evaluate_field(std::span<const double> coeffs, const DofMap& dofmap,
                        const Mesh& mesh, std::int32_t k, std::size_t field,
                        std::array<double, 2> xi);

/// Nodal interpolation of a scalar function into one field. Constrained
/// nodes are skipped.
void interpolate(std::span<double> coeffs, const DofMap& dofmap,
                 std::size_t field, const std::function<double(Point)>& fn);

} // namespace stfosls
