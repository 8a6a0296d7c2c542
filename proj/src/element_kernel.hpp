#pragma once

// Per-element images of the local basis under G, shared by assembly, the
// Galerkin defect and the estimator. Not part of the public interface.

#include "stfosls/mesh.hpp"
#include "stfosls/quadrature.hpp"
#include "stfosls/spaces.hpp"
#include "stfosls/system.hpp"

#include <cstdint>
#include <vector>

namespace stfosls::detail
{

class ElementKernel
{
public:
  ElementKernel(const Mesh& mesh, const DofMap& dofmap,
                const FirstOrderSystem& system, int quadrature_degree);

  /// Evaluate everything for element k.
  void compute(std::int32_t k);

  std::size_t num_local() const { return _num_local; }
  std::size_t num_components() const { return _num_components; }
  std::size_t num_points() const { return _weights.size(); }

  /// Global dof of local function l = field * nodes_per_element + node.
  std::int32_t dof(std::size_t l) const { return _dofs[l]; }

  double weight(std::size_t q) const { return _weights[q]; }
  const Point& point(std::size_t q) const { return _points[q]; }

  /// Component c of G applied to local basis function l at point q.
  double image(std::size_t q, std::size_t l, std::size_t c) const
  {
    return _images[(q * _num_local + l) * _num_components + c];
  }
  double data(std::size_t q, std::size_t c) const
  {
    return _data[q * _num_components + c];
  }

  /// Initial-facet quadrature points of the current element. Basis values are
  /// those of field 0 (local indices 0 .. nodes_per_element - 1).
  struct TracePoint
  {
    double weight;
    Point point;
    double target;
    std::vector<double> basis;
  };
  const std::vector<TracePoint>& trace_points() const { return _trace; }

  std::size_t nodes_per_element() const { return _nodes_per_element; }

private:
  const Mesh& _mesh;
  const DofMap& _dofmap;
  const FirstOrderSystem& _system;
  ReferenceElement _ref;
  QuadratureRule _rule;
  QuadratureRule _edge_rule;
  ReferenceElement::Table _table;
  std::array<ReferenceElement::Table, 3> _edge_tables;
  std::size_t _num_fields;
  std::size_t _nodes_per_element;
  std::size_t _num_local;
  std::size_t _num_components;
  bool _has_trace;
  PointOperator _op;

  std::vector<std::int32_t> _dofs;
  std::vector<double> _weights;
  std::vector<Point> _points;
  std::vector<double> _images;
  std::vector<double> _data;
  std::vector<TracePoint> _trace;
};

} // namespace stfosls::detail
