#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace stfosls
{

/// Number of spatial dimensions. The space-time mesh has spatial_dim + 1
/// dimensions; refinement and quadrature are implemented for triangles only.
inline constexpr int spatial_dim = 1;

/// A point of the space-time cylinder (0,T) x (a,b).
struct Point
{
  double t = 0.0;
  double x = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Classification of an element edge. Tags other than Interior mark a part of
/// the boundary of the computational rectangle.
enum class FacetTag : std::uint8_t
{
  Interior = 0,
  LateralDirichlet = 1, ///< I x {a,b}
  Initial = 2,          ///< {0} x Omega
  Final = 4,            ///< {T} x Omega
};

std::string_view to_string(FacetTag tag);
FacetTag facet_tag_from_string(std::string_view name);

/// Bit set of facet tags.
using FacetTagMask = std::uint8_t;

constexpr FacetTagMask tag_bit(FacetTag tag)
{
  return static_cast<FacetTagMask>(tag);
}

/// Triangle with vertices in counterclockwise order.
///
/// Local edge e joins local vertices e and (e + 1) % 3. Edge 0 is the
/// refinement edge, so local vertex 2 is the newest vertex.
struct Element
{
  std::array<std::int32_t, 3> vertices{};
  std::int32_t generation = 0;
  std::array<FacetTag, 3> tags{FacetTag::Interior, FacetTag::Interior,
                               FacetTag::Interior};
};

/// Set of element indices, sorted ascending without duplicates.
using MarkSet = std::vector<std::int32_t>;

/// Conforming triangulation of the space-time rectangle.
///
/// Mesh values are immutable in practice: refinement returns a new mesh.
class Mesh
{
public:
  Mesh() = default;
  Mesh(std::vector<Point> points, std::vector<Element> elements);

  const std::vector<Point>& points() const { return _points; }
  const std::vector<Element>& elements() const { return _elements; }
  std::size_t num_points() const { return _points.size(); }
  std::size_t num_elements() const { return _elements.size(); }

  const Element& element(std::int32_t k) const { return _elements[k]; }

  /// Coordinates of the three vertices of element k.
  std::array<Point, 3> coordinates(std::int32_t k) const;

  /// Vertex pair of local edge e of element k.
  std::pair<std::int32_t, std::int32_t> edge(std::int32_t k, int e) const;

private:
  std::vector<Point> _points;
  std::vector<Element> _elements;
};

/// Structured mesh of (0,t_end) x (a,b) with nt x nx cells, each split along
/// the diagonal from (t_i,x_j) to (t_{i+1},x_{j+1}). The diagonal is the
/// longest edge and the refinement edge of both triangles in a cell, so the
/// assignment is compatible.
Mesh uniform_initial_mesh(double t_end, std::pair<double, double> omega,
                          int nt, int nx);

/// Newest vertex bisection of at least all marked elements plus the closure
/// needed for conformity.
Mesh bisect(const Mesh& mesh, std::span<const std::int32_t> marks);

/// Bisect every element once.
Mesh bisect_all(const Mesh& mesh);

/// Area of element k.
double element_measure(const Mesh& mesh, std::int32_t k);

/// max_K |K|^{1/2}
double max_mesh_size(const Mesh& mesh);

/// All elements sharing at least one vertex with element k (including k),
/// sorted ascending.
std::vector<std::int32_t> element_patch(const Mesh& mesh, std::int32_t k);

/// Edges of element k tagged Initial, as (local edge, vertex pair).
std::vector<std::pair<int, std::pair<std::int32_t, std::int32_t>>>
initial_facets(const Mesh& mesh, std::int32_t k);

/// True iff every interior edge has exactly two incident elements, every
/// boundary edge exactly one, and the tags agree with the incidence.
bool is_conforming(const Mesh& mesh);

/// Number of distinct triangle shapes (sorted angle triples, up to a
/// relative tolerance) present in the mesh.
std::size_t similarity_class_count(const Mesh& mesh);

/// Write the ASCII "spacetime-mesh v1" dump.
void write_mesh(std::ostream& out, const Mesh& mesh);

/// Read a mesh written by write_mesh.
Mesh read_mesh(std::istream& in);

} // namespace stfosls
