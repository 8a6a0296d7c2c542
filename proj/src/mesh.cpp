#include "stfosls/mesh.hpp"
#include "stfosls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace stfosls
{

namespace
{

std::uint64_t edge_key(std::int32_t a, std::int32_t b)
{
  if (a > b)
    std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double signed_area(const Point& p0, const Point& p1, const Point& p2)
{
  return 0.5 * ((p1.t - p0.t) * (p2.x - p0.x) - (p1.x - p0.x) * (p2.t - p0.t));
}

} // namespace

std::string_view to_string(FacetTag tag)
{
  switch (tag)
  {
  case FacetTag::Interior:
    return "Interior";
  case FacetTag::LateralDirichlet:
    return "LateralDirichlet";
  case FacetTag::Initial:
    return "Initial";
  case FacetTag::Final:
    return "Final";
  }
  return "Interior";
}

FacetTag facet_tag_from_string(std::string_view name)
{
  for (FacetTag tag : {FacetTag::Interior, FacetTag::LateralDirichlet,
                       FacetTag::Initial, FacetTag::Final})
  {
    if (to_string(tag) == name)
      return tag;
  }
  throw ParameterError("unknown facet tag: " + std::string(name));
}

//-----------------------------------------------------------------------------
Mesh::Mesh(std::vector<Point> points, std::vector<Element> elements)
    : _points(std::move(points)), _elements(std::move(elements))
{
  const auto np = static_cast<std::int32_t>(_points.size());
  for (const Point& p : _points)
  {
    if (!std::isfinite(p.t) or !std::isfinite(p.x))
      throw ParameterError("mesh point with non-finite coordinate");
  }
  for (const Element& e : _elements)
  {
    const auto& v = e.vertices;
    for (std::int32_t i : v)
    {
      if (i < 0 or i >= np)
        throw ParameterError("element vertex index out of range");
    }
    if (v[0] == v[1] or v[1] == v[2] or v[0] == v[2])
      throw ParameterError("element with repeated vertex");
    if (signed_area(_points[v[0]], _points[v[1]], _points[v[2]]) <= 0.0)
      throw ParameterError("element with non-positive signed area");
    if (e.generation < 0)
      throw ParameterError("negative element generation");
  }
}
//-----------------------------------------------------------------------------
std::array<Point, 3> Mesh::coordinates(std::int32_t k) const
{
  const auto& v = _elements[k].vertices;
  return {_points[v[0]], _points[v[1]], _points[v[2]]};
}
//-----------------------------------------------------------------------------
std::pair<std::int32_t, std::int32_t> Mesh::edge(std::int32_t k, int e) const
{
  const auto& v = _elements[k].vertices;
  return {v[e], v[(e + 1) % 3]};
}
//-----------------------------------------------------------------------------
Mesh uniform_initial_mesh(double t_end, std::pair<double, double> omega,
                          int nt, int nx)
{
  const auto [a, b] = omega;
  if (!(t_end > 0.0) or !(a < b) or nt < 1 or nx < 1)
    throw ParameterError("uniform_initial_mesh: invalid dimensions");

  std::vector<Point> points;
  points.reserve((nt + 1) * (nx + 1));
  for (int i = 0; i <= nt; ++i)
  {
    // Exact end values on the boundary lines.
    const double t = (i == nt) ? t_end : t_end * i / nt;
    for (int j = 0; j <= nx; ++j)
    {
      const double x = (j == nx) ? b : a + (b - a) * j / nx;
      points.push_back({t, x});
    }
  }

  auto index = [nx](int i, int j) { return i * (nx + 1) + j; };

  std::vector<Element> elements;
  elements.reserve(2 * nt * nx);
  for (int i = 0; i < nt; ++i)
  {
    for (int j = 0; j < nx; ++j)
    {
      const std::int32_t p00 = index(i, j);
      const std::int32_t p10 = index(i + 1, j);
      const std::int32_t p01 = index(i, j + 1);
      const std::int32_t p11 = index(i + 1, j + 1);

      // Lower triangle: edges (p11,p00) diagonal, (p00,p10) on x = x_j,
      // (p10,p11) on t = t_{i+1}.
      Element lower;
      lower.vertices = {p11, p00, p10};
      lower.tags[1] = (j == 0) ? FacetTag::LateralDirichlet : FacetTag::Interior;
      lower.tags[2] = (i + 1 == nt) ? FacetTag::Final : FacetTag::Interior;
      elements.push_back(lower);

      // Upper triangle: edges (p00,p11) diagonal, (p11,p01) on x = x_{j+1},
      // (p01,p00) on t = t_i.
      Element upper;
      upper.vertices = {p00, p11, p01};
      upper.tags[1]
          = (j + 1 == nx) ? FacetTag::LateralDirichlet : FacetTag::Interior;
      upper.tags[2] = (i == 0) ? FacetTag::Initial : FacetTag::Interior;
      elements.push_back(upper);
    }
  }
  return Mesh(std::move(points), std::move(elements));
}
//-----------------------------------------------------------------------------
Mesh bisect(const Mesh& mesh, std::span<const std::int32_t> marks)
{
  const auto& elements = mesh.elements();
  const auto ne = static_cast<std::int32_t>(elements.size());

  std::unordered_set<std::uint64_t> marked_edges;
  for (std::int32_t k : marks)
  {
    if (k < 0 or k >= ne)
      throw ParameterError("bisect: marked element out of range");
    const auto& v = elements[k].vertices;
    marked_edges.insert(edge_key(v[0], v[1]));
  }
  if (marked_edges.empty())
    return mesh;

  // Closure: an element with any marked edge must also have its refinement
  // edge marked. Iterate to a fixpoint.
  bool changed = true;
  while (changed)
  {
    changed = false;
    for (const Element& e : elements)
    {
      const auto& v = e.vertices;
      const std::uint64_t ref = edge_key(v[0], v[1]);
      if (marked_edges.contains(ref))
        continue;
      if (marked_edges.contains(edge_key(v[1], v[2]))
          or marked_edges.contains(edge_key(v[2], v[0])))
      {
        marked_edges.insert(ref);
        changed = true;
      }
    }
  }

  std::vector<Point> points = mesh.points();
  std::unordered_map<std::uint64_t, std::int32_t> midpoints;
  auto midpoint = [&](std::int32_t a, std::int32_t b)
  {
    const std::uint64_t key = edge_key(a, b);
    if (auto it = midpoints.find(key); it != midpoints.end())
      return it->second;
    const Point& pa = points[a];
    const Point& pb = points[b];
    const auto m = static_cast<std::int32_t>(points.size());
    points.push_back({0.5 * (pa.t + pb.t), 0.5 * (pa.x + pb.x)});
    midpoints.emplace(key, m);
    return m;
  };

  std::vector<Element> refined;
  refined.reserve(elements.size() + 3 * marked_edges.size());

  // Each element is bisected at most three times (its refinement edge and
  // then the refinement edges of the two children). An explicit stack keeps
  // the output order depth-first: first child subtree, then second.
  std::vector<Element> stack;
  for (const Element& root : elements)
  {
    stack.push_back(root);
    while (!stack.empty())
    {
      Element e = stack.back();
      stack.pop_back();
      const auto [v0, v1, v2] = e.vertices;
      if (!marked_edges.contains(edge_key(v0, v1)))
      {
        refined.push_back(e);
        continue;
      }
      const std::int32_t m = midpoint(v0, v1);

      Element first;
      first.vertices = {v2, v0, m};
      first.generation = e.generation + 1;
      first.tags = {e.tags[2], e.tags[0], FacetTag::Interior};

      Element second;
      second.vertices = {v1, v2, m};
      second.generation = e.generation + 1;
      second.tags = {e.tags[1], FacetTag::Interior, e.tags[0]};

      stack.push_back(second);
      stack.push_back(first);
    }
  }
  return Mesh(std::move(points), std::move(refined));
}
//-----------------------------------------------------------------------------
Mesh bisect_all(const Mesh& mesh)
{
  MarkSet all(mesh.num_elements());
  for (std::size_t k = 0; k < all.size(); ++k)
    all[k] = static_cast<std::int32_t>(k);
  return bisect(mesh, all);
}
//-----------------------------------------------------------------------------
double element_measure(const Mesh& mesh, std::int32_t k)
{
  const auto p = mesh.coordinates(k);
  return signed_area(p[0], p[1], p[2]);
}
//-----------------------------------------------------------------------------
double max_mesh_size(const Mesh& mesh)
{
  double h = 0.0;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
    h = std::max(h, element_measure(mesh, static_cast<std::int32_t>(k)));
  return std::sqrt(h);
}
//-----------------------------------------------------------------------------
std::vector<std::int32_t> element_patch(const Mesh& mesh, std::int32_t k)
{
  const auto& vk = mesh.element(k).vertices;
  std::vector<std::int32_t> patch;
  for (std::size_t j = 0; j < mesh.num_elements(); ++j)
  {
    const auto& vj = mesh.elements()[j].vertices;
    const bool shares = std::any_of(vj.begin(), vj.end(), [&](std::int32_t v)
                                    { return std::ranges::find(vk, v) != vk.end(); });
    if (shares)
      patch.push_back(static_cast<std::int32_t>(j));
  }
  return patch;
}
//-----------------------------------------------------------------------------
std::vector<std::pair<int, std::pair<std::int32_t, std::int32_t>>>
initial_facets(const Mesh& mesh, std::int32_t k)
{
  std::vector<std::pair<int, std::pair<std::int32_t, std::int32_t>>> facets;
  const Element& e = mesh.element(k);
  for (int i = 0; i < 3; ++i)
  {
    if (e.tags[i] == FacetTag::Initial)
      facets.emplace_back(i, mesh.edge(k, i));
  }
  return facets;
}
//-----------------------------------------------------------------------------
bool is_conforming(const Mesh& mesh)
{
  struct EdgeUse
  {
    int count = 0;
    int boundary = 0;
  };
  std::unordered_map<std::uint64_t, EdgeUse> edges;
  for (const Element& e : mesh.elements())
  {
    for (int i = 0; i < 3; ++i)
    {
      auto& use = edges[edge_key(e.vertices[i], e.vertices[(i + 1) % 3])];
      ++use.count;
      if (e.tags[i] != FacetTag::Interior)
        ++use.boundary;
    }
  }
  for (const auto& [key, use] : edges)
  {
    if (use.boundary == 0 and use.count != 2)
      return false;
    if (use.boundary > 0 and (use.count != 1 or use.boundary != 1))
      return false;
  }
  return true;
}
//-----------------------------------------------------------------------------
std::size_t similarity_class_count(const Mesh& mesh)
{
  std::set<std::array<long long, 3>> classes;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const auto p = mesh.coordinates(static_cast<std::int32_t>(k));
    std::array<double, 3> angles;
    for (int i = 0; i < 3; ++i)
    {
      const Point& a = p[i];
      const Point& b = p[(i + 1) % 3];
      const Point& c = p[(i + 2) % 3];
      const double ux = b.t - a.t, uy = b.x - a.x;
      const double vx = c.t - a.t, vy = c.x - a.x;
      angles[i] = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
    }
    std::ranges::sort(angles);
    std::array<long long, 3> key;
    for (int i = 0; i < 3; ++i)
      key[i] = std::llround(angles[i] / std::numbers::pi * 1e8);
    classes.insert(key);
  }
  return classes.size();
}
//-----------------------------------------------------------------------------
void write_mesh(std::ostream& out, const Mesh& mesh)
{
  std::ostringstream s;
  s.precision(17);
  s << "spacetime-mesh v1\n";
  s << mesh.num_points() << ' ' << mesh.num_elements() << '\n';
  for (const Point& p : mesh.points())
    s << p.t << ' ' << p.x << '\n';
  for (const Element& e : mesh.elements())
  {
    s << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.vertices[2] << ' '
      << e.generation << '\n';
  }
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const Element& e = mesh.elements()[k];
    for (int i = 0; i < 3; ++i)
    {
      if (e.tags[i] != FacetTag::Interior)
        s << k << ' ' << i << ' ' << to_string(e.tags[i]) << '\n';
    }
  }
  out << s.str();
}
//-----------------------------------------------------------------------------
Mesh read_mesh(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line) or line != "spacetime-mesh v1")
    throw ParameterError("read_mesh: missing 'spacetime-mesh v1' header");
  std::size_t np = 0, ne = 0;
  if (!(in >> np >> ne))
    throw ParameterError("read_mesh: bad size line");
  std::vector<Point> points(np);
  for (Point& p : points)
  {
    if (!(in >> p.t >> p.x))
      throw ParameterError("read_mesh: truncated point list");
  }
  std::vector<Element> elements(ne);
  for (Element& e : elements)
  {
    if (!(in >> e.vertices[0] >> e.vertices[1] >> e.vertices[2] >> e.generation))
      throw ParameterError("read_mesh: truncated element list");
  }
  std::size_t k = 0;
  int i = 0;
  std::string tag;
  while (in >> k >> i >> tag)
  {
    if (k >= ne or i < 0 or i > 2)
      throw ParameterError("read_mesh: facet tag index out of range");
    elements[k].tags[i] = facet_tag_from_string(tag);
  }
  if (!in.eof())
    throw ParameterError("read_mesh: malformed facet tag line");
  return Mesh(std::move(points), std::move(elements));
}

} // namespace stfosls
