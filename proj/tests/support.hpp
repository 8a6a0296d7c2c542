#pragma once

#include "stfosls/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

namespace test
{

inline std::array<std::int32_t, 3> sorted_vertices(const stfosls::Element& e)
{
  auto v = e.vertices;
  std::sort(v.begin(), v.end());
  return v;
}

/// Random mark set: each element independently with probability `fraction`.
inline stfosls::MarkSet random_marks(const stfosls::Mesh& mesh, double fraction,
                                     std::mt19937_64& rng)
{
  std::bernoulli_distribution pick(fraction);
  stfosls::MarkSet marks;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    if (pick(rng))
      marks.push_back(static_cast<std::int32_t>(k));
  }
  return marks;
}

/// Mesh of `steps` random refinements of a uniform start mesh.
inline stfosls::Mesh random_mesh(int nt, int nx, int steps, double fraction,
                                 std::mt19937_64& rng)
{
  stfosls::Mesh mesh = stfosls::uniform_initial_mesh(1.0, {0.0, 1.0}, nt, nx);
  for (int s = 0; s < steps; ++s)
    mesh = stfosls::bisect(mesh, random_marks(mesh, fraction, rng));
  return mesh;
}

inline double edge_length(const stfosls::Point& a, const stfosls::Point& b)
{
  return std::hypot(b.t - a.t, b.x - a.x);
}

} // namespace test
