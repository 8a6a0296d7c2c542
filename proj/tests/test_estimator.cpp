#include "stfosls/assembly.hpp"
#include "stfosls/cases.hpp"
#include "stfosls/estimator.hpp"
#include "stfosls/oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

using namespace stfosls;

namespace
{

std::vector<double> solve(const Mesh& mesh, const DofMap& dm,
                          const FirstOrderSystem& sys, int qdeg)
{
  const SparseSystem s = assemble(mesh, dm, sys, qdeg);
  return solve_cg(s.matrix, s.rhs).coefficients;
}

/// ||f - G u||_L by one pass over all quadrature points of the mesh.
double single_sweep(const Mesh& mesh, const DofMap& dm, const FirstOrderSystem& sys,
                    std::span<const double> u, int qdeg)
{
  const QuadratureRule rule = triangle_quadrature(qdeg);
  const QuadratureRule line = edge_quadrature(qdeg);
  std::vector<Point> points;
  std::vector<double> weights;
  std::vector<std::vector<FieldJet>> jets;
  for (std::int32_t k = 0; k < static_cast<std::int32_t>(mesh.num_elements()); ++k)
  {
    const AffineMap map = affine_map(mesh, k);
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      points.push_back(map.map(rule.points[q]));
      weights.push_back(rule.weights[q] * map.det);
      std::vector<FieldJet> j;
      for (std::size_t f = 0; f < dm.num_fields(); ++f)
        j.push_back(evaluate_field(u, dm, mesh, k, f, rule.points[q]));
      jets.push_back(std::move(j));
    }
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
  {
    const auto g = eval_G(sys, points[i], jets[i]);
    const auto f = eval_data(sys, points[i]);
    for (std::size_t c = 0; c < g.size(); ++c)
      sum += weights[i] * (f[c] - g[c]) * (f[c] - g[c]);
  }
  if (sys.has_initial_trace())
  {
    for (std::int32_t k = 0; k < static_cast<std::int32_t>(mesh.num_elements()); ++k)
    {
      for (const auto& [e, verts] : initial_facets(mesh, k))
      {
        const Point& a = mesh.points()[verts.first];
        const Point& b = mesh.points()[verts.second];
        const double length = test::edge_length(a, b);
        const auto corner = [&](int i) { return i == 0 ? std::array{0.0, 0.0}
                                               : i == 1 ? std::array{1.0, 0.0}
                                                        : std::array{0.0, 1.0}; };
        const auto ra = corner(e), rb = corner((e + 1) % 3);
        for (std::size_t q = 0; q < line.size(); ++q)
        {
          const double s = line.points[q][0];
          const std::array<double, 2> xi{ra[0] + s * (rb[0] - ra[0]),
                                         ra[1] + s * (rb[1] - ra[1])};
          const Point p{a.t + s * (b.t - a.t), a.x + s * (b.x - a.x)};
          const double r = sys.initial_data(p) - evaluate_field(u, dm, mesh, k, 0, xi).value;
          sum += line.weights[q] * length * r * r;
        }
      }
    }
  }
  return std::sqrt(sum);
}

std::array<double, 2> locate(const Mesh& mesh, std::int32_t k, Point p)
{
  const AffineMap m = affine_map(mesh, k);
  const auto& it = m.inverse_transpose;
  const double dt = p.t - m.origin.t, dx = p.x - m.origin.x;
  return {it[0][0] * dt + it[1][0] * dx, it[0][1] * dt + it[1][1] * dx};
}

/// Transfer a discrete function from `coarse` to a refinement `fine`.
std::vector<double> prolongate(const Mesh& coarse, const DofMap& cdm,
                               std::span<const double> u, const DofMap& fdm)
{
  std::vector<double> out(fdm.num_dofs(), 0.0);
  for (std::size_t f = 0; f < fdm.num_fields(); ++f)
  {
    interpolate(out, fdm, f, [&](Point p)
    {
      for (std::int32_t k = 0; k < static_cast<std::int32_t>(coarse.num_elements()); ++k)
      {
        const auto xi = locate(coarse, k, p);
        if (xi[0] >= -1e-12 and xi[1] >= -1e-12 and xi[0] + xi[1] <= 1 + 1e-12)
          return evaluate_field(u, cdm, coarse, k, f, xi).value;
      }
      return std::numeric_limits<double>::quiet_NaN();
    });
  }
  return out;
}

} // namespace

TEST_CASE("zero discrete solution: indicators are the data")
{
  ParabolicProblem problem;
  problem.data.f1 = [](Point p) { return std::sin(3 * p.t) + p.x; };
  const ParabolicSystem sys(problem);
  const Mesh mesh = uniform_initial_mesh(1.0, {0.0, 1.0}, 2, 2);
  const DofMap dm(mesh, 1, sys.fields());
  const std::vector<double> zero(dm.num_dofs(), 0.0);
  const Indicators ind = compute_indicators(mesh, dm, sys, zero, 10);
  const QuadratureRule rule = triangle_quadrature(16);
  for (std::int32_t k = 0; k < static_cast<std::int32_t>(mesh.num_elements()); ++k)
  {
    const auto c = mesh.coordinates(k);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const auto& xi = rule.points[q];
      const Point p{c[0].t + xi[0] * (c[1].t - c[0].t) + xi[1] * (c[2].t - c[0].t),
                    c[0].x + xi[0] * (c[1].x - c[0].x) + xi[1] * (c[2].x - c[0].x)};
      sum += rule.weights[q] * 2 * element_measure(mesh, k) * std::pow(problem.data.f1(p), 2);
    }
    CHECK(ind.local[k] * ind.local[k] == doctest::Approx(sum).epsilon(1e-10));
  }
}

TEST_CASE("indicators are additive and match a single sweep")
{
  std::mt19937_64 rng(51);
  const Mesh mesh = test::random_mesh(2, 2, 3, 0.4, rng);
  for (const char* name : {"heat-smooth", "convection-reaction", "incompatible",
                           "poisson-smooth"})
  {
    const BuiltinCase bc = make_case(name);
    for (int p : {1, 2})
    {
      const DofMap dm(mesh, p, bc.system->fields());
      const int q = default_quadrature_degree(p);
      const auto u = solve(mesh, dm, *bc.system, q);
      const Indicators ind = compute_indicators(mesh, dm, *bc.system, u, q);
      double sum = 0.0;
      for (double e : ind.local)
      {
        CHECK(e >= 0.0);
        sum += e * e;
      }
      CHECK(std::abs(ind.global * ind.global - sum) <= 1e-13 * sum);
      CHECK(ind.global == doctest::Approx(single_sweep(mesh, dm, *bc.system, u, q)).epsilon(1e-13));
    }
  }
}

TEST_CASE("indicators are local")
{
  const BuiltinCase bc = make_case("convection-reaction");
  const Mesh coarse = uniform_initial_mesh(1.0, {0.0, 1.0}, 3, 3);
  // refine only elements touching t > 0.6
  MarkSet marks;
  for (std::int32_t k = 0; k < static_cast<std::int32_t>(coarse.num_elements()); ++k)
  {
    const auto c = coarse.coordinates(k);
    if (c[0].t > 0.6 or c[1].t > 0.6 or c[2].t > 0.6)
      marks.push_back(k);
  }
  const Mesh fine = bisect(coarse, marks);
  for (int p : {1, 2})
  {
    const DofMap cdm(coarse, p, bc.system->fields());
    const DofMap fdm(fine, p, bc.system->fields());
    const int q = default_quadrature_degree(p);
    const auto u = solve(coarse, cdm, *bc.system, q);
    const auto v = prolongate(coarse, cdm, u, fdm);
    const Indicators before = compute_indicators(coarse, cdm, *bc.system, u, q);
    const Indicators after = compute_indicators(fine, fdm, *bc.system, v, q);

    std::map<std::array<std::int32_t, 3>, std::int32_t> index;
    for (std::int32_t k = 0; k < static_cast<std::int32_t>(coarse.num_elements()); ++k)
      index[test::sorted_vertices(coarse.element(k))] = k;
    int unchanged = 0;
    for (std::int32_t k = 0; k < static_cast<std::int32_t>(fine.num_elements()); ++k)
    {
      const auto it = index.find(test::sorted_vertices(fine.element(k)));
      if (it == index.end())
        continue;
      ++unchanged;
      CHECK(after.local[k] == doctest::Approx(before.local[it->second]).epsilon(1e-12));
    }
    CHECK(unchanged > 0);
    // the functional itself is unchanged (up to quadrature of the data)
    const double exact_before = compute_indicators(coarse, cdm, *bc.system, u, 16).global;
    const double exact_after = compute_indicators(fine, fdm, *bc.system, v, 16).global;
    CHECK(exact_after == doctest::Approx(exact_before).epsilon(1e-11));
  }
}

TEST_CASE("data in the range of G is reproduced")
{
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const Mesh mesh = test::random_mesh(2, 2, 2, 0.5, rng);
  for (const char* name : {"heat-smooth", "variable-a", "poisson-smooth"})
  {
    const BuiltinCase bc = make_case(name);
    for (int p : {1, 2})
    {
      const DofMap dm(mesh, p, bc.system->fields());
      std::vector<double> w(dm.num_dofs());
      for (double& v : w)
        v = coef(rng);
      const auto image = oracles::discrete_image_system(bc.system, mesh, dm, w);
      const int q = default_quadrature_degree(p) + 2;
      const SparseSystem s = assemble(mesh, dm, *image, q);
      const DiscreteSolution sol = solve_cg(s.matrix, s.rhs, 1e-14);
      const double eta = compute_indicators(mesh, dm, *image, sol.coefficients, q).global;
      CHECK(eta <= 1e-8 * data_norm(mesh, dm, *image, q));
      for (std::size_t i = 0; i < w.size(); ++i)
        CHECK(std::abs(sol.coefficients[i] - w[i]) <= 1e-8);
    }
  }
}

TEST_CASE("U-norm error of the zero function is the norm of the solution")
{
  for (const char* name : {"heat-smooth", "variable-a", "poisson-smooth"})
  {
    const BuiltinCase bc = make_case(name);
    const Mesh mesh = uniform_initial_mesh(1.0, {0.0, 1.0}, 4, 4);
    const DofMap dm(mesh, 1, bc.system->fields());
    const std::vector<double> zero(dm.num_dofs(), 0.0);
    const ErrorReport e = u_norm_error(mesh, dm, *bc.system, zero, *bc.exact, 14);
    const double ref = oracles::fine_norm(*bc.exact, *bc.system,
                                          uniform_initial_mesh(1.0, {0.0, 1.0}, 3, 5), 16);
    CHECK(e.combined == doctest::Approx(ref).epsilon(1e-10));
    const double squares = e.primary * e.primary + e.primary_gradient * e.primary_gradient
                           + e.flux * e.flux + e.divergence * e.divergence
                           + e.initial_trace * e.initial_trace;
    CHECK(e.combined * e.combined == doctest::Approx(squares).epsilon(1e-14));
    for (double v : {e.primary, e.primary_gradient, e.flux, e.divergence, e.initial_trace})
      CHECK(v >= 0.0);

    const Indicators ind = compute_indicators(mesh, dm, *bc.system, zero, 4);
    const double ratio = efficiency_reliability_ratio(ind, e);
    CHECK(std::isfinite(ratio));
    CHECK(ratio > 0.0);
  }
}

TEST_CASE("heat-case error components")
{
  // u = exp(-t) sin(pi x) on (0,1)^2:
  //   ||u||^2 = (1 - e^-2)/4, ||u_x||^2 = pi^2 (1 - e^-2)/4,
  //   ||u(0,.)||^2 = 1/2
  using std::numbers::pi;
  const BuiltinCase bc = make_case("heat-smooth");
  const Mesh mesh = uniform_initial_mesh(1.0, {0.0, 1.0}, 4, 4);
  const DofMap dm(mesh, 2, bc.system->fields());
  const std::vector<double> zero(dm.num_dofs(), 0.0);
  const ErrorReport e = u_norm_error(mesh, dm, *bc.system, zero, *bc.exact, 14);
  const double m = (1.0 - std::exp(-2.0)) / 4.0;
  CHECK(e.primary * e.primary == doctest::Approx(m).epsilon(1e-10));
  CHECK(e.primary_gradient * e.primary_gradient == doctest::Approx(pi * pi * m).epsilon(1e-10));
  CHECK(e.flux * e.flux == doctest::Approx(pi * pi * m).epsilon(1e-10));
  CHECK(e.divergence * e.divergence
        == doctest::Approx((pi * pi - 1) * (pi * pi - 1) * m).epsilon(1e-10));
  CHECK(e.initial_trace * e.initial_trace == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("vanishing error and the efficiency ratio")
{
  const ParabolicSystem sys(from_manufactured(zero_solution(), {}, ConvectionForm::Flux));
  const ExactSolution exact = exact_error_data(zero_solution(), {});
  const Mesh mesh = uniform_initial_mesh(1.0, {0.0, 1.0}, 2, 2);
  const DofMap dm(mesh, 1, sys.fields());
  const std::vector<double> zero(dm.num_dofs(), 0.0);
  const ErrorReport e = u_norm_error(mesh, dm, sys, zero, exact, 4);
  CHECK(e.combined == 0.0);
  const Indicators ind = compute_indicators(mesh, dm, sys, zero, 4);
  CHECK(ind.global == 0.0);
  CHECK(std::isinf(efficiency_reliability_ratio(ind, e)));
}
