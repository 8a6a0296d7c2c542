#include "stfosls/cases.hpp"
#include "stfosls/cli.hpp"
#include "stfosls/errors.hpp"
#include "stfosls/oracles.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <set>
#include <string>

namespace stfosls::cli
{

namespace
{

struct CheckResult
{
  bool ok = true;
  std::string detail;
};

void fail(CheckResult& r, const std::string& why)
{
  if (r.ok)
    r.detail = why;
  r.ok = false;
}

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

double factorial(int n)
{
  return std::tgamma(n + 1.0);
}

CheckResult quadrature_exactness(std::mt19937_64&)
{
  CheckResult r;
  double worst = 0.0;
  for (int d = 0; d <= 12; ++d)
  {
    const QuadratureRule rule = triangle_quadrature(d);
    for (int a = 0; a <= d; ++a)
    {
      for (int b = 0; a + b <= d; ++b)
      {
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
          sum += rule.weights[q] * std::pow(rule.points[q][0], a)
                 * std::pow(rule.points[q][1], b);
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        worst = std::max(worst, std::abs(sum - exact) / exact);
      }
    }
  }
  if (worst > 1e-13)
    fail(r, "relative error " + sci(worst));
  r.detail = r.ok ? "max relative error " + sci(worst) : r.detail;
  return r;
}

CheckResult reference_nodal(std::mt19937_64&)
{
  CheckResult r;
  for (int p : {1, 2})
  {
    const ReferenceElement ref(p);
    std::vector<double> v(ref.num_nodes());
    for (std::size_t j = 0; j < ref.num_nodes(); ++j)
    {
      ref.evaluate(ref.nodes()[j], v);
      for (std::size_t i = 0; i < v.size(); ++i)
      {
        const double expected = i == j ? 1.0 : 0.0;
        if (std::abs(v[i] - expected) > 1e-14)
          fail(r, "degree " + std::to_string(p) + " basis not nodal");
      }
    }
  }
  return r;
}

CheckResult nvb_conformity(std::mt19937_64& rng)
{
  CheckResult r;
  const Mesh base = uniform_initial_mesh(1.0, {0.0, 1.0}, 2, 2);
  for (int trial = 0; trial < 100 and r.ok; ++trial)
  {
    Mesh mesh = base;
    const int steps = 1 + static_cast<int>(rng() % 6);
    for (int s = 0; s < steps and r.ok; ++s)
    {
      std::bernoulli_distribution pick(0.3);
      MarkSet marks;
      for (std::size_t k = 0; k < mesh.num_elements(); ++k)
      {
        if (pick(rng))
          marks.push_back(static_cast<std::int32_t>(k));
      }
      const Mesh refined = bisect(mesh, marks);
      if (!is_conforming(refined))
        fail(r, "non-conforming mesh in trial " + std::to_string(trial));
      if (refined.num_elements() < mesh.num_elements() + marks.size())
        fail(r, "marked element not refined in trial " + std::to_string(trial));
      mesh = refined;
    }
    if (similarity_class_count(mesh) > 8 * base.num_elements())
      fail(r, "too many similarity classes in trial " + std::to_string(trial));
  }
  return r;
}

struct Instance
{
  std::string label;
  std::shared_ptr<const FirstOrderSystem> system;
  Mesh mesh;
  int degree;
};

std::vector<Instance> small_instances()
{
  std::vector<Instance> out;
  const Mesh mesh = uniform_initial_mesh(1.0, {0.0, 1.0}, 2, 2);
  const Mesh finer = bisect_all(bisect_all(mesh));
  for (const char* name : {"heat-smooth", "convection-reaction", "variable-a",
                           "poisson-smooth"})
  {
    const BuiltinCase bc = make_case(name);
    out.push_back({std::string(name) + "/p1", bc.system, finer, 1});
    out.push_back({std::string(name) + "/p2", bc.system, mesh, 2});
  }
  return out;
}

CheckResult dense_assembly_equivalence(std::mt19937_64&)
{
  CheckResult r;
  double worst = 0.0;
  for (const Instance& in : small_instances())
  {
    const DofMap dm(in.mesh, in.degree, in.system->fields());
    const int qdeg = default_quadrature_degree(in.degree);
    const SparseSystem sparse = assemble(in.mesh, dm, *in.system, qdeg);
    const oracles::DenseSystem dense
        = oracles::dense_assemble(in.mesh, dm, *in.system, qdeg);
    const double err = oracles::relative_frobenius(sparse.matrix, dense.matrix);
    worst = std::max(worst, err);
    if (err > 1e-12)
      fail(r, in.label + ": relative difference " + sci(err));
  }
  if (r.ok)
    r.detail = "max relative difference " + sci(worst);
  return r;
}

CheckResult cg_vs_dense(std::mt19937_64&)
{
  CheckResult r;
  double worst = 0.0;
  for (const Instance& in : small_instances())
  {
    const DofMap dm(in.mesh, in.degree, in.system->fields());
    const int qdeg = default_quadrature_degree(in.degree);
    const SparseSystem sparse = assemble(in.mesh, dm, *in.system, qdeg);
    const DiscreteSolution cg = solve_cg(sparse.matrix, sparse.rhs, 1e-12);
    const std::vector<double> x
        = oracles::dense_solve(oracles::to_dense(sparse.matrix), sparse.rhs);
    double diff = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
      diff = std::max(diff, std::abs(x[i] - cg.coefficients[i]));
      norm = std::max(norm, std::abs(x[i]));
    }
    const double err = diff / std::max(norm, 1.0);
    worst = std::max(worst, err);
    if (!cg.report.converged or err > 1e-8)
      fail(r, in.label + ": difference " + sci(err));
  }
  if (r.ok)
    r.detail = "max difference " + sci(worst);
  return r;
}

CheckResult spd_min_eigenvalue(std::mt19937_64&)
{
  CheckResult r;
  double smallest = std::numeric_limits<double>::infinity();
  for (const Instance& in : small_instances())
  {
    const DofMap dm(in.mesh, in.degree, in.system->fields());
    const oracles::DenseSystem dense = oracles::dense_assemble(
        in.mesh, dm, *in.system, default_quadrature_degree(in.degree));
    const double lambda = oracles::min_eigenvalue(dense.matrix);
    smallest = std::min(smallest, lambda);
    if (!(lambda > 0.0))
      fail(r, in.label + ": min eigenvalue " + sci(lambda));
  }
  if (r.ok)
    r.detail = "smallest eigenvalue " + sci(smallest);
  return r;
}

CheckResult marking_properties(std::mt19937_64& rng)
{
  CheckResult r;
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_real_distribution<double> theta_dist(0.05, 1.0);
  const auto identity = [](double t) { return t; };
  for (int trial = 0; trial < 100; ++trial)
  {
    std::vector<double> eta(1 + rng() % 40);
    for (double& e : eta)
      e = value(rng);
    if (trial % 4 == 0)
      eta[rng() % eta.size()] = eta[0]; // ties
    const double theta = theta_dist(rng);
    for (auto strategy : {MarkingStrategy::Doerfler, MarkingStrategy::Maximum})
    {
      const MarkSet m = mark(eta, {strategy, theta});
      if (!verify_marking_property(eta, m, identity))
        fail(r, std::string(to_string(strategy)) + " property fails in trial "
                    + std::to_string(trial));
    }
    // Doerfler minimality: dropping the smallest marked indicator breaks the
    // bulk criterion.
    const MarkSet m = mark_doerfler(eta, theta);
    double total = 0.0, marked = 0.0, smallest = 1e300;
    for (double e : eta)
      total += e * e;
    for (auto k : m)
    {
      marked += eta[k] * eta[k];
      smallest = std::min(smallest, eta[k] * eta[k]);
    }
    if (marked < theta * total * (1.0 - 1e-12))
      fail(r, "doerfler bulk criterion fails in trial " + std::to_string(trial));
    if (marked - smallest >= theta * total)
      fail(r, "doerfler set not minimal in trial " + std::to_string(trial));
  }
  return r;
}

CheckResult exact_solution_reproduction(std::mt19937_64& rng)
{
  CheckResult r;
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double worst = 0.0;
  for (const Instance& in : small_instances())
  {
    const DofMap dm(in.mesh, in.degree, in.system->fields());
    std::vector<double> w(dm.num_dofs());
    for (double& v : w)
      v = coef(rng);
    const auto image = oracles::discrete_image_system(in.system, in.mesh, dm, w);
    const int qdeg = default_quadrature_degree(in.degree) + 2;
    const SparseSystem sys = assemble(in.mesh, dm, *image, qdeg);
    const DiscreteSolution sol = solve_cg(sys.matrix, sys.rhs, 1e-14);
    double diff = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      diff = std::max(diff, std::abs(w[i] - sol.coefficients[i]));
    const double eta
        = compute_indicators(in.mesh, dm, *image, sol.coefficients, qdeg).global;
    const double fnorm = data_norm(in.mesh, dm, *image, qdeg);
    worst = std::max(worst, std::max(diff, eta / fnorm));
    if (diff > 1e-8 or eta > 1e-8 * fnorm)
      fail(r, in.label + ": coefficient error " + sci(diff) + ", eta/||f|| "
                  + sci(eta / fnorm));
  }
  if (r.ok)
    r.detail = "max deviation " + sci(worst);
  return r;
}

CheckResult galerkin_orthogonality(std::mt19937_64&)
{
  CheckResult r;
  double worst = 0.0;
  for (const Instance& in : small_instances())
  {
    const DofMap dm(in.mesh, in.degree, in.system->fields());
    const int qdeg = default_quadrature_degree(in.degree);
    const SparseSystem sys = assemble(in.mesh, dm, *in.system, qdeg);
    const DiscreteSolution sol = solve_cg(sys.matrix, sys.rhs);
    const double defect = galerkin_orthogonality_check(in.mesh, dm, *in.system,
                                                       sol.coefficients, qdeg);
    worst = std::max(worst, defect);
    if (defect > 1e-7)
      fail(r, in.label + ": defect " + sci(defect));
  }
  if (r.ok)
    r.detail = "max defect " + sci(worst);
  return r;
}

} // namespace

int cmd_verify(std::uint64_t seed, std::ostream& out)
{
  using Check = std::function<CheckResult(std::mt19937_64&)>;
  const std::vector<std::pair<std::string, Check>> checks{
      {"quadrature-exactness", quadrature_exactness},
      {"reference-nodal", reference_nodal},
      {"nvb-conformity", nvb_conformity},
      {"dense-assembly-equivalence", dense_assembly_equivalence},
      {"cg-vs-dense-solve", cg_vs_dense},
      {"spd-min-eigenvalue", spd_min_eigenvalue},
      {"marking-properties", marking_properties},
      {"exact-solution-reproduction", exact_solution_reproduction},
      {"galerkin-orthogonality", galerkin_orthogonality},
  };

  std::mt19937_64 rng(seed);
  int failures = 0;
  for (const auto& [name, check] : checks)
  {
    CheckResult result;
    try
    {
      result = check(rng);
    }
    catch (const std::exception& e)
    {
      result = {false, std::string("exception: ") + e.what()};
    }
    if (!result.ok)
      ++failures;
    out << (result.ok ? "PASS " : "FAIL ") << name;
    if (!result.detail.empty())
      out << "  (" << result.detail << ")";
    out << '\n';
  }
  out << (failures == 0 ? "all checks passed"
                        : std::to_string(failures) + " check(s) failed")
      << " (seed " << seed << ")\n";
  return failures == 0 ? 0 : 1;
}

} // namespace stfosls::cli
