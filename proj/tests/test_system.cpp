#include "stfosls/cases.hpp"
#include "stfosls/errors.hpp"
#include "stfosls/system.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace stfosls;
using std::numbers::pi;

namespace
{

ParabolicSystem constant_system(double A, double b, double c,
                                ConvectionForm form = ConvectionForm::Flux)
{
  ParabolicProblem problem;
  problem.coefficients.A = [A](Point) { return A; };
  problem.coefficients.b = [b](Point) { return b; };
  problem.coefficients.c = [c](Point) { return c; };
  problem.form = form;
  return ParabolicSystem(problem);
}

FieldJet jet(double v, double gt, double gx) { return {v, {gt, gx}}; }

FieldJet random_jet(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return jet(u(rng), u(rng), u(rng));
}

} // namespace

TEST_CASE("parabolic G on simple fields")
{
  const ParabolicSystem heat = constant_system(1, 0, 0);
  const GImage a = heat.eval_G({0.2, 0.7}, jet(0.2, 1, 0), jet(0, 0, 0));
  CHECK(a.r_flux == 0.0);
  CHECK(a.r_div == 1.0);
  CHECK_FALSE(a.r_init.has_value());

  const GImage b = heat.eval_G({0.2, 0.7}, jet(0, 0, 0), jet(0.7, 0, 1));
  CHECK(b.r_flux == 0.7);
  CHECK(b.r_div == 1.0);

  const ParabolicSystem conv = constant_system(2, 4, 1);
  const GImage c = conv.eval_G({0.5, 0.5}, jet(1, 0, 0), jet(2, 0, 0));
  CHECK(c.r_flux == 2.0);
  CHECK(c.r_div == -3.0);

  const GImage d = heat.eval_G({0.0, 0.3}, jet(0.4, 0, 0), jet(0, 0, 0), true);
  REQUIRE(d.r_init.has_value());
  CHECK(*d.r_init == 0.4);
}

TEST_CASE("gradient form uses the spatial derivative of u1")
{
  const ParabolicSystem grad = constant_system(2, 4, 1, ConvectionForm::Gradient);
  const GImage g = grad.eval_G({0.5, 0.5}, jet(1, 0, 0.5), jet(2, 0, 0));
  CHECK(g.r_flux == 3.0);
  CHECK(g.r_div == 4.0 * 0.5 + 1.0);
}

TEST_CASE("eval_G is linear in the fields")
{
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto cr = make_case("convection-reaction").system;
  const auto va = make_case("variable-a", ConvectionForm::Gradient).system;
  const auto po = make_case("poisson-smooth").system;
  for (const auto& sys : {cr, va, po})
  {
    const std::size_t nf = sys->num_fields();
    for (int trial = 0; trial < 100; ++trial)
    {
      const Point p{u(rng), u(rng)};
      const double alpha = 4 * u(rng) - 2;
      std::vector<FieldJet> v(nf), w(nf), combo(nf);
      for (std::size_t f = 0; f < nf; ++f)
      {
        v[f] = random_jet(rng);
        w[f] = random_jet(rng);
        combo[f] = jet(alpha * v[f].value + w[f].value,
                       alpha * v[f].grad[0] + w[f].grad[0],
                       alpha * v[f].grad[1] + w[f].grad[1]);
      }
      const auto gv = eval_G(*sys, p, v);
      const auto gw = eval_G(*sys, p, w);
      const auto gc = eval_G(*sys, p, combo);
      for (std::size_t k = 0; k < gc.size(); ++k)
        CHECK(std::abs(gc[k] - (alpha * gv[k] + gw[k])) <= 1e-14 * 16);
    }
  }
}

TEST_CASE("flux and gradient forms agree when u2 = -A d/dx u1")
{
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ParabolicProblem problem;
  problem.coefficients.A = [](Point p) { return 1.0 + p.t * p.x; };
  problem.coefficients.b = [](Point p) { return std::sin(3 * p.x) - p.t; };
  problem.coefficients.c = [](Point p) { return p.x * p.x; };
  const ParabolicSystem flux(problem);
  problem.form = ConvectionForm::Gradient;
  const ParabolicSystem grad(problem);
  for (int trial = 0; trial < 100; ++trial)
  {
    const Point p{u(rng), u(rng)};
    const FieldJet u1 = random_jet(rng);
    FieldJet u2 = random_jet(rng);
    u2.value = -problem.coefficients.A(p) * u1.grad[1];
    const GImage a = flux.eval_G(p, u1, u2);
    const GImage b = grad.eval_G(p, u1, u2);
    CHECK(std::abs(a.r_flux - b.r_flux) <= 1e-13);
    CHECK(std::abs(a.r_div - b.r_div) <= 1e-13);
  }
}

TEST_CASE("exact fields satisfy G u = f pointwise")
{
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* name : {"heat-smooth", "convection-reaction", "variable-a"})
  {
    for (auto form : {ConvectionForm::Flux, ConvectionForm::Gradient})
    {
      const BuiltinCase bc = make_case(name, form);
      const auto mc = std::string(name) == "variable-a" ? variable_a_solution()
                                                         : heat_smooth_solution();
      for (int trial = 0; trial < 100; ++trial)
      {
        const Point p{u(rng), u(rng)};
        const ExactSample s = bc.exact->sample(p);
        // d/dt and d/dx of u2 = -A u_x, from closed forms
        const double A = std::string(name) == "variable-a" ? 1.0 + 0.5 * p.t * p.x : 1.0;
        const double At = std::string(name) == "variable-a" ? 0.5 * p.x : 0.0;
        const double u2_t = -At * mc.u_x(p) - A * (-mc.u_x(p));
        const double u2_x = mc.flux_div ? -mc.flux_div(p) : -A * mc.u_xx(p);
        const std::array<FieldJet, 2> jets{s.primary, jet(s.flux[0], u2_t, u2_x)};
        const auto g = eval_G(*bc.system, p, jets);
        const auto f = eval_data(*bc.system, p);
        for (std::size_t k = 0; k < 2; ++k)
          CHECK(std::abs(g[k] - f[k]) <= 1e-11);
      }
    }
  }
}

TEST_CASE("eval_data")
{
  ParabolicProblem problem;
  problem.data.f1 = [](Point p) { return 3 * p.t; };
  problem.data.u0 = [](double x) { return 1 - x; };
  const ParabolicSystem sys(problem);
  const auto interior = eval_data(sys, {0.5, 0.25});
  REQUIRE(interior.size() == 2);
  CHECK(interior[0] == 0.0);
  CHECK(interior[1] == 1.5);
  const auto trace = eval_data(sys, {0.0, 0.25}, true);
  REQUIRE(trace.size() == 3);
  CHECK(trace[2] == 0.75);

  ParabolicProblem conv;
  conv.coefficients.b = [](Point) { return 1.0; };
  conv.data.f2 = [](Point) { return 1.0; };
  CHECK(eval_data(ParabolicSystem(conv), {0.5, 0.5})[1] == -1.0);
}

TEST_CASE("parabolic system rejects non-positive A")
{
  ParabolicProblem problem;
  problem.coefficients.A = [](Point) { return 0.0; };
  CHECK_THROWS_AS(ParabolicSystem{problem}, ParameterError);
}

TEST_CASE("poisson system residuals")
{
  const PoissonSystem zero([](Point) { return 0.0; });
  CHECK(zero.num_components() == 3);
  CHECK_FALSE(zero.has_initial_trace());
  const std::array<FieldJet, 3> nothing{};
  for (double r : eval_G(zero, {0.3, 0.3}, nothing))
    CHECK(r == 0.0);
  for (double r : eval_data(zero, {0.3, 0.3}, true))
    CHECK(r == 0.0);

  const std::array<FieldJet, 3> linear{jet(0.3, 1, 0), jet(-1, 0, 0), jet(0, 0, 0)};
  const auto g = eval_G(zero, {0.3, 0.3}, linear);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == 0.0);

  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto sys = poisson_system(poisson_smooth_rhs());
  const ExactSolution exact = poisson_smooth_exact();
  for (int trial = 0; trial < 50; ++trial)
  {
    const Point p{u(rng), u(rng)};
    const double s1 = std::sin(pi * p.t), s2 = std::sin(pi * p.x);
    const double c1 = std::cos(pi * p.t), c2 = std::cos(pi * p.x);
    const ExactSample s = exact.sample(p);
    // sigma = -grad u, so d1 sigma1 = pi^2 u and d2 sigma2 = pi^2 u
    const std::array<FieldJet, 3> jets{
        s.primary, jet(s.flux[0], pi * pi * s1 * s2, pi * pi * c1 * c2),
        jet(s.flux[1], pi * pi * c1 * c2, pi * pi * s1 * s2)};
    const auto gu = eval_G(*sys, p, jets);
    const auto f = eval_data(*sys, p);
    CHECK(std::abs(gu[0]) < 1e-13);
    CHECK(std::abs(gu[1]) < 1e-13);
    CHECK(gu[2] == doctest::Approx(2 * pi * pi * s1 * s2).epsilon(1e-13));
    CHECK(std::abs(gu[2] - f[2]) < 1e-12);
  }
}

TEST_CASE("field constraints")
{
  const auto heat = make_case("heat-smooth").system;
  const auto fields = heat->fields();
  REQUIRE(fields.size() == 2);
  CHECK(fields[0].constrained_tags == tag_bit(FacetTag::LateralDirichlet));
  CHECK(fields[1].constrained_tags == 0);

  const auto poisson = make_case("poisson-smooth").system;
  const auto pf = poisson->fields();
  REQUIRE(pf.size() == 3);
  CHECK((pf[0].constrained_tags & tag_bit(FacetTag::Initial)) != 0);
  CHECK((pf[0].constrained_tags & tag_bit(FacetTag::Final)) != 0);
  CHECK(pf[1].constrained_tags == 0);
}
