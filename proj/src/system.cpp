#include "stfosls/system.hpp"
#include "stfosls/errors.hpp"

#include <cmath>
#include <numbers>

namespace stfosls
{

std::vector<double> eval_G(const FirstOrderSystem& system, Point p,
                           std::span<const FieldJet> fields)
{
  const std::size_t nf = system.num_fields();
  if (fields.size() != nf)
    throw ParameterError("eval_G: wrong number of field jets");
  PointOperator op(system.num_components(), nf);
  system.operator_at(p, op);
  std::vector<double> r(system.num_components(), 0.0);
  for (std::size_t k = 0; k < r.size(); ++k)
  {
    for (std::size_t f = 0; f < nf; ++f)
    {
      r[k] += op(k, f, 0) * fields[f].value + op(k, f, 1) * fields[f].grad[0]
              + op(k, f, 2) * fields[f].grad[1];
    }
  }
  return r;
}

std::vector<double> eval_data(const FirstOrderSystem& system, Point p,
                              bool on_initial_facet)
{
  std::vector<double> target(system.num_components(), 0.0);
  system.data_at(p, target);
  if (on_initial_facet and system.has_initial_trace())
    target.push_back(system.initial_data(p));
  return target;
}

//-----------------------------------------------------------------------------
ParabolicSystem::ParabolicSystem(ParabolicProblem problem)
    : _problem(std::move(problem))
{
  check_problem(_problem);
  _data = data_vector(_problem);
}

std::vector<FieldSpec> ParabolicSystem::fields() const
{
  return {FieldSpec{tag_bit(FacetTag::LateralDirichlet)}, FieldSpec{}};
}

NormLayout ParabolicSystem::norm_layout() const
{
  NormLayout layout;
  layout.primary_gradient = {false, true};
  layout.divergence = {{0, 0}, {1, 1}};
  return layout;
}

void ParabolicSystem::operator_at(Point p, PointOperator& op) const
{
  const auto& cf = _problem.coefficients;
  const double A = cf.A(p);
  if (!(A > 0.0))
    throw ParameterError("parabolic system: A must be positive");
  const double b = cf.b(p);
  const double c = cf.c(p);

  op.reset();
  // r_flux = u2 + A d/dx u1
  op(0, 1, 0) = 1.0;
  op(0, 0, 2) = A;
  // r_div = d/dt u1 + d/dx u2 + ...
  op(1, 0, 1) = 1.0;
  op(1, 1, 2) = 1.0;
  op(1, 0, 0) = c;
  if (_problem.form == ConvectionForm::Flux)
    op(1, 1, 0) = -b / A;
  else
    op(1, 0, 2) = b;
}

void ParabolicSystem::data_at(Point p, std::span<double> target) const
{
  target[0] = _data.flux(p);
  target[1] = _data.div(p);
}

double ParabolicSystem::initial_data(Point p) const { return _data.initial(p.x); }

GImage ParabolicSystem::eval_G(Point p, const FieldJet& u1, const FieldJet& u2,
                               bool on_initial_facet) const
{
  const std::array<FieldJet, 2> jets{u1, u2};
  const auto r = stfosls::eval_G(*this, p, jets);
  GImage image{r[0], r[1], std::nullopt};
  if (on_initial_facet)
    image.r_init = u1.value;
  return image;
}

//-----------------------------------------------------------------------------
PoissonSystem::PoissonSystem(ScalarField f) : _f(std::move(f))
{
  if (!_f)
    throw ParameterError("poisson system: missing right-hand side");
}

std::vector<FieldSpec> PoissonSystem::fields() const
{
  const FacetTagMask all = tag_bit(FacetTag::LateralDirichlet)
                           | tag_bit(FacetTag::Initial) | tag_bit(FacetTag::Final);
  return {FieldSpec{all}, FieldSpec{}, FieldSpec{}};
}

NormLayout PoissonSystem::norm_layout() const
{
  NormLayout layout;
  layout.primary_gradient = {true, true};
  layout.divergence = {{1, 0}, {2, 1}};
  return layout;
}

void PoissonSystem::operator_at(Point, PointOperator& op) const
{
  op.reset();
  // sigma_i + d_i u
  op(0, 1, 0) = 1.0;
  op(0, 0, 1) = 1.0;
  op(1, 2, 0) = 1.0;
  op(1, 0, 2) = 1.0;
  // d_1 sigma_1 + d_2 sigma_2
  op(2, 1, 1) = 1.0;
  op(2, 2, 2) = 1.0;
}

void PoissonSystem::data_at(Point p, std::span<double> target) const
{
  target[0] = 0.0;
  target[1] = 0.0;
  target[2] = _f(p);
}

//-----------------------------------------------------------------------------
std::shared_ptr<ParabolicSystem> parabolic_system(ParabolicProblem problem)
{
  return std::make_shared<ParabolicSystem>(std::move(problem));
}

std::shared_ptr<PoissonSystem> poisson_system(ScalarField f)
{
  return std::make_shared<PoissonSystem>(std::move(f));
}

ScalarField poisson_smooth_rhs()
{
  using std::numbers::pi;
  return [](Point p)
  { return 2.0 * pi * pi * std::sin(pi * p.t) * std::sin(pi * p.x); };
}

ExactSolution poisson_smooth_exact()
{
  using std::numbers::pi;
  ExactSolution exact;
  exact.sample = [](Point p)
  {
    const double s1 = std::sin(pi * p.t), c1 = std::cos(pi * p.t);
    const double s2 = std::sin(pi * p.x), c2 = std::cos(pi * p.x);
    ExactSample s;
    s.primary.value = s1 * s2;
    s.primary.grad = {pi * c1 * s2, pi * s1 * c2};
    s.flux = {-pi * c1 * s2, -pi * s1 * c2};
    s.divergence = 2.0 * pi * pi * s1 * s2;
    return s;
  };
  return exact;
}

} // namespace stfosls
