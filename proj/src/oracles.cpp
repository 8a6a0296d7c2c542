#include "stfosls/oracles.hpp"
#include "stfosls/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace stfosls::oracles
{

namespace
{

/// Physical barycentric coordinates and their gradients on one triangle.
struct Barycentric
{
  std::array<Point, 3> p;
  double area;
  std::array<std::array<double, 2>, 3> grad;

  explicit Barycentric(const std::array<Point, 3>& vertices) : p(vertices)
  {
    area = 0.5 * ((p[1].t - p[0].t) * (p[2].x - p[0].x)
                  - (p[1].x - p[0].x) * (p[2].t - p[0].t));
    for (int i = 0; i < 3; ++i)
    {
      const Point& b = p[(i + 1) % 3];
      const Point& c = p[(i + 2) % 3];
      grad[i] = {(b.x - c.x) / (2.0 * area), (c.t - b.t) / (2.0 * area)};
    }
  }

  std::array<double, 3> at(Point q) const
  {
    std::array<double, 3> l;
    for (int i = 0; i < 3; ++i)
    {
      const Point& b = p[(i + 1) % 3];
      const Point& c = p[(i + 2) % 3];
      l[i] = 0.5 * ((b.t - q.t) * (c.x - q.x) - (b.x - q.x) * (c.t - q.t)) / area;
    }
    return l;
  }
};

/// Lagrange basis (vertices, then edge midpoints of edges (0,1),(1,2),(2,0))
/// in physical coordinates.
void physical_basis(int degree, const Barycentric& bc, Point q,
                    std::vector<FieldJet>& out)
{
  const auto l = bc.at(q);
  const auto& g = bc.grad;
  if (degree == 1)
  {
    out.resize(3);
    for (int i = 0; i < 3; ++i)
      out[i] = {l[i], g[i]};
    return;
  }
  out.resize(6);
  for (int i = 0; i < 3; ++i)
  {
    const double s = 4.0 * l[i] - 1.0;
    out[i] = {l[i] * (2.0 * l[i] - 1.0), {s * g[i][0], s * g[i][1]}};
  }
  for (int e = 0; e < 3; ++e)
  {
    const int a = e, b = (e + 1) % 3;
    out[3 + e] = {4.0 * l[a] * l[b],
                  {4.0 * (l[b] * g[a][0] + l[a] * g[b][0]),
                   4.0 * (l[b] * g[a][1] + l[a] * g[b][1])}};
  }
}

class DiscreteImageSystem final : public FirstOrderSystem
{
public:
  DiscreteImageSystem(std::shared_ptr<const FirstOrderSystem> base,
                      const Mesh& mesh, const DofMap& dofmap,
                      std::vector<double> coefficients)
      : _base(std::move(base)), _mesh(mesh), _dofmap(dofmap),
        _coeffs(std::move(coefficients))
  {
    if (_coeffs.size() != _dofmap.num_dofs())
      throw ParameterError("discrete_image_system: coefficient size mismatch");
    for (std::size_t k = 0; k < _mesh.num_elements(); ++k)
      _bary.emplace_back(_mesh.coordinates(static_cast<std::int32_t>(k)));
  }

  std::string name() const override { return _base->name(); }
  std::vector<FieldSpec> fields() const override { return _base->fields(); }
  std::size_t num_components() const override { return _base->num_components(); }
  bool has_initial_trace() const override { return _base->has_initial_trace(); }
  NormLayout norm_layout() const override { return _base->norm_layout(); }
  void operator_at(Point p, PointOperator& op) const override
  {
    _base->operator_at(p, op);
  }

  void data_at(Point p, std::span<double> target) const override
  {
    const auto jets = jets_at(p);
    const auto g = eval_G(*_base, p, jets);
    std::copy(g.begin(), g.end(), target.begin());
  }

  double initial_data(Point p) const override { return jets_at(p)[0].value; }

private:
  std::vector<FieldJet> jets_at(Point p) const
  {
    std::size_t best = 0;
    double best_min = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < _bary.size(); ++k)
    {
      const auto l = _bary[k].at(p);
      const double m = std::min({l[0], l[1], l[2]});
      if (m > best_min)
      {
        best_min = m;
        best = k;
      }
    }
    std::vector<FieldJet> basis;
    physical_basis(_dofmap.degree(), _bary[best], p, basis);
    const auto nodes = _dofmap.element_nodes(static_cast<std::int32_t>(best));
    std::vector<FieldJet> jets(_dofmap.num_fields());
    for (std::size_t f = 0; f < jets.size(); ++f)
    {
      for (std::size_t i = 0; i < basis.size(); ++i)
      {
        const std::int32_t d = _dofmap.dof(f, nodes[i]);
        if (d < 0)
          continue;
        jets[f].value += _coeffs[d] * basis[i].value;
        jets[f].grad[0] += _coeffs[d] * basis[i].grad[0];
        jets[f].grad[1] += _coeffs[d] * basis[i].grad[1];
      }
    }
    return jets;
  }

  std::shared_ptr<const FirstOrderSystem> _base;
  Mesh _mesh;
  DofMap _dofmap;
  std::vector<double> _coeffs;
  std::vector<Barycentric> _bary;
};

} // namespace

//-----------------------------------------------------------------------------
DenseSystem dense_assemble(const Mesh& mesh, const DofMap& dofmap,
                           const FirstOrderSystem& system, int quadrature_degree)
{
  const std::size_t n = dofmap.num_dofs();
  if (n > dense_dof_limit)
    throw ParameterError("dense_assemble: too many dofs for the dense oracle");

  const std::size_t nf = system.num_fields();
  const std::size_t nc = system.num_components();
  const QuadratureRule rule = triangle_quadrature(quadrature_degree);
  const QuadratureRule line = gauss_legendre(quadrature_degree / 2 + 1);

  DenseSystem out;
  out.matrix = DenseMatrix::Zero(n, n);
  out.rhs = Eigen::VectorXd::Zero(n);

  PointOperator op(nc, nf);
  std::vector<FieldJet> basis;
  std::vector<double> target(nc);

  // (global dof, G image) of every free basis function supported on K
  std::vector<std::pair<std::int32_t, std::vector<double>>> images;

  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const auto coords = mesh.coordinates(static_cast<std::int32_t>(k));
    const Barycentric bc(coords);
    const auto nodes = dofmap.element_nodes(static_cast<std::int32_t>(k));

    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const double xi = rule.points[q][0], eta = rule.points[q][1];
      const double l0 = 1.0 - xi - eta;
      const Point p{l0 * coords[0].t + xi * coords[1].t + eta * coords[2].t,
                    l0 * coords[0].x + xi * coords[1].x + eta * coords[2].x};
      const double w = rule.weights[q] * 2.0 * bc.area;

      physical_basis(dofmap.degree(), bc, p, basis);
      system.operator_at(p, op);
      system.data_at(p, target);

      images.clear();
      for (std::size_t f = 0; f < nf; ++f)
      {
        for (std::size_t i = 0; i < basis.size(); ++i)
        {
          const std::int32_t d = dofmap.dof(f, nodes[i]);
          if (d < 0)
            continue;
          std::vector<double> g(nc);
          for (std::size_t c = 0; c < nc; ++c)
          {
            g[c] = op(c, f, 0) * basis[i].value + op(c, f, 1) * basis[i].grad[0]
                   + op(c, f, 2) * basis[i].grad[1];
          }
          images.emplace_back(d, std::move(g));
        }
      }
      for (const auto& [I, gi] : images)
      {
        for (std::size_t c = 0; c < nc; ++c)
          out.rhs[I] += w * target[c] * gi[c];
        for (const auto& [J, gj] : images)
        {
          if (J < I)
            continue;
          double s = 0.0;
          for (std::size_t c = 0; c < nc; ++c)
            s += gi[c] * gj[c];
          out.matrix(I, J) += w * s;
        }
      }
    }

    if (!system.has_initial_trace())
      continue;
    const Element& element = mesh.element(static_cast<std::int32_t>(k));
    for (int e = 0; e < 3; ++e)
    {
      if (element.tags[e] != FacetTag::Initial)
        continue;
      const Point& a = coords[e];
      const Point& b = coords[(e + 1) % 3];
      const double length = std::hypot(b.t - a.t, b.x - a.x);
      for (std::size_t q = 0; q < line.size(); ++q)
      {
        const double s = line.points[q][0];
        const Point p{(1 - s) * a.t + s * b.t, (1 - s) * a.x + s * b.x};
        const double w = line.weights[q] * length;
        physical_basis(dofmap.degree(), bc, p, basis);
        const double u0 = system.initial_data(p);
        for (std::size_t i = 0; i < basis.size(); ++i)
        {
          const std::int32_t I = dofmap.dof(0, nodes[i]);
          if (I < 0)
            continue;
          out.rhs[I] += w * u0 * basis[i].value;
          for (std::size_t j = 0; j < basis.size(); ++j)
          {
            const std::int32_t J = dofmap.dof(0, nodes[j]);
            if (J >= I)
              out.matrix(I, J) += w * basis[i].value * basis[j].value;
          }
        }
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = i + 1; j < n; ++j)
      out.matrix(j, i) = out.matrix(i, j);
  }
  return out;
}
//-----------------------------------------------------------------------------
std::vector<double> dense_solve(const DenseMatrix& matrix,
                                std::span<const double> rhs)
{
  const auto n = matrix.rows();
  if (static_cast<std::size_t>(n) != rhs.size() or matrix.cols() != n)
    throw ParameterError("dense_solve: dimension mismatch");
  if (static_cast<std::size_t>(n) > dense_dof_limit)
    throw ParameterError("dense_solve: too many dofs for the dense oracle");
  if (n == 0)
    return {};

  const Eigen::LLT<Eigen::MatrixXd> llt(matrix);
  if (llt.info() != Eigen::Success)
    throw SolverError("dense_solve: matrix is not positive definite");
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
  const Eigen::VectorXd x = llt.solve(b);
  return {x.data(), x.data() + n};
}
//-----------------------------------------------------------------------------
double min_eigenvalue(const DenseMatrix& matrix)
{
  const auto n = matrix.rows();
  if (n == 0 or matrix.cols() != n)
    throw ParameterError("min_eigenvalue: need a nonempty square matrix");
  if (n == 1)
    return matrix(0, 0);

  const Eigen::MatrixXd a = matrix;
  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(a);
  const Eigen::VectorXd d = tri.diagonal();
  const Eigen::VectorXd e = tri.subDiagonal();

  // Number of eigenvalues strictly below x (Sturm sequence of the LDL^T
  // factorization of T - x I).
  auto count_below = [&](double x)
  {
    int count = 0;
    double q = d[0] - x;
    const double tiny = std::numeric_limits<double>::min();
    for (Eigen::Index i = 0;; ++i)
    {
      if (q < 0.0)
        ++count;
      if (i + 1 == n)
        break;
      if (q == 0.0)
        q = tiny;
      q = d[i + 1] - x - e[i] * e[i] / q;
    }
    return count;
  };

  // Gershgorin bounds.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0)
                     + (i + 1 < n ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  for (int it = 0; it < 400 and hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * scale; ++it)
  {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo or mid == hi)
      break;
    if (count_below(mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}
//-----------------------------------------------------------------------------
DenseMatrix to_dense(const CsrMatrix& matrix)
{
  DenseMatrix out = DenseMatrix::Zero(matrix.rows, matrix.rows);
  for (std::size_t i = 0; i < matrix.rows; ++i)
  {
    for (std::int64_t p = matrix.row_ptr[i]; p < matrix.row_ptr[i + 1]; ++p)
      out(i, matrix.cols[p]) = matrix.values[p];
  }
  return out;
}
//-----------------------------------------------------------------------------
double relative_frobenius(const CsrMatrix& a, const DenseMatrix& b)
{
  if (a.rows != static_cast<std::size_t>(b.rows()))
    return std::numeric_limits<double>::infinity();
  const double denom = b.norm();
  const double diff = (to_dense(a) - b).norm();
  return denom > 0.0 ? diff / denom : diff;
}
//-----------------------------------------------------------------------------
double fine_norm(const ExactSolution& exact, const FirstOrderSystem& system,
                 const Mesh& mesh, int quadrature_degree)
{
  if (quadrature_degree < 8)
    throw ParameterError("fine_norm: quadrature degree must be at least 8");
  const NormLayout layout = system.norm_layout();
  const QuadratureRule rule = triangle_quadrature(quadrature_degree);
  const QuadratureRule line = gauss_legendre(quadrature_degree / 2 + 1);

  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const auto c = mesh.coordinates(static_cast<std::int32_t>(k));
    const double area = element_measure(mesh, static_cast<std::int32_t>(k));
    for (std::size_t q = 0; q < rule.size(); ++q)
    {
      const double xi = rule.points[q][0], eta = rule.points[q][1];
      const double l0 = 1.0 - xi - eta;
      const Point p{l0 * c[0].t + xi * c[1].t + eta * c[2].t,
                    l0 * c[0].x + xi * c[1].x + eta * c[2].x};
      const ExactSample s = exact.sample(p);
      double v = s.primary.value * s.primary.value + s.divergence * s.divergence;
      for (int j = 0; j < 2; ++j)
      {
        if (layout.primary_gradient[j])
          v += s.primary.grad[j] * s.primary.grad[j];
      }
      for (double f : s.flux)
        v += f * f;
      sum += rule.weights[q] * 2.0 * area * v;
    }
    if (!system.has_initial_trace())
      continue;
    const Element& element = mesh.element(static_cast<std::int32_t>(k));
    for (int e = 0; e < 3; ++e)
    {
      if (element.tags[e] != FacetTag::Initial)
        continue;
      const Point& a = c[e];
      const Point& b = c[(e + 1) % 3];
      const double length = std::hypot(b.t - a.t, b.x - a.x);
      for (std::size_t q = 0; q < line.size(); ++q)
      {
        const double s = line.points[q][0];
        const double u = exact.sample({(1 - s) * a.t + s * b.t,
                                       (1 - s) * a.x + s * b.x})
                             .primary.value;
        sum += line.weights[q] * length * u * u;
      }
    }
  }
  return std::sqrt(sum);
}

//-----------------------------------------------------------------------------
std::shared_ptr<const FirstOrderSystem>
discrete_image_system(std::shared_ptr<const FirstOrderSystem> base,
                      const Mesh& mesh, const DofMap& dofmap,
                      std::vector<double> coefficients)
{
  return std::make_shared<DiscreteImageSystem>(std::move(base), mesh, dofmap,
                                               std::move(coefficients));
}

} // namespace stfosls::oracles
