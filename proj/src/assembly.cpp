#include "stfosls/assembly.hpp"
#include "stfosls/errors.hpp"

#include "element_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stfosls
{

namespace
{

double dot(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

CsrMatrix sparsity_pattern(const Mesh& mesh, const DofMap& dofmap)
{
  const std::size_t n = dofmap.num_dofs();
  const std::size_t nb = dofmap.nodes_per_element();
  const std::size_t nf = dofmap.num_fields();

  std::vector<std::vector<std::int32_t>> rows(n);
  std::vector<std::int32_t> local;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    const auto nodes = dofmap.element_nodes(static_cast<std::int32_t>(k));
    local.clear();
    for (std::size_t f = 0; f < nf; ++f)
    {
      for (std::size_t i = 0; i < nb; ++i)
      {
        const std::int32_t d = dofmap.dof(f, nodes[i]);
        if (d >= 0)
          local.push_back(d);
      }
    }
    for (std::int32_t r : local)
      rows[r].insert(rows[r].end(), local.begin(), local.end());
  }

  CsrMatrix csr;
  csr.rows = n;
  csr.row_ptr.assign(n + 1, 0);
  for (std::size_t r = 0; r < n; ++r)
  {
    auto& row = rows[r];
    std::ranges::sort(row);
    row.erase(std::unique(row.begin(), row.end()), row.end());
    csr.row_ptr[r + 1] = csr.row_ptr[r] + static_cast<std::int64_t>(row.size());
  }
  csr.cols.reserve(csr.row_ptr[n]);
  for (const auto& row : rows)
    csr.cols.insert(csr.cols.end(), row.begin(), row.end());
  csr.values.assign(csr.cols.size(), 0.0);
  return csr;
}

std::int64_t find_entry(const CsrMatrix& a, std::int32_t i, std::int32_t j)
{
  const auto first = a.cols.begin() + a.row_ptr[i];
  const auto last = a.cols.begin() + a.row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return it - a.cols.begin();
}

} // namespace

//-----------------------------------------------------------------------------
void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
  for (std::size_t i = 0; i < rows; ++i)
  {
    double s = 0.0;
    for (std::int64_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
      s += values[p] * x[cols[p]];
    y[i] = s;
  }
}
//-----------------------------------------------------------------------------
double CsrMatrix::at(std::size_t i, std::size_t j) const
{
  const auto first = cols.begin() + row_ptr[i];
  const auto last = cols.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, static_cast<std::int32_t>(j));
  if (it == last or *it != static_cast<std::int32_t>(j))
    return 0.0;
  return values[it - cols.begin()];
}
//-----------------------------------------------------------------------------
SparseSystem assemble(const Mesh& mesh, const DofMap& dofmap,
                      const FirstOrderSystem& system, int quadrature_degree)
{
  SparseSystem out;
  out.matrix = sparsity_pattern(mesh, dofmap);
  out.rhs.assign(dofmap.num_dofs(), 0.0);

  detail::ElementKernel kernel(mesh, dofmap, system, quadrature_degree);
  const std::size_t nl = kernel.num_local();
  const std::size_t nc = kernel.num_components();
  const std::size_t nb = kernel.nodes_per_element();
  std::vector<double> local_matrix(nl * nl);
  std::vector<double> local_rhs(nl);

  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    kernel.compute(static_cast<std::int32_t>(k));
    std::ranges::fill(local_matrix, 0.0);
    std::ranges::fill(local_rhs, 0.0);

    for (std::size_t q = 0; q < kernel.num_points(); ++q)
    {
      const double w = kernel.weight(q);
      for (std::size_t l = 0; l < nl; ++l)
      {
        if (kernel.dof(l) < 0)
          continue;
        double b = 0.0;
        for (std::size_t c = 0; c < nc; ++c)
          b += kernel.data(q, c) * kernel.image(q, l, c);
        local_rhs[l] += w * b;
        for (std::size_t m = l; m < nl; ++m)
        {
          if (kernel.dof(m) < 0)
            continue;
          double s = 0.0;
          for (std::size_t c = 0; c < nc; ++c)
            s += kernel.image(q, l, c) * kernel.image(q, m, c);
          local_matrix[l * nl + m] += w * s;
        }
      }
    }
    for (const auto& tp : kernel.trace_points())
    {
      for (std::size_t l = 0; l < nb; ++l)
      {
        if (kernel.dof(l) < 0)
          continue;
        local_rhs[l] += tp.weight * tp.target * tp.basis[l];
        for (std::size_t m = l; m < nb; ++m)
        {
          if (kernel.dof(m) >= 0)
            local_matrix[l * nl + m] += tp.weight * tp.basis[l] * tp.basis[m];
        }
      }
    }

    for (std::size_t l = 0; l < nl; ++l)
    {
      const std::int32_t i = kernel.dof(l);
      if (i < 0)
        continue;
      out.rhs[i] += local_rhs[l];
      for (std::size_t m = l; m < nl; ++m)
      {
        const std::int32_t j = kernel.dof(m);
        if (j < 0)
          continue;
        const double v = local_matrix[l * nl + m];
        out.matrix.values[find_entry(out.matrix, i, j)] += v;
        if (i != j)
          out.matrix.values[find_entry(out.matrix, j, i)] += v;
      }
    }
  }
  return out;
}
//-----------------------------------------------------------------------------
DiscreteSolution solve_cg(const CsrMatrix& matrix, std::span<const double> rhs,
                          double rel_tol, int max_iters)
{
  const std::size_t n = matrix.rows;
  if (rhs.size() != n)
    throw ParameterError("solve_cg: right-hand side size mismatch");
  if (max_iters <= 0)
    max_iters = static_cast<int>(std::max<std::size_t>(20 * n, 1));

  DiscreteSolution sol;
  sol.coefficients.assign(n, 0.0);
  const double bnorm = std::sqrt(dot(rhs, rhs));
  if (bnorm == 0.0)
  {
    sol.report = {0, 0.0, true};
    return sol;
  }

  std::vector<double> r(rhs.begin(), rhs.end());
  std::vector<double> p = r;
  std::vector<double> ap(n);
  double rr = dot(r, r);
  auto& x = sol.coefficients;

  auto true_residual = [&]
  {
    matrix.multiply(x, ap);
    for (std::size_t i = 0; i < n; ++i)
      r[i] = rhs[i] - ap[i];
    return dot(r, r);
  };

  int it = 0;
  double res = rr;
  while (it < max_iters)
  {
    while (std::sqrt(rr) > rel_tol * bnorm and it < max_iters)
    {
      matrix.multiply(p, ap);
      const double pap = dot(p, ap);
      if (!(pap > 0.0))
        break;
      const double alpha = rr / pap;
      for (std::size_t i = 0; i < n; ++i)
      {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      const double rr_new = dot(r, r);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t i = 0; i < n; ++i)
        p[i] = r[i] + beta * p[i];
      ++it;
    }
    // The recursive residual drifts from b - A x in floating point; restart
    // from the true residual when they disagree about convergence.
    res = true_residual();
    if (std::sqrt(res) <= rel_tol * bnorm or std::sqrt(rr) > rel_tol * bnorm)
      break;
    rr = res;
    p = r;
  }

  sol.report.iterations = it;
  sol.report.relative_residual = std::sqrt(res) / bnorm;
  sol.report.converged = sol.report.relative_residual <= rel_tol;
  return sol;
}
//-----------------------------------------------------------------------------
double data_norm(const Mesh& mesh, const DofMap& dofmap,
                 const FirstOrderSystem& system, int quadrature_degree)
{
  detail::ElementKernel kernel(mesh, dofmap, system, quadrature_degree);
  double sum = 0.0;
  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    kernel.compute(static_cast<std::int32_t>(k));
    for (std::size_t q = 0; q < kernel.num_points(); ++q)
    {
      for (std::size_t c = 0; c < kernel.num_components(); ++c)
        sum += kernel.weight(q) * kernel.data(q, c) * kernel.data(q, c);
    }
    for (const auto& tp : kernel.trace_points())
      sum += tp.weight * tp.target * tp.target;
  }
  return std::sqrt(sum);
}
//-----------------------------------------------------------------------------
double galerkin_orthogonality_check(const Mesh& mesh, const DofMap& dofmap,
                                    const FirstOrderSystem& system,
                                    std::span<const double> coefficients,
                                    int quadrature_degree)
{
  if (coefficients.size() != dofmap.num_dofs())
    throw ParameterError("galerkin check: coefficient vector size mismatch");

  detail::ElementKernel kernel(mesh, dofmap, system, quadrature_degree);
  const std::size_t nl = kernel.num_local();
  const std::size_t nc = kernel.num_components();
  const std::size_t nb = kernel.nodes_per_element();

  std::vector<double> defect(dofmap.num_dofs(), 0.0);
  std::vector<double> image_norm2(dofmap.num_dofs(), 0.0);
  double data2 = 0.0;
  std::vector<double> residual(nc);

  for (std::size_t k = 0; k < mesh.num_elements(); ++k)
  {
    kernel.compute(static_cast<std::int32_t>(k));
    for (std::size_t q = 0; q < kernel.num_points(); ++q)
    {
      const double w = kernel.weight(q);
      for (std::size_t c = 0; c < nc; ++c)
      {
        double g = 0.0;
        for (std::size_t l = 0; l < nl; ++l)
        {
          if (kernel.dof(l) >= 0)
            g += coefficients[kernel.dof(l)] * kernel.image(q, l, c);
        }
        residual[c] = kernel.data(q, c) - g;
        data2 += w * kernel.data(q, c) * kernel.data(q, c);
      }
      for (std::size_t l = 0; l < nl; ++l)
      {
        const std::int32_t i = kernel.dof(l);
        if (i < 0)
          continue;
        double d = 0.0, n2 = 0.0;
        for (std::size_t c = 0; c < nc; ++c)
        {
          d += residual[c] * kernel.image(q, l, c);
          n2 += kernel.image(q, l, c) * kernel.image(q, l, c);
        }
        defect[i] += w * d;
        image_norm2[i] += w * n2;
      }
    }
    for (const auto& tp : kernel.trace_points())
    {
      double trace = 0.0;
      for (std::size_t l = 0; l < nb; ++l)
      {
        if (kernel.dof(l) >= 0)
          trace += coefficients[kernel.dof(l)] * tp.basis[l];
      }
      const double r = tp.target - trace;
      data2 += tp.weight * tp.target * tp.target;
      for (std::size_t l = 0; l < nb; ++l)
      {
        const std::int32_t i = kernel.dof(l);
        if (i < 0)
          continue;
        defect[i] += tp.weight * r * tp.basis[l];
        image_norm2[i] += tp.weight * tp.basis[l] * tp.basis[l];
      }
    }
  }

  const double fnorm = std::sqrt(data2);
  double worst = 0.0;
  for (std::size_t i = 0; i < defect.size(); ++i)
  {
    const double scale = (fnorm > 0.0) ? fnorm * std::sqrt(image_norm2[i]) : 1.0;
    worst = std::max(worst, std::abs(defect[i]) / scale);
  }
  return worst;
}

} // namespace stfosls
