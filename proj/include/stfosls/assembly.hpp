#pragma once

#include "stfosls/mesh.hpp"
#include "stfosls/spaces.hpp"
#include "stfosls/system.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace stfosls
{

/// Compressed sparse row matrix with sorted column indices.
struct CsrMatrix
{
  std::size_t rows = 0;
  std::vector<std::int64_t> row_ptr{0};
  std::vector<std::int32_t> cols;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;

  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;
};

/// Galerkin system  <G u, G v>_L = <f, G v>_L  on the free dofs.
struct SparseSystem
{
  CsrMatrix matrix;
  std::vector<double> rhs;

  std::size_t num_dofs() const { return rhs.size(); }
};

struct SolverReport
{
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

struct DiscreteSolution
{
  std::vector<double> coefficients;
  SolverReport report;
};

inline constexpr double default_cg_tolerance = 1e-10;

/// Assemble the least-squares normal equations. Local matrices are computed
/// on the upper triangle and mirrored, and elements are accumulated in index
/// order, so the result is exactly symmetric and reproducible.
SparseSystem assemble(const Mesh& mesh, const DofMap& dofmap,
                      const FirstOrderSystem& system, int quadrature_degree);

/// Unpreconditioned conjugate gradients from a zero initial guess. Stops when
/// ||b - A x|| <= rel_tol ||b||; max_iters <= 0 selects 20 * n.
DiscreteSolution solve_cg(const CsrMatrix& matrix, std::span<const double> rhs,
                          double rel_tol = default_cg_tolerance,
                          int max_iters = 0);

/// max over free basis functions v of
///   |<f - G u_h, G v>_L| / (||f||_L ||G v||_L)
/// evaluated by quadrature, independently of the assembled matrix. Returns
/// the unnormalised maximum when ||f||_L = 0.
double galerkin_orthogonality_check(const Mesh& mesh, const DofMap& dofmap,
                                    const FirstOrderSystem& system,
                                    std::span<const double> coefficients,
                                    int quadrature_degree);

/// ||f||_L by quadrature.
double data_norm(const Mesh& mesh, const DofMap& dofmap,
                 const FirstOrderSystem& system, int quadrature_degree);

} // namespace stfosls
