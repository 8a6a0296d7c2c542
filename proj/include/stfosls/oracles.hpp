#pragma once

// Brute-force reference computations for tests and `verify`. Nothing here
// shares element-loop code with assembly or estimation: basis functions are
// evaluated from physical barycentric coordinates instead of the reference
// element and affine map.

#include "stfosls/assembly.hpp"
#include "stfosls/mesh.hpp"
#include "stfosls/problem.hpp"
#include "stfosls/spaces.hpp"
#include "stfosls/system.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace stfosls::oracles
{

using DenseMatrix
    = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::size_t dense_dof_limit = 300;

struct DenseSystem
{
  DenseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Dense Galerkin matrix and load. Throws ParameterError above
/// dense_dof_limit dofs.
DenseSystem dense_assemble(const Mesh& mesh, const DofMap& dofmap,
                           const FirstOrderSystem& system,
                           int quadrature_degree);

/// Cholesky solve; throws SolverError when the matrix is not SPD.
std::vector<double> dense_solve(const DenseMatrix& matrix,
                                std::span<const double> rhs);

/// Smallest eigenvalue of a symmetric matrix: Householder tridiagonalization
/// followed by Sturm-sequence bisection.
double min_eigenvalue(const DenseMatrix& matrix);

/// Dense copy of a sparse matrix.
DenseMatrix to_dense(const CsrMatrix& matrix);

/// ||A - B||_F / ||B||_F
double relative_frobenius(const CsrMatrix& a, const DenseMatrix& b);

/// ||u||_U of a closed-form solution (including the initial trace term when
/// the system has one), by quadrature of degree >= 8 on the mesh.
double fine_norm(const ExactSolution& exact, const FirstOrderSystem& system,
                 const Mesh& mesh, int quadrature_degree = 12);

/// The system `base` with its data replaced by the image G(w) of a discrete
/// function w (and trace data w_0(0,.)), so that w solves the discrete problem
/// exactly. Data are evaluated by locating the element containing each point,
/// which is only meaningful at points interior to elements or on the initial
/// facets.
std::shared_ptr<const FirstOrderSystem>
discrete_image_system(std::shared_ptr<const FirstOrderSystem> base,
                      const Mesh& mesh, const DofMap& dofmap,
                      std::vector<double> coefficients);

} // namespace stfosls::oracles
