#include "stfosls/cases.hpp"
#include "stfosls/errors.hpp"
#include "stfosls/oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace stfosls;
using oracles::DenseMatrix;

TEST_CASE("dense solve")
{
  const DenseMatrix id = DenseMatrix::Identity(4, 4);
  const std::vector<double> b{1, 2, 3, 4};
  CHECK(oracles::dense_solve(id, b) == b);
  CHECK(oracles::dense_solve(id, std::vector<double>(4, 0.0)) == std::vector<double>(4, 0.0));

  DenseMatrix spd(2, 2);
  spd << 4, 1, 1, 3;
  const auto x = oracles::dense_solve(spd, std::vector<double>{1, 2});
  CHECK(x[0] == doctest::Approx(1.0 / 11.0));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0));

  DenseMatrix indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(oracles::dense_solve(indefinite, std::vector<double>{1, 1}), SolverError);
}

TEST_CASE("minimum eigenvalue")
{
  CHECK(oracles::min_eigenvalue(DenseMatrix::Identity(5, 5)) == doctest::Approx(1.0));
  DenseMatrix diag = DenseMatrix::Zero(3, 3);
  diag.diagonal() << 3, 1, 2;
  CHECK(oracles::min_eigenvalue(diag) == doctest::Approx(1.0).epsilon(1e-13));

  std::mt19937_64 rng(71);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 20; ++trial)
  {
    const int size = 1 + static_cast<int>(rng() % 40);
    DenseMatrix m(size, size);
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j)
        m(i, j) = n(rng);
    m = (m + m.transpose()).eval();
    const Eigen::MatrixXd plain = m;
    const double ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(plain).eigenvalues()(0);
    CHECK(std::abs(oracles::min_eigenvalue(m) - ref) <= 1e-10 * (1 + std::abs(ref)));
  }
}

TEST_CASE("assembled systems are positive definite")
{
  const Mesh mesh = uniform_initial_mesh(1.0, {0.0, 1.0}, 2, 2);
  for (const char* name : {"heat-smooth", "convection-reaction", "poisson-smooth"})
  {
    const BuiltinCase bc = make_case(name);
    const DofMap dm(mesh, 1, bc.system->fields());
    const auto dense = oracles::dense_assemble(mesh, dm, *bc.system, 4);
    CHECK(oracles::min_eigenvalue(dense.matrix) > 0.0);
  }
}

TEST_CASE("dense oracle size guard")
{
  const BuiltinCase bc = make_case("heat-smooth");
  const Mesh mesh = uniform_initial_mesh(1.0, {0.0, 1.0}, 8, 8);
  const DofMap dm(mesh, 2, bc.system->fields());
  REQUIRE(dm.num_dofs() > oracles::dense_dof_limit);
  CHECK_THROWS_AS(oracles::dense_assemble(mesh, dm, *bc.system, 6), ParameterError);
}

TEST_CASE("fine norm")
{
  const BuiltinCase heat = make_case("heat-smooth");
  const Mesh coarse = uniform_initial_mesh(1.0, {0.0, 1.0}, 2, 2);
  std::mt19937_64 rng(72);
  const Mesh graded = test::random_mesh(2, 2, 5, 0.4, rng);
  const double a = oracles::fine_norm(*heat.exact, *heat.system, coarse);
  const double b = oracles::fine_norm(*heat.exact, *heat.system, graded);
  CHECK(a > 0.0);
  CHECK(std::abs(a - b) <= 1e-12 * a);

  const ExactSolution zero = exact_error_data(zero_solution(), {});
  CHECK(oracles::fine_norm(zero, *heat.system, coarse) == 0.0);
  CHECK_THROWS_AS(oracles::fine_norm(*heat.exact, *heat.system, coarse, 6), ParameterError);
}

TEST_CASE("discrete image system is solved exactly")
{
  const BuiltinCase bc = make_case("variable-a");
  const Mesh mesh = uniform_initial_mesh(1.0, {0.0, 1.0}, 2, 2);
  const DofMap dm(mesh, 1, bc.system->fields());
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> w(dm.num_dofs());
  for (double& v : w)
    v = u(rng);
  const auto image = oracles::discrete_image_system(bc.system, mesh, dm, w);
  const auto dense = oracles::dense_assemble(mesh, dm, *image, 4);
  const auto x = oracles::dense_solve(dense.matrix, std::vector<double>(
                                                        dense.rhs.data(),
                                                        dense.rhs.data() + dense.rhs.size()));
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(std::abs(x[i] - w[i]) <= 1e-9);
}
