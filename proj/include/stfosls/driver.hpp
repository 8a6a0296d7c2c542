#pragma once

#include "stfosls/assembly.hpp"
#include "stfosls/estimator.hpp"
#include "stfosls/marking.hpp"
#include "stfosls/mesh.hpp"
#include "stfosls/problem.hpp"
#include "stfosls/system.hpp"

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stfosls
{

struct StopCriteria
{
  int max_iterations = 25;
  std::size_t max_dofs = 50'000;
  /// Stop once eta <= estimator_tolerance.
  double estimator_tolerance = 0.0;
};

void validate(const StopCriteria& stop);

struct RunRecord
{
  int level = 0;
  std::size_t dofs = 0;
  std::size_t elements = 0;
  double h_max = 0.0;
  double estimator = 0.0;
  std::optional<double> error;
  std::size_t marked = 0;
  SolverReport solver;
  double galerkin_defect = 0.0;
};

enum class TerminalReason
{
  MaxIterations,
  MaxDofs,
  Tolerance,
  ZeroEstimator,
  LevelsCompleted
};

std::string_view to_string(TerminalReason reason);

struct RunLog
{
  std::string system;
  std::string form;
  std::vector<RunRecord> records;
  TerminalReason reason = TerminalReason::MaxIterations;
  Mesh final_mesh;
};

/// State handed to an observer after the estimate step of every level.
struct LevelState
{
  const Mesh& mesh;
  const DofMap& dofmap;
  const DiscreteSolution& solution;
  const Indicators& indicators;
  const RunRecord& record;
};

using LevelObserver = std::function<void(const LevelState&)>;

struct RunOptions
{
  int degree = 1;
  /// <= 0 selects 2p + 2.
  int quadrature_degree = 0;
  double cg_tolerance = default_cg_tolerance;
  /// Reference for U-norm errors; nullptr when unavailable.
  const ExactSolution* exact = nullptr;
  LevelObserver observer;
};

/// Solve - estimate - mark - refine until a stop criterion holds or every
/// indicator vanishes. Throws SolverError when CG does not converge and
/// InvariantError when the marking property or conformity fails.
RunLog adaptive_run(const FirstOrderSystem& system, const Mesh& initial_mesh,
                    const MarkingConfig& marking, const StopCriteria& stop,
                    const RunOptions& options);

/// Uniform refinement: levels 0 .. levels-1, each refining every element by
/// two bisection sweeps so that h halves from one level to the next.
RunLog uniform_run(const FirstOrderSystem& system, const Mesh& initial_mesh,
                   int levels, const RunOptions& options);

struct RateRow
{
  std::size_t dofs = 0;
  double estimator = 0.0;
  std::optional<double> error;
  /// Orders with respect to dofs^{-1/2} (space-time dimension 2); NaN on the
  /// first row.
  double estimator_order = std::numeric_limits<double>::quiet_NaN();
  double error_order = std::numeric_limits<double>::quiet_NaN();
};

std::vector<RateRow> rate_table(const RunLog& log);

/// log(e_{l-1} / e_l) / log(h_{l-1} / h_l) for the error of each level l >= 1.
std::vector<double> observed_error_orders(const RunLog& log);

/// CSV with header  level,dofs,elements,estimator,error,marked,cg_iters
void write_run_csv(std::ostream& out, const RunLog& log);

} // namespace stfosls
