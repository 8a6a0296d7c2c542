#include "stfosls/driver.hpp"
#include "stfosls/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace stfosls
{

namespace
{

std::string form_label(const FirstOrderSystem& system)
{
  if (const auto* p = dynamic_cast<const ParabolicSystem*>(&system))
    return std::string(to_string(p->problem().form));
  return "none";
}

struct LevelResult
{
  DofMap dofmap;
  DiscreteSolution solution;
  Indicators indicators;
  RunRecord record;
};

LevelResult solve_level(const FirstOrderSystem& system, const Mesh& mesh,
                        int level, const RunOptions& options)
{
  const int qdeg = options.quadrature_degree > 0
                       ? options.quadrature_degree
                       : default_quadrature_degree(options.degree);
  DofMap dofmap(mesh, options.degree, system.fields());
  SparseSystem sys = assemble(mesh, dofmap, system, qdeg);
  DiscreteSolution solution = solve_cg(sys.matrix, sys.rhs, options.cg_tolerance);
  if (!solution.report.converged)
  {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "CG did not converge on level %d (%d iterations, relative "
                  "residual %.3e, %zu dofs)",
                  level, solution.report.iterations,
                  solution.report.relative_residual, dofmap.num_dofs());
    throw SolverError(buf);
  }
  Indicators indicators
      = compute_indicators(mesh, dofmap, system, solution.coefficients, qdeg);

  RunRecord record;
  record.level = level;
  record.dofs = dofmap.num_dofs();
  record.elements = mesh.num_elements();
  record.h_max = max_mesh_size(mesh);
  record.estimator = indicators.global;
  record.solver = solution.report;
  record.galerkin_defect = galerkin_orthogonality_check(
      mesh, dofmap, system, solution.coefficients, qdeg);
  if (options.exact)
  {
    record.error = u_norm_error(mesh, dofmap, system, solution.coefficients,
                                *options.exact, qdeg)
                       .combined;
  }
  return {std::move(dofmap), std::move(solution), std::move(indicators),
          record};
}

void notify(const RunOptions& options, const Mesh& mesh, const LevelResult& r)
{
  if (options.observer)
    options.observer({mesh, r.dofmap, r.solution, r.indicators, r.record});
}

} // namespace

std::string_view to_string(TerminalReason reason)
{
  switch (reason)
  {
  case TerminalReason::MaxIterations:
    return "max_iterations";
  case TerminalReason::MaxDofs:
    return "max_dofs";
  case TerminalReason::Tolerance:
    return "tolerance";
  case TerminalReason::ZeroEstimator:
    return "zero_estimator";
  case TerminalReason::LevelsCompleted:
    return "levels_completed";
  }
  return "unknown";
}

void validate(const StopCriteria& stop)
{
  if (stop.max_iterations < 1)
    throw ParameterError("max_iterations must be at least 1");
  if (stop.max_dofs < 1)
    throw ParameterError("max_dofs must be at least 1");
  if (!(stop.estimator_tolerance >= 0.0))
    throw ParameterError("estimator tolerance must be nonnegative");
}

//-----------------------------------------------------------------------------
RunLog adaptive_run(const FirstOrderSystem& system, const Mesh& initial_mesh,
                    const MarkingConfig& marking, const StopCriteria& stop,
                    const RunOptions& options)
{
  validate(marking);
  validate(stop);
  if (!is_conforming(initial_mesh))
    throw InvariantError("adaptive_run: initial mesh is not conforming");

  RunLog log;
  log.system = system.name();
  log.form = form_label(system);

  Mesh mesh = initial_mesh;
  for (int level = 0;; ++level)
  {
    LevelResult r = solve_level(system, mesh, level, options);
    const double eta = r.indicators.global;

    std::optional<TerminalReason> reason;
    if (eta == 0.0)
      reason = TerminalReason::ZeroEstimator;
    else if (eta <= stop.estimator_tolerance)
      reason = TerminalReason::Tolerance;
    else if (level + 1 >= stop.max_iterations)
      reason = TerminalReason::MaxIterations;

    MarkSet marks;
    if (!reason)
    {
      marks = stfosls::mark(r.indicators.local, marking);
      if (!verify_marking_property(r.indicators.local, marks,
                                   [](double t) { return t; }))
      {
        throw InvariantError("marking property violated on level "
                             + std::to_string(level));
      }
      r.record.marked = marks.size();
    }
    notify(options, mesh, r);
    log.records.push_back(r.record);

    if (reason)
    {
      log.reason = *reason;
      break;
    }

    Mesh refined = bisect(mesh, marks);
    if (!is_conforming(refined))
      throw InvariantError("bisect produced a non-conforming mesh");
    if (DofMap(refined, options.degree, system.fields()).num_dofs() > stop.max_dofs)
    {
      log.reason = TerminalReason::MaxDofs;
      break;
    }
    mesh = std::move(refined);
  }
  log.final_mesh = std::move(mesh);
  return log;
}
//-----------------------------------------------------------------------------
RunLog uniform_run(const FirstOrderSystem& system, const Mesh& initial_mesh,
                   int levels, const RunOptions& options)
{
  if (levels < 1)
    throw ParameterError("uniform_run: need at least one level");
  if (!is_conforming(initial_mesh))
    throw InvariantError("uniform_run: initial mesh is not conforming");

  RunLog log;
  log.system = system.name();
  log.form = form_label(system);
  log.reason = TerminalReason::LevelsCompleted;

  Mesh mesh = initial_mesh;
  for (int level = 0; level < levels; ++level)
  {
    LevelResult r = solve_level(system, mesh, level, options);
    if (level + 1 < levels)
      r.record.marked = mesh.num_elements();
    notify(options, mesh, r);
    log.records.push_back(r.record);
    if (level + 1 < levels)
    {
      mesh = bisect_all(bisect_all(mesh));
      if (!is_conforming(mesh))
        throw InvariantError("uniform refinement produced a non-conforming mesh");
    }
  }
  log.final_mesh = std::move(mesh);
  return log;
}
//-----------------------------------------------------------------------------
std::vector<RateRow> rate_table(const RunLog& log)
{
  if (log.records.size() < 2)
    throw ParameterError("rate_table: need at least two records");
  std::vector<RateRow> rows;
  for (std::size_t i = 0; i < log.records.size(); ++i)
  {
    const RunRecord& r = log.records[i];
    RateRow row;
    row.dofs = r.dofs;
    row.estimator = r.estimator;
    row.error = r.error;
    if (i > 0)
    {
      const RunRecord& prev = log.records[i - 1];
      const double scale = 0.5 * std::log(static_cast<double>(r.dofs)
                                          / static_cast<double>(prev.dofs));
      row.estimator_order = std::log(prev.estimator / r.estimator) / scale;
      if (r.error and prev.error)
        row.error_order = std::log(*prev.error / *r.error) / scale;
    }
    rows.push_back(row);
  }
  return rows;
}
//-----------------------------------------------------------------------------
std::vector<double> observed_error_orders(const RunLog& log)
{
  std::vector<double> orders;
  for (std::size_t i = 1; i < log.records.size(); ++i)
  {
    const RunRecord& a = log.records[i - 1];
    const RunRecord& b = log.records[i];
    if (!a.error or !b.error)
      throw ParameterError("observed_error_orders: run has no error data");
    orders.push_back(std::log(*a.error / *b.error) / std::log(a.h_max / b.h_max));
  }
  return orders;
}
//-----------------------------------------------------------------------------
void write_run_csv(std::ostream& out, const RunLog& log)
{
  out << "level,dofs,elements,estimator,error,marked,cg_iters\n";
  char buf[64];
  for (const RunRecord& r : log.records)
  {
    out << r.level << ',' << r.dofs << ',' << r.elements << ',';
    std::snprintf(buf, sizeof buf, "%.12e", r.estimator);
    out << buf << ',';
    if (r.error)
    {
      std::snprintf(buf, sizeof buf, "%.12e", *r.error);
      out << buf;
    }
    out << ',' << r.marked << ',' << r.solver.iterations << '\n';
  }
}

} // namespace stfosls
