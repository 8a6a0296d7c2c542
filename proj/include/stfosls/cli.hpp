#pragma once

#include "stfosls/driver.hpp"
#include "stfosls/marking.hpp"
#include "stfosls/problem.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace stfosls::cli
{

enum class Mode
{
  Adaptive,
  Uniform
};

/// Contents of a run configuration file: one `key = value` per line, `#`
/// starts a comment.
///
///   case           heat-smooth | convection-reaction | variable-a |
///                  incompatible | poisson-smooth
///   system         parabolic | poisson        (default: from case)
///   form           flux | gradient            (default flux)
///   degree         1 | 2                      (default 1)
///   mode           adaptive | uniform         (default adaptive)
///   marking        doerfler | maximum         (default doerfler)
///   theta          marking parameter          (default 0.5)
///   levels         uniform levels             (default 5)
///   max_iterations adaptive levels            (default 25)
///   max_dofs       dof budget                 (default 50000)
///   tolerance      absolute estimator target  (default 0)
///   t_end          final time                 (default 1)
///   nt, nx         initial grid cells         (default 2, 2)
///   write_mesh     true | false               (default true)
///   output         output directory           (default "out")
struct RunConfig
{
  std::string case_name = "heat-smooth";
  std::string system = "parabolic";
  ConvectionForm form = ConvectionForm::Flux;
  int degree = 1;
  Mode mode = Mode::Adaptive;
  MarkingConfig marking;
  int levels = 5;
  StopCriteria stop;
  double t_end = 1.0;
  int nt = 2;
  int nx = 2;
  bool write_mesh = true;
  std::filesystem::path output = "out";
};

/// Parse and validate. Throws ParameterError with a line-numbered message.
RunConfig parse_config(std::istream& in);

/// Exit codes of `run`.
inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid_config = 2;
inline constexpr int exit_solver_failure = 3;
inline constexpr int exit_invariant_violation = 4;

/// Execute a parsed configuration and write runlog.csv, summary.txt and
/// (optionally) mesh_final.txt into config.output. Returns the exit code.
int execute(const RunConfig& config, std::ostream& log);

/// `run <config> [--out dir]`
int cmd_run(const std::filesystem::path& config_file,
            const std::optional<std::filesystem::path>& out_dir,
            std::ostream& log);

/// Built-in oracle suite. Prints one line per check; returns 0 iff all pass.
int cmd_verify(std::uint64_t seed, std::ostream& out);

} // namespace stfosls::cli
