#include "stfosls/cli.hpp"
#include "stfosls/cases.hpp"
#include "stfosls/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

namespace stfosls::cli
{

namespace
{

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

class ConfigError : public ParameterError
{
public:
  ConfigError(int line, const std::string& what)
      : ParameterError("config line " + std::to_string(line) + ": " + what)
  {
  }
};

double parse_double(const std::string& v, int line)
{
  std::size_t used = 0;
  double out = 0.0;
  try
  {
    out = std::stod(v, &used);
  }
  catch (const std::exception&)
  {
    throw ConfigError(line, "expected a number, got '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError(line, "expected a number, got '" + v + "'");
  return out;
}

long long parse_int(const std::string& v, int line)
{
  std::size_t used = 0;
  long long out = 0;
  try
  {
    out = std::stoll(v, &used);
  }
  catch (const std::exception&)
  {
    throw ConfigError(line, "expected an integer, got '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError(line, "expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, int line)
{
  if (v == "true" or v == "1" or v == "yes")
    return true;
  if (v == "false" or v == "0" or v == "no")
    return false;
  throw ConfigError(line, "expected true or false, got '" + v + "'");
}

std::string format_double(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

} // namespace

//-----------------------------------------------------------------------------
RunConfig parse_config(std::istream& in)
{
  RunConfig cfg;
  std::set<std::string> seen;
  bool explicit_system = false;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw))
  {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty())
      continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty() or value.empty())
      throw ConfigError(line, "expected 'key = value'");
    if (!seen.insert(key).second)
      throw ConfigError(line, "duplicate key '" + key + "'");

    if (key == "case")
      cfg.case_name = value;
    else if (key == "system")
    {
      if (value != "parabolic" and value != "poisson")
        throw ConfigError(line, "system must be parabolic or poisson");
      cfg.system = value;
      explicit_system = true;
    }
    else if (key == "form")
    {
      if (value == "flux")
        cfg.form = ConvectionForm::Flux;
      else if (value == "gradient")
        cfg.form = ConvectionForm::Gradient;
      else
        throw ConfigError(line, "form must be flux or gradient");
    }
    else if (key == "degree")
      cfg.degree = static_cast<int>(parse_int(value, line));
    else if (key == "mode")
    {
      if (value == "adaptive")
        cfg.mode = Mode::Adaptive;
      else if (value == "uniform")
        cfg.mode = Mode::Uniform;
      else
        throw ConfigError(line, "mode must be adaptive or uniform");
    }
    else if (key == "marking")
    {
      if (value == "doerfler")
        cfg.marking.strategy = MarkingStrategy::Doerfler;
      else if (value == "maximum")
        cfg.marking.strategy = MarkingStrategy::Maximum;
      else
        throw ConfigError(line, "marking must be doerfler or maximum");
    }
    else if (key == "theta")
      cfg.marking.theta = parse_double(value, line);
    else if (key == "levels")
      cfg.levels = static_cast<int>(parse_int(value, line));
    else if (key == "max_iterations")
      cfg.stop.max_iterations = static_cast<int>(parse_int(value, line));
    else if (key == "max_dofs")
    {
      const long long v = parse_int(value, line);
      if (v < 1)
        throw ConfigError(line, "max_dofs must be positive");
      cfg.stop.max_dofs = static_cast<std::size_t>(v);
    }
    else if (key == "tolerance")
      cfg.stop.estimator_tolerance = parse_double(value, line);
    else if (key == "t_end")
      cfg.t_end = parse_double(value, line);
    else if (key == "nt")
      cfg.nt = static_cast<int>(parse_int(value, line));
    else if (key == "nx")
      cfg.nx = static_cast<int>(parse_int(value, line));
    else if (key == "write_mesh")
      cfg.write_mesh = parse_bool(value, line);
    else if (key == "output")
      cfg.output = value;
    else
      throw ConfigError(line, "unknown key '" + key + "'");
  }

  // Cross-field validation.
  const auto names = builtin_case_names();
  if (std::find(names.begin(), names.end(), cfg.case_name) == names.end())
    throw ParameterError("unknown case '" + cfg.case_name + "'");
  const bool poisson_case = cfg.case_name == "poisson-smooth";
  if (!explicit_system)
    cfg.system = poisson_case ? "poisson" : "parabolic";
  if ((cfg.system == "poisson") != poisson_case)
    throw ParameterError("case '" + cfg.case_name + "' does not belong to system '"
                         + cfg.system + "'");
  if (cfg.degree != 1 and cfg.degree != 2)
    throw ParameterError("degree must be 1 or 2");
  if (cfg.levels < 1)
    throw ParameterError("levels must be at least 1");
  if (!(cfg.t_end > 0.0))
    throw ParameterError("t_end must be positive");
  if (poisson_case and cfg.t_end != 1.0)
    throw ParameterError("poisson-smooth is posed on the unit square (t_end = 1)");
  if (cfg.nt < 1 or cfg.nx < 1)
    throw ParameterError("nt and nx must be positive");
  validate(cfg.marking);
  validate(cfg.stop);
  return cfg;
}
//-----------------------------------------------------------------------------
int execute(const RunConfig& cfg, std::ostream& log)
{
  RunLog run;
  try
  {
    const BuiltinCase bc = make_case(cfg.case_name, cfg.form, cfg.t_end);
    const Mesh mesh0 = uniform_initial_mesh(bc.t_end, bc.omega, cfg.nt, cfg.nx);
    RunOptions options;
    options.degree = cfg.degree;
    options.exact = bc.exact ? &*bc.exact : nullptr;
    if (cfg.mode == Mode::Uniform)
      run = uniform_run(*bc.system, mesh0, cfg.levels, options);
    else
      run = adaptive_run(*bc.system, mesh0, cfg.marking, cfg.stop, options);
  }
  catch (const ParameterError& e)
  {
    log << "error: " << e.what() << '\n';
    return exit_invalid_config;
  }
  catch (const SolverError& e)
  {
    log << "solver failure: " << e.what() << '\n';
    return exit_solver_failure;
  }
  catch (const InvariantError& e)
  {
    log << "invariant violation: " << e.what() << '\n';
    return exit_invariant_violation;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.output, ec);
  if (ec)
  {
    log << "error: cannot create output directory " << cfg.output << ": "
        << ec.message() << '\n';
    return exit_invalid_config;
  }

  {
    std::ofstream csv(cfg.output / "runlog.csv");
    write_run_csv(csv, run);
  }
  if (cfg.write_mesh)
  {
    std::ofstream out(cfg.output / "mesh_final.txt");
    write_mesh(out, run.final_mesh);
  }
  {
    std::ofstream s(cfg.output / "summary.txt");
    const RunRecord& first = run.records.front();
    const RunRecord& last = run.records.back();
    s << "case = " << cfg.case_name << '\n'
      << "system = " << run.system << '\n'
      << "form = " << run.form << '\n'
      << "degree = " << cfg.degree << '\n'
      << "mode = " << (cfg.mode == Mode::Uniform ? "uniform" : "adaptive") << '\n';
    if (cfg.mode == Mode::Adaptive)
    {
      s << "marking = " << to_string(cfg.marking.strategy) << '\n'
        << "theta = " << format_double(cfg.marking.theta) << '\n';
    }
    s << "levels = " << run.records.size() << '\n'
      << "terminal_reason = " << to_string(run.reason) << '\n'
      << "initial_estimator = " << format_double(first.estimator) << '\n'
      << "final_estimator = " << format_double(last.estimator) << '\n'
      << "final_dofs = " << last.dofs << '\n'
      << "final_elements = " << last.elements << '\n';
    if (last.error)
      s << "final_error = " << format_double(*last.error) << '\n';
  }

  log << "levels: " << run.records.size() << ", final estimator "
      << format_double(run.records.back().estimator) << ", reason "
      << to_string(run.reason) << '\n';
  return exit_ok;
}
//-----------------------------------------------------------------------------
int cmd_run(const std::filesystem::path& config_file,
            const std::optional<std::filesystem::path>& out_dir,
            std::ostream& log)
{
  std::ifstream in(config_file);
  if (!in)
  {
    log << "error: cannot read config file " << config_file << '\n';
    return exit_invalid_config;
  }
  RunConfig cfg;
  try
  {
    cfg = parse_config(in);
  }
  catch (const ParameterError& e)
  {
    log << "error: " << e.what() << '\n';
    return exit_invalid_config;
  }
  if (out_dir)
    cfg.output = *out_dir;
  return execute(cfg, log);
}

} // namespace stfosls::cli
