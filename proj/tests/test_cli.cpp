#include "stfosls/cli.hpp"
#include "stfosls/errors.hpp"
#include "stfosls/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace stfosls;
namespace fs = std::filesystem;

namespace
{

cli::RunConfig parse(const std::string& text)
{
  std::istringstream in(text);
  return cli::parse_config(in);
}

fs::path scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / ("stfosls_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const std::string& s)
{
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("config defaults and overrides")
{
  const cli::RunConfig d = parse("");
  CHECK(d.case_name == "heat-smooth");
  CHECK(d.system == "parabolic");
  CHECK(d.degree == 1);
  CHECK(d.mode == cli::Mode::Adaptive);
  CHECK(d.marking.strategy == MarkingStrategy::Doerfler);
  CHECK(d.marking.theta == 0.5);

  const cli::RunConfig c = parse("# comment\n"
                                 "case = poisson-smooth\n"
                                 "  degree=2   # trailing comment\n"
                                 "\n"
                                 "mode = uniform\n"
                                 "levels = 3\n"
                                 "marking = maximum\n"
                                 "theta = 0.25\n"
                                 "max_dofs = 1000\n"
                                 "write_mesh = false\n"
                                 "output = somewhere\n");
  CHECK(c.case_name == "poisson-smooth");
  CHECK(c.system == "poisson");
  CHECK(c.degree == 2);
  CHECK(c.mode == cli::Mode::Uniform);
  CHECK(c.levels == 3);
  CHECK(c.marking.strategy == MarkingStrategy::Maximum);
  CHECK(c.marking.theta == 0.25);
  CHECK(c.stop.max_dofs == 1000);
  CHECK_FALSE(c.write_mesh);
  CHECK(c.output == fs::path("somewhere"));

  CHECK(parse("form = gradient\n").form == ConvectionForm::Gradient);
}

TEST_CASE("invalid configs")
{
  for (const char* text : {"theta = 0\n",
                           "marking = maximum\ntheta = 1.5\n",
                           "degree = 3\n",
                           "case = nonsense\n",
                           "case = poisson-smooth\nsystem = parabolic\n",
                           "system = poisson\n",
                           "case = poisson-smooth\nt_end = 2\n",
                           "t_end = 0\n",
                           "nt = 0\n",
                           "max_iterations = 0\n",
                           "levels = 0\n",
                           "tolerance = -1\n",
                           "colour = blue\n",
                           "degree = 1\ndegree = 2\n",
                           "degree = two\n",
                           "theta = 0.5x\n",
                           "write_mesh = maybe\n",
                           "just some words\n",
                           "mode = sideways\n"})
  {
    INFO(std::string(text));
    CHECK_THROWS_AS(parse(text), ParameterError);
  }

  try
  {
    parse("case = heat-smooth\ncolour = blue\n");
  }
  catch (const ParameterError& e)
  {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("uniform run writes its outputs")
{
  cli::RunConfig cfg = parse("mode = uniform\nlevels = 3\n");
  cfg.output = scratch("uniform");
  std::ostringstream log;
  REQUIRE(cli::execute(cfg, log) == cli::exit_ok);

  const std::string csv = slurp(cfg.output / "runlog.csv");
  CHECK(csv.rfind("level,dofs,elements,estimator,error,marked,cg_iters\n", 0) == 0);
  CHECK(line_count(csv) == 1 + 3);

  const std::string summary = slurp(cfg.output / "summary.txt");
  CHECK(summary.find("case = heat-smooth\n") != std::string::npos);
  CHECK(summary.find("terminal_reason = levels_completed\n") != std::string::npos);
  CHECK(summary.find("final_error = ") != std::string::npos);

  std::ifstream mesh_file(cfg.output / "mesh_final.txt");
  const Mesh mesh = read_mesh(mesh_file);
  CHECK(is_conforming(mesh));
  CHECK(mesh.num_elements() == 8 * 16);
  fs::remove_all(cfg.output);
}

TEST_CASE("incompatible adaptive run reduces the estimator")
{
  cli::RunConfig cfg = parse("case = incompatible\nmax_iterations = 6\nwrite_mesh = no\n");
  cfg.output = scratch("incompatible");
  std::ostringstream log;
  REQUIRE(cli::execute(cfg, log) == cli::exit_ok);
  CHECK_FALSE(fs::exists(cfg.output / "mesh_final.txt"));

  std::istringstream csv(slurp(cfg.output / "runlog.csv"));
  std::string header, line;
  std::getline(csv, header);
  std::vector<double> eta;
  while (std::getline(csv, line))
  {
    std::istringstream row(line);
    std::string field;
    for (int i = 0; i < 4; ++i)
      std::getline(row, field, ',');
    eta.push_back(std::stod(field));
    std::getline(row, field, ',');
    CHECK(field.empty());
  }
  REQUIRE(eta.size() == 6);
  CHECK(eta.back() < eta.front());
  CHECK(slurp(cfg.output / "summary.txt").find("final_error") == std::string::npos);
  fs::remove_all(cfg.output);
}

TEST_CASE("reruns are byte-identical")
{
  const fs::path dir = scratch("rerun");
  fs::create_directories(dir);
  const fs::path config = dir / "run.cfg";
  std::ofstream(config) << "case = convection-reaction\nform = gradient\n"
                           "degree = 2\nmax_iterations = 4\n";
  std::ostringstream log;
  REQUIRE(cli::cmd_run(config, dir / "a", log) == cli::exit_ok);
  REQUIRE(cli::cmd_run(config, dir / "b", log) == cli::exit_ok);
  for (const char* name : {"runlog.csv", "summary.txt", "mesh_final.txt"})
  {
    const std::string a = slurp(dir / "a" / name);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / "b" / name));
  }
  fs::remove_all(dir);
}

TEST_CASE("run exit codes")
{
  const fs::path dir = scratch("codes");
  fs::create_directories(dir);
  std::ostringstream log;
  CHECK(cli::cmd_run(dir / "missing.cfg", std::nullopt, log) == cli::exit_invalid_config);

  const fs::path bad = dir / "bad.cfg";
  std::ofstream(bad) << "marking = doerfler\ntheta = 0\n";
  CHECK(cli::cmd_run(bad, dir / "out", log) == cli::exit_invalid_config);
  CHECK(log.str().find("error") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("verify reports every check")
{
  std::ostringstream out;
  CHECK(cli::cmd_verify(11, out) == 0);
  std::istringstream lines(out.str());
  std::string line;
  int passed = 0;
  while (std::getline(lines, line))
  {
    CHECK(line.rfind("FAIL", 0) != 0);
    if (line.rfind("PASS ", 0) == 0)
      ++passed;
  }
  CHECK(passed >= 6);
}
