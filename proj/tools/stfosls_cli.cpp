#include "stfosls/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
  CLI::App app{"Adaptive space-time least-squares finite elements"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run a configuration file");
  run->add_option("config", config, "configuration file")->required();
  run->add_option("--out", out_dir, "output directory (overrides the config)");

  std::uint64_t seed = 20240611;
  auto* verify = app.add_subcommand("verify", "run the built-in oracle suite");
  verify->add_option("--seed", seed, "seed of the randomized trials");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : stfosls::cli::exit_invalid_config;
  }

  if (*run)
  {
    std::optional<std::filesystem::path> out;
    if (!out_dir.empty())
      out = out_dir;
    return stfosls::cli::cmd_run(config, out, std::cerr);
  }
  return stfosls::cli::cmd_verify(seed, std::cout);
}
