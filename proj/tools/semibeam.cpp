// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <CLI11.hpp>
#include "semibeam/commands.hpp"
#include "semibeam/config.hpp"
#include "semibeam/model.hpp"

int main(int argc, char **argv)
{
  using namespace semibeam;

  CLI::App app{"Spectral Galerkin experiments for the thermoelastic double-wall Timoshenko "
               "system"};
  std::string commandName;
  std::string configPath;
  std::optional<int> modes;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  app.add_option("command", commandName,
                 "check | simulate | spectrum | resolvent | gevrey | audit | sweep")
      ->required();
  app.add_option("--config", configPath, "experiment file (JSON)")->required();
  app.add_option("--modes", modes, "modes per field, overrides the file")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for random probes, overrides the file");
  app.add_option("--workers", workers, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out", out,
                 "output prefix; default $SEMIBEAM_OUTPUT_DIR/<config name> or ./<config name>");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return kExitUsage;
  }

  try
  {
    const Command command = CommandFromString(commandName);
    ExperimentConfig config = ParseConfig(configPath);
    if (modes)
    {
      config.modes = *modes;
    }
    if (seed)
    {
      config.seed = *seed;
    }
    if (workers)
    {
      config.workers = *workers;
    }
    std::filesystem::path prefix = DefaultOutputPrefix(configPath);
    if (out)
    {
      prefix = *out;
    }
    else if (config.output)
    {
      prefix = *config.output;
    }

    const RunResult result = RunCommand(command, config, prefix, std::cout);
    for (const auto &o : result.outputs)
    {
      std::cout << "  wrote " << o.path.string() << '\n';
    }
    std::cout << "  manifest " << result.manifest.string() << '\n';
    if (result.exitCode == kExitAssertion)
    {
      std::cerr << "semibeam: assertion failed:";
      for (const auto &a : result.assertions)
      {
        if (!a.pass)
        {
          std::cerr << ' ' << a.name << ';';
        }
      }
      std::cerr << '\n';
    }
    return result.exitCode;
  }
  catch (const ConfigError &e)
  {
    std::cerr << "semibeam: configuration error at '" << e.Key() << "': " << e.what() << '\n';
    return kExitUsage;
  }
  catch (const std::exception &e)
  {
    std::cerr << "semibeam: " << e.what() << '\n';
    return kExitUsage;
  }
}
