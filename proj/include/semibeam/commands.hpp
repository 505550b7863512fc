// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_COMMANDS_HPP
#define SEMIBEAM_COMMANDS_HPP

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>
#include <nlohmann/json.hpp>
#include "semibeam/config.hpp"

namespace semibeam
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAssertion = 2;

inline constexpr std::string_view kArtifactVersion = "0.1.0";

enum class Command
{
  Check,
  Simulate,
  Spectrum,
  Resolvent,
  Gevrey,
  Audit,
  Sweep
};

std::string_view ToString(Command command);
// Throws std::invalid_argument listing the valid commands.
Command CommandFromString(std::string_view name);

struct Assertion
{
  std::string name;
  bool pass = true;
  std::string detail;
};

struct OutputFile
{
  std::filesystem::path path;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunResult
{
  int exitCode = kExitOk;
  std::vector<Assertion> assertions;
  std::vector<OutputFile> outputs;
  nlohmann::json derived = nlohmann::json::object();
  std::filesystem::path manifest;
};

// Output prefix used when neither --out nor the config's "output" is given:
// $SEMIBEAM_OUTPUT_DIR/<config stem>, or ./<config stem> without the variable.
std::filesystem::path DefaultOutputPrefix(const std::filesystem::path &configPath);

// Runs one command and writes <prefix>.<command>*.csv plus <prefix>.<command>.manifest.json.
// The exit code is kExitAssertion when any assertion failed or the numerics broke down.
// Configuration problems surface as ConfigError and are the caller's to map to kExitUsage.
RunResult RunCommand(Command command, const ExperimentConfig &config,
                     const std::filesystem::path &prefix, std::ostream &log);

}  // namespace semibeam

#endif  // SEMIBEAM_COMMANDS_HPP
