// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_CONFIG_HPP
#define SEMIBEAM_CONFIG_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>
#include <nlohmann/json.hpp>
#include "semibeam/model.hpp"

namespace semibeam
{

// Schema violation in an experiment file. Key() is the dotted path of the offending entry.
class ConfigError : public std::runtime_error
{
public:
  ConfigError(std::string key, const std::string &what)
    : std::runtime_error(what), key_(std::move(key))
  {
  }
  const std::string &Key() const { return key_; }

private:
  std::string key_;
};

struct GridSpec
{
  double min = 1.0;
  // Unset means the validity limit mu_floor(N/2) of the configured truncation.
  std::optional<double> max;
  int count = 50;
  bool logSpaced = true;

  std::vector<double> Build(int modes, double length) const;
};

struct CheckBlock
{
  int states = 500;
  double tolerance = 1e-10;
};

struct SimulateBlock
{
  double tEnd = 40.0;
  int samples = 401;
  // Decay fit window; unset means the second half of the run.
  std::optional<std::pair<double, double>> fitWindow;
  // "default" (1/n^2 on phi and y) or "random" (seeded, smooth).
  std::string initial = "default";
  int snapshotStride = 0;
  double fallbackStep = 1e-4;
};

struct ResolventBlock
{
  GridSpec grid{0.1, std::nullopt, 50, true};
  int probes = 3;
  double residualTolerance = 1e-9;
};

struct GevreyBlock
{
  GridSpec grid{10.0, std::nullopt, 40, true};
  // Unset means [grid.min, grid max].
  std::optional<std::pair<double, double>> window;
  double tolerance = 0.15;
};

struct AuditBlock
{
  GridSpec grid{1.0, std::nullopt, 50, true};
  int trials = 20;
  double ceiling = 1e6;
};

struct SweepBlock
{
  // Exponent triples to visit. Empty together with corners = false and random = 0 is an error.
  std::vector<std::array<double, 3>> exponents;
  bool corners = true;
  int random = 10;
  // Exponents drawn for the random triples lie in [randomMin, 1].
  double randomMin = 0.0;
};

struct ExperimentConfig
{
  ModelParameters model;
  int modes = 32;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  // Probe support in modes per field; 0 means all modes.
  int probeModes = 16;
  std::optional<std::string> output;

  CheckBlock check;
  SimulateBlock simulate;
  ResolventBlock resolvent;
  GevreyBlock gevrey;
  AuditBlock audit;
  SweepBlock sweep;

  // Full configuration with defaults filled in, in the file schema.
  nlohmann::json ToJson() const;
};

ExperimentConfig ParseConfig(const std::filesystem::path &path);
ExperimentConfig ParseConfigJson(const nlohmann::json &document);
ExperimentConfig ParseConfigText(const std::string &text);

}  // namespace semibeam

#endif  // SEMIBEAM_CONFIG_HPP
