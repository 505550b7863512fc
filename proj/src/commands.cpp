// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <random>
#include <thread>
#include "semibeam/csv.hpp"
#include "semibeam/dynamics.hpp"
#include "semibeam/resolvent.hpp"
#include "semibeam/spectral.hpp"

namespace semibeam
{

namespace
{

using nlohmann::json;

constexpr std::string_view kCommandNames[] = {"check",     "simulate", "spectrum", "resolvent",
                                              "gevrey",    "audit",    "sweep"};

std::string UtcTimestamp()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

// Compact rendering for log lines; files carry the full 17 digits.
std::string Short(double value)
{
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

// NaN and infinities are not JSON numbers; they go into the manifest as strings.
json Number(double value)
{
  return std::isfinite(value) ? json(value) : json(FormatDouble(value));
}

class Run
{
public:
  Run(Command command, const ExperimentConfig &config, std::filesystem::path prefix,
      std::ostream &log)
    : command_(command), config_(config), prefix_(std::move(prefix)), log_(log)
  {
  }

  const ExperimentConfig &Config() const { return config_; }
  std::ostream &Log() { return log_; }
  json &Derived() { return result_.derived; }

  // <prefix>.<command><suffix>.csv
  void Write(const std::string &suffix, const CsvTable &table)
  {
    std::filesystem::path path = prefix_;
    path += "." + std::string(ToString(command_)) + suffix + ".csv";
    const std::string text = table.Render();
    WriteFileAtomic(path, text);
    result_.outputs.push_back({path, Sha256Hex(text), text.size()});
  }

  void Assert(std::string name, bool pass, std::string detail)
  {
    log_ << (pass ? "  ok    " : "  FAIL  ") << name << ": " << detail << '\n';
    result_.assertions.push_back({std::move(name), pass, std::move(detail)});
  }

  RunResult Finish(const std::string &started)
  {
    const bool failed = std::any_of(result_.assertions.begin(), result_.assertions.end(),
                                    [](const Assertion &a) { return !a.pass; });
    result_.exitCode = failed ? kExitAssertion : kExitOk;

    json manifest;
    manifest["artifact"] = "semibeam";
    manifest["version"] = kArtifactVersion;
    manifest["command"] = ToString(command_);
    manifest["config"] = config_.ToJson();
    manifest["derived"] = result_.derived;
    manifest["assertions"] = json::array();
    for (const auto &a : result_.assertions)
    {
      manifest["assertions"].push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    }
    manifest["exit_code"] = result_.exitCode;
    manifest["started_at"] = started;
    manifest["finished_at"] = UtcTimestamp();
    manifest["outputs"] = json::array();
    for (const auto &o : result_.outputs)
    {
      manifest["outputs"].push_back(
          {{"file", o.path.filename().string()}, {"sha256", o.sha256}, {"bytes", o.bytes}});
    }
    result_.manifest = prefix_;
    result_.manifest += "." + std::string(ToString(command_)) + ".manifest.json";
    WriteFileAtomic(result_.manifest, manifest.dump(2) + "\n");
    return std::move(result_);
  }

private:
  Command command_;
  const ExperimentConfig &config_;
  std::filesystem::path prefix_;
  std::ostream &log_;
  RunResult result_;
};

int ProbeSupport(const ExperimentConfig &cfg)
{
  return cfg.probeModes > 0 ? cfg.probeModes : cfg.modes;
}

CsvTable SampleTable(const std::vector<ResolventSample> &samples)
{
  CsvTable table{{"lambda", "norm", "residual"}, {}};
  for (const auto &s : samples)
  {
    table.rows.push_back({s.lambda, s.normEnergy, s.residual});
  }
  return table;
}

void RunCheck(Run &run)
{
  const ExperimentConfig &cfg = run.Config();
  const ModelParameters &p = cfg.model;
  const GeneratorMatrix gen = AssembleGenerator(p, cfg.modes);
  const EnergyGram gram = AssembleGram(p, cfg.modes);

  std::mt19937_64 rng(cfg.seed);
  CsvTable table{{"state", "re_inner", "dissipation", "residual"}, {}};
  double worst = 0.0;
  double largestRate = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.check.states; k++)
  {
    const StateVector U = RandomState(cfg.modes, p.length, rng, cfg.modes);
    const double inner = gram.Inner(gen.Apply(U), U);
    const double rate = DissipationRate(p, U);
    const double residual = std::abs(inner - rate) / (1.0 + gram.NormSquared(U));
    worst = std::max(worst, residual);
    largestRate = std::max(largestRate, rate);
    table.rows.push_back({static_cast<long long>(k), inner, rate, residual});
  }
  run.Write("", table);
  run.Derived()["max_residual"] = worst;
  run.Derived()["max_dissipation_rate"] = largestRate;
  run.Assert("dissipation identity", worst <= cfg.check.tolerance,
             "max |Re<BU,U>_G - D(U)| / (1 + |U|_G^2) = " + Short(worst) +
                 " over " + std::to_string(cfg.check.states) + " states, tolerance " +
                 Short(cfg.check.tolerance));
  run.Assert("dissipativity", largestRate <= 0.0,
             "largest dissipation rate " + Short(largestRate));
}

void RunSimulate(Run &run)
{
  const ExperimentConfig &cfg = run.Config();
  const ModelParameters &p = cfg.model;
  const SimulateBlock &sim = cfg.simulate;
  const GeneratorMatrix gen = AssembleGenerator(p, cfg.modes);
  const EnergyGram gram = AssembleGram(p, cfg.modes);

  StateVector initial = DefaultInitialState(cfg.modes, p.length);
  if (sim.initial == "random")
  {
    std::mt19937_64 rng(cfg.seed);
    initial = RandomState(cfg.modes, p.length, rng, ProbeSupport(cfg));
  }
  std::vector<double> times = MakeGrid(0.0, sim.tEnd, sim.samples, false);
  const TrajectoryRecord traj =
      PropagateExact(gen, gram, initial, times, {static_cast<std::size_t>(sim.snapshotStride), sim.fallbackStep});

  CsvTable table{{"t", "energy", "dissipation"}, {}};
  for (std::size_t k = 0; k < traj.times.size(); k++)
  {
    table.rows.push_back({traj.times[k], traj.energies[k], traj.dissipations[k]});
  }
  run.Write("", table);
  if (!traj.snapshots.empty())
  {
    CsvTable snaps{{"t", "field", "n", "coefficient"}, {}};
    for (const auto &[index, state] : traj.snapshots)
    {
      for (Field f : kAllFields)
      {
        for (int n = 0; n < cfg.modes; n++)
        {
          snaps.rows.push_back({traj.times[index], std::string(ToString(f)),
                                static_cast<long long>(n + 1), state.Block(f)(n)});
        }
      }
    }
    run.Write(".snapshots", snaps);
  }

  json &d = run.Derived();
  d["used_fallback"] = traj.usedFallback;
  d["eigenvector_condition"] = Number(traj.eigenvectorCondition);
  if (traj.usedFallback)
  {
    d["fallback_step"] = traj.fallbackStep;
  }

  // Exact propagation of a dissipative system cannot gain energy beyond rounding.
  double worstGain = 0.0;
  for (std::size_t k = 1; k < traj.energies.size(); k++)
  {
    worstGain = std::max(worstGain, (traj.energies[k] - traj.energies[k - 1]) /
                                        std::max(traj.energies.front(), 1e-300));
  }
  run.Assert("energy nonincreasing", worstGain <= 1e-10,
             "largest relative energy gain between samples " + Short(worstGain));

  const auto window = sim.fitWindow.value_or(std::pair{0.5 * sim.tEnd, sim.tEnd});
  try
  {
    const DecayFit fit = FitDecayRate(traj, window, gen);
    d["decay_fit"] = {{"omega", Number(fit.omega)},
                      {"r_squared", Number(fit.rSquared)},
                      {"window", {window.first, window.second}},
                      {"samples", fit.samples},
                      {"spectral_abscissa", Number(fit.spectralAbscissa)}};
    run.Log() << "  decay fit omega " << Short(fit.omega) << ", -abscissa "
              << Short(-fit.spectralAbscissa) << ", R^2 " << Short(fit.rSquared)
              << '\n';
  }
  catch (const std::invalid_argument &e)
  {
    d["decay_fit"] = {{"error", e.what()}};
    run.Log() << "  decay fit skipped: " << e.what() << '\n';
  }
}

void RunSpectrum(Run &run)
{
  const ExperimentConfig &cfg = run.Config();
  const GeneratorMatrix gen = AssembleGenerator(cfg.model, cfg.modes);
  const Eigen::VectorXcd values = GeneratorEigenvalues(gen);
  std::vector<std::complex<double>> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(),
            [](auto a, auto b) { return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag(); });

  CsvTable table{{"re", "im"}, {}};
  for (const auto &z : sorted)
  {
    table.rows.push_back({z.real(), z.imag()});
  }
  run.Write("", table);
  const double abscissa = sorted.front().real();
  run.Derived()["spectral_abscissa"] = abscissa;
  if (cfg.model.FullyDamped())
  {
    run.Assert("negative spectral abscissa", abscissa < 0.0,
               "max Re(eigenvalue) = " + Short(abscissa));
  }
  else
  {
    run.Log() << "  spectral abscissa " << Short(abscissa)
              << " (some damping gain is zero; no stability assertion)\n";
  }
}

void RunResolvent(Run &run)
{
  const ExperimentConfig &cfg = run.Config();
  const GeneratorMatrix gen = AssembleGenerator(cfg.model, cfg.modes);
  const EnergyGram gram = AssembleGram(cfg.model, cfg.modes);
  const std::vector<double> grid = cfg.resolvent.grid.Build(cfg.modes, cfg.model.length);
  const auto samples = Sweep(gen, gram, grid,
                             {cfg.resolvent.probes, cfg.seed, ProbeSupport(cfg), cfg.workers});
  run.Write("", SampleTable(samples));

  std::size_t failures = 0;
  double sup = 0.0, supAt = 0.0, worstResidual = 0.0;
  std::string firstError;
  for (const auto &s : samples)
  {
    if (s.error)
    {
      if (failures++ == 0)
      {
        firstError = *s.error;
      }
      continue;
    }
    if (s.normEnergy > sup)
    {
      sup = s.normEnergy;
      supAt = s.lambda;
    }
    worstResidual = std::max(worstResidual, s.residual);
  }
  run.Derived()["sup_norm"] = Number(sup);
  run.Derived()["sup_lambda"] = supAt;
  run.Derived()["max_residual"] = worstResidual;
  run.Assert("resolvent defined on grid", failures == 0,
             failures == 0 ? "all " + std::to_string(samples.size()) + " solves succeeded"
                           : std::to_string(failures) + " failed, first: " + firstError);
  run.Assert("resolvent residual", worstResidual <= cfg.resolvent.residualTolerance,
             "max relative residual " + Short(worstResidual) + ", tolerance " +
                 Short(cfg.resolvent.residualTolerance));
}

struct GevreyOutcome
{
  std::vector<ResolventSample> samples;
  ExponentFit fit;
  bool graded = false;  // System01 fits are exploratory
};

GevreyOutcome GevreyFit(const ExperimentConfig &cfg, const ModelParameters &p, unsigned workers)
{
  const GeneratorMatrix gen = AssembleGenerator(p, cfg.modes);
  const EnergyGram gram = AssembleGram(p, cfg.modes);
  const std::vector<double> grid = cfg.gevrey.grid.Build(cfg.modes, p.length);
  GevreyOutcome out;
  out.samples = Sweep(gen, gram, grid, {0, cfg.seed, ProbeSupport(cfg), workers});
  const auto window = cfg.gevrey.window.value_or(std::pair{grid.front(), grid.back()});
  out.graded = p.variant == Variant::System02;
  out.fit = FitExponent(out.samples, window, RegularityTarget(p.exponents), cfg.gevrey.tolerance);
  return out;
}

json FitJson(const GevreyOutcome &g)
{
  return {{"slope", Number(g.fit.slope)},
          {"r_squared", Number(g.fit.rSquared)},
          {"window", {g.fit.window.first, g.fit.window.second}},
          {"samples", g.fit.samples},
          {"target", g.fit.target},
          {"tolerance", g.fit.tolerance},
          {"graded", g.graded},
          {"pass", g.graded ? json(g.fit.pass) : json(nullptr)}};
}

void RunGevrey(Run &run)
{
  const ExperimentConfig &cfg = run.Config();
  const GevreyOutcome g = GevreyFit(cfg, cfg.model, cfg.workers);
  run.Write("", SampleTable(g.samples));
  run.Derived()["fit"] = FitJson(g);
  const std::string detail = "slope " + Short(g.fit.slope) + " vs target " +
                             Short(g.fit.target) + " - " +
                             Short(g.fit.tolerance) + " over [" +
                             Short(g.fit.window.first) + ", " +
                             Short(g.fit.window.second) + "]";
  if (g.graded)
  {
    run.Assert("resolvent decay exponent", g.fit.pass, detail);
  }
  else
  {
    run.Log() << "  exploratory (no pass/fail for System01): " << detail << '\n';
  }
}

void RunAudit(Run &run)
{
  const ExperimentConfig &cfg = run.Config();
  const std::vector<double> grid = cfg.audit.grid.Build(cfg.modes, cfg.model.length);
  const AuditReport report = EstimateAudit(
      cfg.model, cfg.modes, grid, {cfg.audit.trials, cfg.seed, ProbeSupport(cfg), cfg.audit.ceiling});

  CsvTable table{{"label", "quantity", "hypothesis", "max_ratio", "worst_lambda", "flagged"}, {}};
  for (const auto &item : report.items)
  {
    table.rows.push_back({item.label, item.quantity, static_cast<long long>(item.hypothesisMet),
                          item.maxRatio, item.worstLambda, static_cast<long long>(item.flagged)});
  }
  run.Write("", table);
  json items = json::array();
  for (const auto &item : report.items)
  {
    items.push_back({{"label", item.label},
                     {"max_ratio", Number(item.maxRatio)},
                     {"evaluated", item.hypothesisMet}});
  }
  run.Derived()["items"] = items;
  for (const auto &item : report.items)
  {
    if (!item.hypothesisMet)
    {
      run.Log() << "  skip  " << item.label << ": exponent hypothesis not met\n";
      continue;
    }
    run.Assert("estimate " + item.label, !item.flagged,
               item.quantity + " / (|F|_G |U|_G) <= " + Short(item.maxRatio) +
                   " (ceiling " + Short(cfg.audit.ceiling) + ")");
  }
}

struct SweepPoint
{
  std::array<double, 3> exponents{};
  double abscissa = 0.0;
  double supNorm = 0.0;
  std::vector<ResolventSample> curve;
  GevreyOutcome gevrey;
  std::string error;
};

std::vector<std::array<double, 3>> SweepTriples(const ExperimentConfig &cfg)
{
  std::vector<std::array<double, 3>> triples = cfg.sweep.exponents;
  if (cfg.sweep.corners)
  {
    for (int mask = 0; mask < 8; mask++)
    {
      triples.push_back({double(mask & 1), double((mask >> 1) & 1), double((mask >> 2) & 1)});
    }
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uniform(cfg.sweep.randomMin, 1.0);
  for (int k = 0; k < cfg.sweep.random; k++)
  {
    const double a = uniform(rng), b = uniform(rng), c = uniform(rng);
    triples.push_back({a, b, c});
  }
  return triples;
}

void RunSweep(Run &run)
{
  const ExperimentConfig &cfg = run.Config();
  const auto triples = SweepTriples(cfg);
  if (triples.empty())
  {
    throw ConfigError("sweep", "sweep visits no exponent triples; set sweep.exponents, "
                               "sweep.corners or sweep.random");
  }

  std::vector<SweepPoint> points(triples.size());
  auto evaluate = [&](std::size_t i)
  {
    SweepPoint &point = points[i];
    point.exponents = triples[i];
    try
    {
      ModelParameters p = cfg.model;
      p.exponents = triples[i];
      p.Validate();
      const GeneratorMatrix gen = AssembleGenerator(p, cfg.modes);
      const EnergyGram gram = AssembleGram(p, cfg.modes);
      point.abscissa = SpectralAbscissa(gen);
      point.curve = Sweep(gen, gram, cfg.resolvent.grid.Build(cfg.modes, p.length),
                          {0, cfg.seed, ProbeSupport(cfg), 1});
      for (const auto &s : point.curve)
      {
        point.supNorm = std::max(point.supNorm, s.normEnergy);
      }
      point.gevrey = GevreyFit(cfg, p, 1);
    }
    catch (const std::exception &e)
    {
      point.error = e.what();
    }
  };

  // Workers only compute; all files are written below, from this thread.
  const unsigned workers =
      std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(points.size())));
  {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; w++)
    {
      pool.emplace_back(
          [&]
          {
            for (std::size_t i = next++; i < points.size(); i = next++)
            {
              evaluate(i);
            }
          });
    }
  }

  CsvTable summary{{"index", "e1", "e2", "e3", "abscissa", "sup_norm", "slope", "target",
                    "graded", "pass"},
                   {}};
  const bool damped = cfg.model.FullyDamped();
  for (std::size_t i = 0; i < points.size(); i++)
  {
    const SweepPoint &pt = points[i];
    const std::string tag = "[" + Short(pt.exponents[0]) + ", " +
                            Short(pt.exponents[1]) + ", " +
                            Short(pt.exponents[2]) + "]";
    if (!pt.error.empty())
    {
      run.Assert("sweep point " + tag, false, pt.error);
      continue;
    }
    const auto &fit = pt.gevrey.fit;
    summary.rows.push_back({static_cast<long long>(i), pt.exponents[0], pt.exponents[1],
                            pt.exponents[2], pt.abscissa, pt.supNorm, fit.slope, fit.target,
                            static_cast<long long>(pt.gevrey.graded),
                            static_cast<long long>(fit.pass)});
    run.Write("." + std::to_string(i), SampleTable(pt.curve));
    if (damped)
    {
      run.Assert("abscissa " + tag, pt.abscissa < 0.0, Short(pt.abscissa));
      run.Assert("bounded resolvent " + tag, std::isfinite(pt.supNorm),
                 "sup norm " + Short(pt.supNorm));
    }
    if (pt.gevrey.graded)
    {
      run.Assert("decay exponent " + tag, fit.pass,
                 "slope " + Short(fit.slope) + " vs target " + Short(fit.target));
    }
  }
  run.Write("", summary);
  run.Derived()["points"] = points.size();
}

}  // namespace

std::string_view ToString(Command command)
{
  return kCommandNames[static_cast<int>(command)];
}

Command CommandFromString(std::string_view name)
{
  for (int i = 0; i < 7; i++)
  {
    if (kCommandNames[i] == name)
    {
      return static_cast<Command>(i);
    }
  }
  throw std::invalid_argument("unknown command '" + std::string(name) +
                              "' (expected check, simulate, spectrum, resolvent, gevrey, audit "
                              "or sweep)");
}

std::filesystem::path DefaultOutputPrefix(const std::filesystem::path &configPath)
{
  const char *dir = std::getenv("SEMIBEAM_OUTPUT_DIR");
  const std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : ".";
  return base / configPath.stem();
}

RunResult RunCommand(Command command, const ExperimentConfig &config,
                     const std::filesystem::path &prefix, std::ostream &log)
{
  const std::string started = UtcTimestamp();
  Run run(command, config, prefix, log);
  const ModelParameters &p = config.model;
  json &d = run.Derived();
  d["mu1"] = Eigenvalue(1, p.length);
  d["validity_window"] = {1.0, ValidityLimit(config.modes, p.length)};
  d["gevrey_target"] = GevreyTarget(p.exponents);
  d["regularity_target"] = RegularityTarget(p.exponents);

  log << ToString(command) << ": " << ToString(p.variant) << ", N = " << config.modes
      << ", exponents (" << Short(p.exponents[0]) << ", " << Short(p.exponents[1])
      << ", " << Short(p.exponents[2]) << ")\n";
  try
  {
    switch (command)
    {
    case Command::Check:
      RunCheck(run);
      break;
    case Command::Simulate:
      RunSimulate(run);
      break;
    case Command::Spectrum:
      RunSpectrum(run);
      break;
    case Command::Resolvent:
      RunResolvent(run);
      break;
    case Command::Gevrey:
      RunGevrey(run);
      break;
    case Command::Audit:
      RunAudit(run);
      break;
    case Command::Sweep:
      RunSweep(run);
      break;
    }
  }
  catch (const NumericalFailure &e)
  {
    run.Assert("numerics", false, e.what());
  }
  catch (const NearSingularResolvent &e)
  {
    run.Assert("numerics", false, e.what());
  }
  return run.Finish(started);
}

}  // namespace semibeam
