// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include "semibeam/resolvent.hpp"

namespace semibeam
{

namespace
{

using nlohmann::json;

// Config key for each ModelParameters member whose name differs from the file schema.
std::string ConfigKeyForParameter(const std::string &name)
{
  if (name == "vdw")
  {
    return "j";
  }
  if (name == "betaThermal")
  {
    return "beta";
  }
  return name;
}

// Walks one JSON object, remembers which keys were read and rejects the rest.
class Section
{
public:
  Section(const json &node, std::string path) : node_(node), path_(std::move(path))
  {
    if (!node_.is_object())
    {
      throw ConfigError(path_.empty() ? "<root>" : path_,
                        "'" + (path_.empty() ? std::string("<root>") : path_) +
                            "' must be an object");
    }
  }

  std::string KeyPath(const std::string &key) const
  {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json *Find(const std::string &key)
  {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void Number(const std::string &key, double &out)
  {
    if (const json *v = Find(key))
    {
      out = AsNumber(*v, KeyPath(key));
    }
  }

  void Number(const std::string &key, std::optional<double> &out)
  {
    if (const json *v = Find(key); v && !v->is_null())
    {
      out = AsNumber(*v, KeyPath(key));
    }
  }

  template <typename Int>
  void Integer(const std::string &key, Int &out, long long lo)
  {
    if (const json *v = Find(key))
    {
      if (!v->is_number_integer())
      {
        throw ConfigError(KeyPath(key), "'" + KeyPath(key) + "' must be an integer");
      }
      const long long value = v->get<long long>();
      if (value < lo)
      {
        throw ConfigError(KeyPath(key), "'" + KeyPath(key) + "' must be >= " +
                                            std::to_string(lo) + ", got " +
                                            std::to_string(value));
      }
      out = static_cast<Int>(value);
    }
  }

  void Boolean(const std::string &key, bool &out)
  {
    if (const json *v = Find(key))
    {
      if (!v->is_boolean())
      {
        throw ConfigError(KeyPath(key), "'" + KeyPath(key) + "' must be true or false");
      }
      out = v->get<bool>();
    }
  }

  void String(const std::string &key, std::string &out)
  {
    if (const json *v = Find(key))
    {
      if (!v->is_string())
      {
        throw ConfigError(KeyPath(key), "'" + KeyPath(key) + "' must be a string");
      }
      out = v->get<std::string>();
    }
  }

  void Pair(const std::string &key, std::optional<std::pair<double, double>> &out)
  {
    const json *v = Find(key);
    if (!v || v->is_null())
    {
      return;
    }
    const std::string where = KeyPath(key);
    if (!v->is_array() || v->size() != 2)
    {
      throw ConfigError(where, "'" + where + "' must be a two-element array [lo, hi]");
    }
    const double lo = AsNumber((*v)[0], where + "[0]");
    const double hi = AsNumber((*v)[1], where + "[1]");
    if (!(lo < hi))
    {
      throw ConfigError(where, "'" + where + "' must satisfy lo < hi");
    }
    out = std::pair{lo, hi};
  }

  // Rejects every key that no reader asked for.
  void Finish() const
  {
    for (const auto &[key, value] : node_.items())
    {
      if (!seen_.contains(key))
      {
        throw ConfigError(KeyPath(key), "unknown key '" + KeyPath(key) + "'");
      }
    }
  }

  static double AsNumber(const json &v, const std::string &where)
  {
    if (!v.is_number())
    {
      throw ConfigError(where, "'" + where + "' must be a number");
    }
    const double value = v.get<double>();
    if (!std::isfinite(value))
    {
      throw ConfigError(where, "'" + where + "' must be finite");
    }
    return value;
  }

private:
  const json &node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::array<double, 3> ReadTriple(const json &v, const std::string &where)
{
  if (!v.is_array() || v.size() != 3)
  {
    throw ConfigError(where, "'" + where + "' must be a three-element array");
  }
  return {Section::AsNumber(v[0], where + "[0]"), Section::AsNumber(v[1], where + "[1]"),
          Section::AsNumber(v[2], where + "[2]")};
}

void ReadModel(Section &root, ModelParameters &p)
{
  const json *node = root.Find("model");
  if (!node)
  {
    return;
  }
  Section s(*node, "model");
  std::string variant(ToString(p.variant));
  s.String("variant", variant);
  try
  {
    p.variant = VariantFromString(variant);
  }
  catch (const InvalidParameter &e)
  {
    throw ConfigError("model.variant", e.what());
  }
  s.Number("length", p.length);
  s.Number("rho1", p.rho1);
  s.Number("rho2", p.rho2);
  s.Number("rho3", p.rho3);
  s.Number("rho4", p.rho4);
  s.Number("rho5", p.rho5);
  s.Number("kappa1", p.kappa1);
  s.Number("kappa2", p.kappa2);
  s.Number("b1", p.b1);
  s.Number("b2", p.b2);
  s.Number("j", p.vdw);
  s.Number("gamma1", p.gamma1);
  s.Number("gamma2", p.gamma2);
  s.Number("gamma3", p.gamma3);
  s.Number("delta", p.delta);
  s.Number("beta", p.betaThermal);
  s.Number("K", p.K);
  if (const json *e = s.Find("exponents"))
  {
    p.exponents = ReadTriple(*e, "model.exponents");
  }
  s.Finish();
}

void ReadGrid(Section &parent, const std::string &key, GridSpec &grid)
{
  const json *node = parent.Find(key);
  if (!node)
  {
    return;
  }
  const std::string where = parent.KeyPath(key);
  Section s(*node, where);
  s.Number("min", grid.min);
  s.Number("max", grid.max);
  s.Integer("count", grid.count, 1);
  s.Boolean("log", grid.logSpaced);
  s.Finish();
  if (!(grid.min > 0.0))
  {
    throw ConfigError(where + ".min", "'" + where + ".min' must be positive");
  }
  if (grid.max && !(*grid.max >= grid.min))
  {
    throw ConfigError(where + ".max", "'" + where + ".max' must be >= min");
  }
}

template <typename Reader>
void ReadBlock(Section &root, const std::string &key, Reader read)
{
  if (const json *node = root.Find(key))
  {
    Section s(*node, key);
    read(s);
    s.Finish();
  }
}

json GridJson(const GridSpec &g)
{
  json out = {{"min", g.min}, {"count", g.count}, {"log", g.logSpaced}};
  out["max"] = g.max ? json(*g.max) : json(nullptr);
  return out;
}

json PairJson(const std::optional<std::pair<double, double>> &p)
{
  return p ? json::array({p->first, p->second}) : json(nullptr);
}

}  // namespace

std::vector<double> GridSpec::Build(int modes, double length) const
{
  const double hi = max.value_or(ValidityLimit(modes, length));
  if (!(hi >= min))
  {
    throw ConfigError("grid.max", "grid upper end " + std::to_string(hi) +
                                      " lies below its lower end " + std::to_string(min));
  }
  return MakeGrid(min, hi, count, logSpaced);
}

ExperimentConfig ParseConfigJson(const json &document)
{
  ExperimentConfig cfg;
  Section root(document, "");
  ReadModel(root, cfg.model);
  root.Integer("modes", cfg.modes, 1);
  root.Integer("seed", cfg.seed, 0);
  root.Integer("workers", cfg.workers, 1);
  root.Integer("probe_modes", cfg.probeModes, 0);
  if (const json *v = root.Find("output"); v && !v->is_null())
  {
    if (!v->is_string())
    {
      throw ConfigError("output", "'output' must be a string");
    }
    cfg.output = v->get<std::string>();
  }

  ReadBlock(root, "check",
            [&](Section &s)
            {
              s.Integer("states", cfg.check.states, 1);
              s.Number("tolerance", cfg.check.tolerance);
            });
  ReadBlock(root, "simulate",
            [&](Section &s)
            {
              s.Number("t_end", cfg.simulate.tEnd);
              s.Integer("samples", cfg.simulate.samples, 2);
              s.Pair("fit_window", cfg.simulate.fitWindow);
              s.String("initial", cfg.simulate.initial);
              s.Integer("snapshot_stride", cfg.simulate.snapshotStride, 0);
              s.Number("fallback_step", cfg.simulate.fallbackStep);
              if (cfg.simulate.initial != "default" && cfg.simulate.initial != "random")
              {
                throw ConfigError("simulate.initial",
                                  "'simulate.initial' must be \"default\" or \"random\"");
              }
              if (!(cfg.simulate.tEnd > 0.0))
              {
                throw ConfigError("simulate.t_end", "'simulate.t_end' must be positive");
              }
              if (!(cfg.simulate.fallbackStep > 0.0))
              {
                throw ConfigError("simulate.fallback_step",
                                  "'simulate.fallback_step' must be positive");
              }
            });
  ReadBlock(root, "spectrum", [](Section &) {});
  ReadBlock(root, "resolvent",
            [&](Section &s)
            {
              ReadGrid(s, "grid", cfg.resolvent.grid);
              s.Integer("probes", cfg.resolvent.probes, 0);
              s.Number("residual_tolerance", cfg.resolvent.residualTolerance);
            });
  ReadBlock(root, "gevrey",
            [&](Section &s)
            {
              ReadGrid(s, "grid", cfg.gevrey.grid);
              s.Pair("window", cfg.gevrey.window);
              s.Number("tolerance", cfg.gevrey.tolerance);
            });
  ReadBlock(root, "audit",
            [&](Section &s)
            {
              ReadGrid(s, "grid", cfg.audit.grid);
              s.Integer("trials", cfg.audit.trials, 1);
              s.Number("ceiling", cfg.audit.ceiling);
            });
  ReadBlock(root, "sweep",
            [&](Section &s)
            {
              if (const json *list = s.Find("exponents"))
              {
                if (!list->is_array())
                {
                  throw ConfigError("sweep.exponents", "'sweep.exponents' must be an array");
                }
                cfg.sweep.exponents.clear();
                for (std::size_t i = 0; i < list->size(); i++)
                {
                  cfg.sweep.exponents.push_back(
                      ReadTriple((*list)[i], "sweep.exponents[" + std::to_string(i) + "]"));
                }
              }
              s.Boolean("corners", cfg.sweep.corners);
              s.Integer("random", cfg.sweep.random, 0);
              s.Number("random_min", cfg.sweep.randomMin);
              if (!(cfg.sweep.randomMin >= 0.0 && cfg.sweep.randomMin <= 1.0))
              {
                throw ConfigError("sweep.random_min", "'sweep.random_min' must lie in [0, 1]");
              }
            });
  root.Finish();

  try
  {
    cfg.model.Validate();
  }
  catch (const InvalidParameter &e)
  {
    throw ConfigError("model." + ConfigKeyForParameter(e.Name()),
                      "model." + ConfigKeyForParameter(e.Name()) + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig ParseConfigText(const std::string &text)
{
  json document;
  try
  {
    document = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError("<syntax>", std::string("malformed configuration: ") + e.what());
  }
  return ParseConfigJson(document);
}

ExperimentConfig ParseConfig(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ConfigError("<file>", "cannot open configuration file '" + path.string() + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfigText(text.str());
}

nlohmann::json ExperimentConfig::ToJson() const
{
  const ModelParameters &p = model;
  json out;
  out["model"] = {{"variant", std::string(ToString(p.variant))},
                  {"length", p.length},
                  {"rho1", p.rho1},
                  {"rho2", p.rho2},
                  {"rho3", p.rho3},
                  {"rho4", p.rho4},
                  {"rho5", p.rho5},
                  {"kappa1", p.kappa1},
                  {"kappa2", p.kappa2},
                  {"b1", p.b1},
                  {"b2", p.b2},
                  {"j", p.vdw},
                  {"gamma1", p.gamma1},
                  {"gamma2", p.gamma2},
                  {"gamma3", p.gamma3},
                  {"delta", p.delta},
                  {"beta", p.betaThermal},
                  {"K", p.K},
                  {"exponents", p.exponents}};
  out["modes"] = modes;
  out["seed"] = seed;
  out["workers"] = workers;
  out["probe_modes"] = probeModes;
  out["output"] = output ? json(*output) : json(nullptr);
  out["check"] = {{"states", check.states}, {"tolerance", check.tolerance}};
  out["simulate"] = {{"t_end", simulate.tEnd},
                     {"samples", simulate.samples},
                     {"fit_window", PairJson(simulate.fitWindow)},
                     {"initial", simulate.initial},
                     {"snapshot_stride", simulate.snapshotStride},
                     {"fallback_step", simulate.fallbackStep}};
  out["spectrum"] = json::object();
  out["resolvent"] = {{"grid", GridJson(resolvent.grid)},
                      {"probes", resolvent.probes},
                      {"residual_tolerance", resolvent.residualTolerance}};
  out["gevrey"] = {{"grid", GridJson(gevrey.grid)},
                   {"window", PairJson(gevrey.window)},
                   {"tolerance", gevrey.tolerance}};
  out["audit"] = {
      {"grid", GridJson(audit.grid)}, {"trials", audit.trials}, {"ceiling", audit.ceiling}};
  out["sweep"] = {{"exponents", sweep.exponents},
                  {"corners", sweep.corners},
                  {"random", sweep.random},
                  {"random_min", sweep.randomMin}};
  return out;
}

}  // namespace semibeam
