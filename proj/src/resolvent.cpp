// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/resolvent.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>
#include "semibeam/linalg.hpp"
#include "semibeam/spectral.hpp"

namespace semibeam
{

using cd = std::complex<double>;

NearSingularResolvent::NearSingularResolvent(double lambda, double condition)
  : std::runtime_error("resolvent at lambda = " + std::to_string(lambda) +
                       " is numerically singular (condition ~ " + std::to_string(condition) +
                       "); i lambda is at an eigenvalue of the truncation"),
    lambda_(lambda), condition_(condition)
{
}

namespace
{

Eigen::MatrixXcd ShiftedOperator(const Eigen::MatrixXd &B, double lambda)
{
  Eigen::MatrixXcd M = -B.cast<cd>();
  M.diagonal().array() += cd(0.0, lambda);
  return M;
}

Eigen::PartialPivLU<Eigen::MatrixXcd> FactorShifted(const GeneratorMatrix &gen, double lambda)
{
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ShiftedOperator(gen.entries, lambda));
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / kNearSingularCondition))
  {
    throw NearSingularResolvent(lambda, rcond > 0.0 ? 1.0 / rcond
                                                    : std::numeric_limits<double>::infinity());
  }
  return lu;
}

}  // namespace

ComplexStateVector ResolventSolve(const GeneratorMatrix &gen, double lambda,
                                  const ComplexStateVector &F)
{
  if (F.Modes() != gen.modes)
  {
    throw std::invalid_argument("right-hand side dimension does not match the generator");
  }
  if (F.Data().isZero(0.0))
  {
    return ComplexStateVector(gen.modes, F.Length());
  }
  const auto lu = FactorShifted(gen, lambda);
  return ComplexStateVector(gen.modes, F.Length(), lu.solve(F.Data()));
}

double ResolventNorm(const Eigen::MatrixXd &metricGenerator, double lambda)
{
  const Eigen::VectorXd s = linalg::SingularValues(ShiftedOperator(metricGenerator, lambda));
  const double smallest = s(s.size() - 1);
  if (!(smallest > s(0) / kNearSingularCondition))
  {
    throw NearSingularResolvent(lambda, smallest > 0.0 ? s(0) / smallest
                                                       : std::numeric_limits<double>::infinity());
  }
  return 1.0 / smallest;
}

double ResolventNorm(const GeneratorMatrix &gen, const EnergyGram &gram, double lambda)
{
  return ResolventNorm(MetricGenerator(gen, gram), lambda);
}

std::vector<ResolventSample> Sweep(const GeneratorMatrix &gen, const EnergyGram &gram,
                                   std::span<const double> grid, const SweepOptions &options)
{
  const Eigen::MatrixXd metric = MetricGenerator(gen, gram);
  const int support = options.probeModes > 0 ? options.probeModes : gen.modes;

  // Probes are drawn once, up front, so that the result is independent of scheduling.
  std::mt19937_64 rng(options.seed);
  std::vector<ComplexStateVector> probes;
  for (int k = 0; k < options.probes; k++)
  {
    probes.push_back(RandomComplexState(gen.modes, gen.params.length, rng, support));
  }

  std::vector<ResolventSample> samples(grid.size());
  auto evaluate = [&](std::size_t i)
  {
    ResolventSample &sample = samples[i];
    sample.lambda = grid[i];
    try
    {
      sample.normEnergy = ResolventNorm(metric, grid[i]);
      const auto lu = FactorShifted(gen, grid[i]);
      const Eigen::MatrixXcd M = ShiftedOperator(gen.entries, grid[i]);
      for (const auto &F : probes)
      {
        const Eigen::VectorXcd U = lu.solve(F.Data());
        const ComplexStateVector r(gen.modes, F.Length(), M * U - F.Data());
        sample.residual = std::max(sample.residual, gram.Norm(r) / gram.Norm(F));
      }
    }
    catch (const std::exception &e)
    {
      sample.normEnergy = std::numeric_limits<double>::infinity();
      sample.error = e.what();
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(grid.size())));
  if (workers == 1)
  {
    for (std::size_t i = 0; i < grid.size(); i++)
    {
      evaluate(i);
    }
    return samples;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; w++)
  {
    pool.emplace_back(
        [&]
        {
          for (std::size_t i = next++; i < grid.size(); i = next++)
          {
            evaluate(i);
          }
        });
  }
  pool.clear();
  return samples;
}

double ValidityLimit(int modes, double length)
{
  return Eigenvalue(std::max(1, modes / 2), length);
}

std::vector<double> MakeGrid(double lo, double hi, int count, bool logSpaced)
{
  if (count < 1 || !(hi >= lo) || (logSpaced && !(lo > 0.0)))
  {
    throw std::invalid_argument("invalid grid specification");
  }
  std::vector<double> grid(count);
  for (int i = 0; i < count; i++)
  {
    const double f = count == 1 ? 0.0 : double(i) / (count - 1);
    grid[i] = logSpaced ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)))
                        : lo + f * (hi - lo);
  }
  grid.front() = lo;
  grid.back() = count == 1 ? lo : hi;
  return grid;
}

ExponentFit FitExponent(std::span<const ResolventSample> samples,
                        std::pair<double, double> window, double target, double tolerance)
{
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  std::size_t count = 0;
  for (const auto &s : samples)
  {
    if (s.error || s.lambda < window.first || s.lambda > window.second ||
        !(s.normEnergy > 0.0) || !std::isfinite(s.normEnergy))
    {
      continue;
    }
    const double x = std::log(s.lambda);
    const double y = -std::log(s.normEnergy);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    count++;
  }
  if (count < 8)
  {
    throw std::invalid_argument("exponent fit needs at least 8 samples in the window, found " +
                                std::to_string(count));
  }
  const double n = static_cast<double>(count);
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cov = sxy - sx * sy / n;
  if (!(vx > 0.0))
  {
    throw std::invalid_argument("exponent fit window has no frequency spread");
  }

  ExponentFit fit;
  fit.window = window;
  fit.slope = cov / vx;
  fit.rSquared = vy > 0.0 ? std::clamp(cov * cov / (vx * vy), 0.0, 1.0) : 1.0;
  fit.target = target;
  fit.tolerance = tolerance;
  fit.samples = count;
  fit.pass = fit.slope >= target - tolerance;
  return fit;
}

double GevreyTarget(const std::array<double, 3> &exponents)
{
  for (double e : exponents)
  {
    if (!(e >= 0.0 && e <= 1.0))
    {
      throw std::invalid_argument("damping exponents must lie in [0, 1]");
    }
  }
  const double phi = *std::min_element(exponents.begin(), exponents.end());
  return 2.0 * phi / (1.0 + phi);
}

double RegularityTarget(const std::array<double, 3> &exponents)
{
  const double gevrey = GevreyTarget(exponents);
  const bool analytic =
      std::all_of(exponents.begin(), exponents.end(), [](double e) { return e >= 0.5; });
  return analytic ? 1.0 : gevrey;
}

bool AuditReport::AnyFlagged() const
{
  return std::any_of(items.begin(), items.end(), [](const AuditItem &i) { return i.flagged; });
}

namespace
{

// Norms of pieces of a complex state, in L^2(0, l) of the coefficients.
class Pieces
{
public:
  Pieces(const ModelParameters &p, const ComplexStateVector &U)
    : p_(p), U_(U), mu_(FractionalPowerDiag(U.Modes(), U.Length(), 1.0)),
      D_(DerivativeMatrix(U.Modes(), U.Length()))
  {
  }

  double Sq(Field f) const { return U_.Block(f).squaredNorm(); }

  // ||A^sigma x||^2
  double PowerSq(Field f, double sigma) const
  {
    const Eigen::VectorXd w = FractionalPowerDiag(U_.Modes(), U_.Length(), 2.0 * sigma);
    return (w.array() * U_.Block(f).array().abs2()).sum();
  }

  double DifferenceSq(Field a, Field b) const
  {
    return (U_.Block(a) - U_.Block(b)).squaredNorm();
  }

  // ||x_x - y||^2 = ||A^(1/2) x||^2 - 2 Re <x_x, y> + ||y||^2
  double ShearSq(Field x, Field y) const
  {
    const Eigen::VectorXcd xd = D_.cast<cd>() * U_.Block(x);
    const double cross = U_.Block(y).dot(xd).real();
    return std::max(0.0, (mu_.array() * U_.Block(x).array().abs2()).sum() - 2.0 * cross + Sq(y));
  }

  const ModelParameters &P() const { return p_; }

private:
  const ModelParameters &p_;
  const ComplexStateVector &U_;
  Eigen::VectorXd mu_;
  Eigen::MatrixXd D_;
};

struct Estimate
{
  const char *label;
  const char *quantity;
  std::function<bool(const std::array<double, 3> &)> hypothesis;
  std::function<double(const Pieces &, double lambda)> lhs;
};

bool Always(const std::array<double, 3> &) { return true; }

std::vector<Estimate> Estimates(Variant variant)
{
  const double kHalf = 0.5;
  std::vector<Estimate> list;
  if (variant == Variant::System01)
  {
    list.push_back({"dissipation", "g1|A^(t1/2)u|^2+g2|A^(t2/2)s|^2+g3|A^(t3/2)w|^2+(dK/b)|A theta|^2",
                    Always, [](const Pieces &q, double)
                    {
                      const auto &p = q.P();
                      return p.gamma1 * q.PowerSq(Field::U, p.exponents[0] / 2) +
                             p.gamma2 * q.PowerSq(Field::S, p.exponents[1] / 2) +
                             p.gamma3 * q.PowerSq(Field::W, p.exponents[2] / 2) +
                             p.delta * p.K / p.betaThermal * q.PowerSq(Field::Theta, 1.0);
                    }});
    list.push_back({"v-energy", "|v|^2", Always,
                    [](const Pieces &q, double) { return q.Sq(Field::V); }});
  }
  else
  {
    list.push_back({"dissipation", "g1|A^(b1/2)u|^2+g2|A^(b2/2)s|^2+g3|A^(b3/2)w|^2+K|A^(1/2)theta|^2",
                    Always, [](const Pieces &q, double)
                    {
                      const auto &p = q.P();
                      return p.gamma1 * q.PowerSq(Field::U, p.exponents[0] / 2) +
                             p.gamma2 * q.PowerSq(Field::S, p.exponents[1] / 2) +
                             p.gamma3 * q.PowerSq(Field::W, p.exponents[2] / 2) +
                             p.K * q.PowerSq(Field::Theta, 0.5);
                    }});
    list.push_back({"v-energy", "|v|^2", Always,
                    [](const Pieces &q, double) { return q.Sq(Field::V); }});
  }
  const bool first = variant == Variant::System01;
  list.push_back({"tube-gap", "|lambda||y-phi|^2", Always,
                  [](const Pieces &q, double l)
                  { return std::abs(l) * q.DifferenceSq(Field::Y, Field::Varphi); }});
  list.push_back({"inner-potential", "k1|phi_x-psi|^2+b1|A^(1/2)psi|^2",
                  Always, [](const Pieces &q, double)
                  {
                    return q.P().kappa1 * q.ShearSq(Field::Varphi, Field::Psi) +
                           q.P().b1 * q.PowerSq(Field::Psi, 0.5);
                  }});
  list.push_back({"outer-potential", "k2|y_x-z|^2+b2|A^(1/2)z|^2", Always,
                  [](const Pieces &q, double)
                  {
                    return q.P().kappa2 * q.ShearSq(Field::Y, Field::Z) +
                           q.P().b2 * q.PowerSq(Field::Z, 0.5);
                  }});
  if (first)
  {
    return list;
  }

  auto first_half = [kHalf](const std::array<double, 3> &e) { return e[0] >= kHalf; };
  auto second_half = [kHalf](const std::array<double, 3> &e) { return e[1] >= kHalf; };
  auto outer_half = [kHalf](const std::array<double, 3> &e)
  { return e[1] >= kHalf && e[2] >= kHalf; };

  list.push_back({"v-h1", "|A^(1/2)v|^2", Always,
                  [](const Pieces &q, double) { return q.PowerSq(Field::V, 0.5); }});
  list.push_back({"theta-lambda", "|lambda||theta|^2", Always,
                  [](const Pieces &q, double l) { return std::abs(l) * q.Sq(Field::Theta); }});
  list.push_back({"u-lambda", "|lambda||u|^2", first_half,
                  [](const Pieces &q, double l) { return std::abs(l) * q.Sq(Field::U); }});
  list.push_back({"s-lambda", "|lambda||s|^2", second_half,
                  [](const Pieces &q, double l) { return std::abs(l) * q.Sq(Field::S); }});
  list.push_back({"inner-shear-lambda", "|lambda||phi_x-psi|^2", first_half,
                  [](const Pieces &q, double l)
                  { return std::abs(l) * q.ShearSq(Field::Varphi, Field::Psi); }});
  list.push_back({"outer-shear-lambda", "|lambda||y_x-z|^2", second_half,
                  [](const Pieces &q, double l)
                  { return std::abs(l) * q.ShearSq(Field::Y, Field::Z); }});
  list.push_back({"v-lambda", "|lambda||v|^2", Always,
                  [](const Pieces &q, double l) { return std::abs(l) * q.Sq(Field::V); }});
  list.push_back({"psi-h1-lambda", "|lambda||A^(1/2)psi|^2", Always,
                  [](const Pieces &q, double l)
                  { return std::abs(l) * q.PowerSq(Field::Psi, 0.5); }});
  list.push_back({"w-lambda", "|lambda||w|^2", outer_half,
                  [](const Pieces &q, double l) { return std::abs(l) * q.Sq(Field::W); }});
  list.push_back({"z-h1-lambda", "|lambda||A^(1/2)z|^2", outer_half,
                  [](const Pieces &q, double l)
                  { return std::abs(l) * q.PowerSq(Field::Z, 0.5); }});
  return list;
}

}  // namespace

AuditReport EstimateAudit(const ModelParameters &params, int modes, std::span<const double> grid,
                          const AuditOptions &options)
{
  if (options.trials < 1)
  {
    throw std::invalid_argument("audit needs at least one probe per frequency");
  }
  const int support = options.probeModes > 0 ? options.probeModes : modes;
  std::mt19937_64 rng(options.seed);
  std::vector<ComplexStateVector> probes;
  for (int k = 0; k < options.trials; k++)
  {
    probes.push_back(RandomComplexState(modes, params.length, rng, support));
  }
  return EstimateAudit(params, modes, grid, probes, options.ceiling);
}

AuditReport EstimateAudit(const ModelParameters &params, int modes, std::span<const double> grid,
                          std::span<const ComplexStateVector> probes, double ceiling)
{
  const GeneratorMatrix gen = AssembleGenerator(params, modes);
  const EnergyGram gram = AssembleGram(params, modes);
  const auto estimates = Estimates(params.variant);

  AuditReport report{params.variant, modes, {}};
  for (const auto &e : estimates)
  {
    report.items.push_back({e.label, e.quantity, e.hypothesis(params.exponents), 0.0, 0.0, false});
  }

  for (double lambda : grid)
  {
    const auto lu = FactorShifted(gen, lambda);
    for (const auto &F : probes)
    {
      if (F.Modes() != modes)
      {
        throw std::invalid_argument("audit probe dimension does not match the truncation");
      }
      // A zero right-hand side has the zero solution; every ratio is 0 / 0 := 0.
      const double normF = gram.Norm(F);
      if (normF == 0.0)
      {
        continue;
      }
      const ComplexStateVector U(modes, params.length, lu.solve(F.Data()));
      const double normU = gram.Norm(U);
      const Pieces pieces(params, U);
      for (std::size_t i = 0; i < estimates.size(); i++)
      {
        AuditItem &item = report.items[i];
        if (!item.hypothesisMet)
        {
          continue;
        }
        const double ratio = estimates[i].lhs(pieces, lambda) / (normF * normU);
        if (ratio > item.maxRatio || !std::isfinite(ratio))
        {
          item.maxRatio = ratio;
          item.worstLambda = lambda;
        }
      }
    }
  }
  for (auto &item : report.items)
  {
    if (!item.hypothesisMet)
    {
      item.maxRatio = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    item.flagged = !std::isfinite(item.maxRatio) || item.maxRatio > ceiling;
  }
  return report;
}

}  // namespace semibeam
