// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_RESOLVENT_HPP
#define SEMIBEAM_RESOLVENT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>
#include <Eigen/Dense>
#include "semibeam/assembly.hpp"

namespace semibeam
{

// The solve (i lambda I - B) U = F is numerically singular: i lambda sits on (or within
// rounding of) the spectrum of the truncation.
class NearSingularResolvent : public std::runtime_error
{
public:
  NearSingularResolvent(double lambda, double condition);
  double Lambda() const { return lambda_; }
  double Condition() const { return condition_; }

private:
  double lambda_;
  double condition_;
};

inline constexpr double kNearSingularCondition = 1e14;

// U with (i lambda I - B) U = F. Throws NearSingularResolvent when the reciprocal condition
// estimate drops below 1 / kNearSingularCondition.
ComplexStateVector ResolventSolve(const GeneratorMatrix &gen, double lambda,
                                  const ComplexStateVector &F);

// ||(i lambda I - B)^-1|| in the energy metric, i.e. 1 / sigma_min(i lambda I - L^T B L^-T).
double ResolventNorm(const GeneratorMatrix &gen, const EnergyGram &gram, double lambda);
// Same, with the metric generator L^T B L^-T precomputed.
double ResolventNorm(const Eigen::MatrixXd &metricGenerator, double lambda);

struct ResolventSample
{
  double lambda = 0.0;
  double normEnergy = 0.0;
  // max over probes of ||(i lambda - B) U - F||_G / ||F||_G
  double residual = 0.0;
  std::optional<std::string> error;
};

struct SweepOptions
{
  int probes = 3;
  std::uint64_t seed = 1;
  // Probe support in modes per field; 0 means all modes.
  int probeModes = 0;
  unsigned workers = 1;
};

// One sample per grid point, returned in grid order. Per-sample failures are recorded in the
// sample and do not stop the sweep.
std::vector<ResolventSample> Sweep(const GeneratorMatrix &gen, const EnergyGram &gram,
                                   std::span<const double> grid, const SweepOptions &options = {});

// Upper end of the band in which a truncation with N modes is used for scaling fits:
// mu_floor(N/2).
double ValidityLimit(int modes, double length);

// n points in [lo, hi], logarithmically or linearly spaced. n = 1 returns {lo}.
std::vector<double> MakeGrid(double lo, double hi, int count, bool logSpaced);

struct ExponentFit
{
  std::pair<double, double> window;
  double slope = 0.0;  // p in ||R(i lambda)|| ~ C lambda^-p
  double rSquared = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

// Least-squares slope of -log ||R|| against log lambda over the samples inside the window.
// Requires at least 8 usable samples.
ExponentFit FitExponent(std::span<const ResolventSample> samples,
                        std::pair<double, double> window, double target, double tolerance);

// 2 phi / (1 + phi) with phi the smallest damping exponent.
double GevreyTarget(const std::array<double, 3> &exponents);

// Scaling exponent the regularity results predict for System02: 1 (analytic) when every
// exponent is at least 1/2, otherwise the Gevrey exponent.
double RegularityTarget(const std::array<double, 3> &exponents);

struct AuditItem
{
  std::string label;
  std::string quantity;
  // False when the exponent hypothesis of the estimate does not hold; such items are not
  // evaluated.
  bool hypothesisMet = true;
  double maxRatio = 0.0;  // max over lambda and probes of LHS / (||F||_G ||U||_G)
  double worstLambda = 0.0;
  bool flagged = false;
};

struct AuditOptions
{
  int trials = 20;
  std::uint64_t seed = 1;
  int probeModes = 0;
  double ceiling = 1e6;
};

struct AuditReport
{
  Variant variant;
  int modes = 0;
  std::vector<AuditItem> items;

  bool AnyFlagged() const;
};

// Evaluates the resolvent a priori estimates on random right-hand sides along the grid.
AuditReport EstimateAudit(const ModelParameters &params, int modes, std::span<const double> grid,
                          const AuditOptions &options);
// Same, with caller-supplied right-hand sides.
AuditReport EstimateAudit(const ModelParameters &params, int modes, std::span<const double> grid,
                          std::span<const ComplexStateVector> probes, double ceiling);

}  // namespace semibeam

#endif  // SEMIBEAM_RESOLVENT_HPP
