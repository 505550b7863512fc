// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_DYNAMICS_HPP
#define SEMIBEAM_DYNAMICS_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>
#include <Eigen/Dense>
#include "semibeam/assembly.hpp"

namespace semibeam
{

// Half the energy quadratic form.
double Energy(const EnergyGram &gram, const StateVector &state);
double Energy(const ModelParameters &params, const StateVector &state);

// Eigenvalues of the truncated generator, unordered.
Eigen::VectorXcd GeneratorEigenvalues(const GeneratorMatrix &gen);

// Largest real part of the generator spectrum.
double SpectralAbscissa(const GeneratorMatrix &gen);

// One implicit midpoint (Crank-Nicolson) step: (I - dt/2 B) U+ = (I + dt/2 B) U. The step is
// exactly norm preserving in the energy metric when B is skew there.
StateVector StepImplicitMidpoint(const GeneratorMatrix &gen, const StateVector &state, double dt);

// Repeated midpoint steps with a cached factorization.
class MidpointStepper
{
public:
  MidpointStepper(const GeneratorMatrix &gen, double dt);

  double Step() const { return dt_; }
  StateVector Advance(const StateVector &state) const;

private:
  int modes_;
  double dt_;
  Eigen::MatrixXd explicit_;
  Eigen::PartialPivLU<Eigen::MatrixXd> implicit_;
};

// exp(t B) through the eigendecomposition of the generator in energy-orthonormal
// coordinates, x = L^T U. Defective or nearly defective spectra are detected through the
// condition number of the eigenvector matrix.
class ExactPropagator
{
public:
  static constexpr double kConditionLimit = 1e12;

  ExactPropagator(const GeneratorMatrix &gen, const EnergyGram &gram);

  bool Reliable() const { return condition_ <= kConditionLimit; }
  double Condition() const { return condition_; }
  const Eigen::VectorXcd &Eigenvalues() const { return values_; }

  StateVector Propagate(const StateVector &initial, double t) const;

private:
  int modes_;
  double length_;
  Eigen::MatrixXd lower_;
  Eigen::VectorXcd values_;
  Eigen::MatrixXcd vectors_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> vectors_lu_;
  double condition_;
};

struct TrajectoryRecord
{
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> dissipations;
  // (sample index, state) pairs for the retained snapshots.
  std::vector<std::pair<std::size_t, StateVector>> snapshots;
  ModelParameters params;
  int modes = 0;
  bool usedFallback = false;
  double eigenvectorCondition = 0.0;
  double fallbackStep = 0.0;
};

struct PropagationOptions
{
  // Keep every k-th state as a snapshot; 0 keeps none.
  std::size_t snapshotStride = 0;
  // Midpoint step used when the eigenbasis is too ill-conditioned.
  double fallbackStep = 1e-4;
};

// Samples U(t) = exp(t B) U0 on the given increasing time grid starting at 0.
TrajectoryRecord PropagateExact(const GeneratorMatrix &gen, const EnergyGram &gram,
                                const StateVector &initial, std::span<const double> times,
                                const PropagationOptions &options = {});

struct DecayFit
{
  double omega = 0.0;  // E(t) ~ E0 exp(-2 omega t)
  double rSquared = 0.0;
  std::pair<double, double> window;
  double spectralAbscissa = 0.0;
  std::size_t samples = 0;
};

// Least-squares slope of log E over the samples with t in [window.first, window.second] and
// E > 1e-300. Requires at least 10 such samples. spectralAbscissa is left NaN unless a
// generator is supplied.
DecayFit FitDecayRate(const TrajectoryRecord &traj, std::pair<double, double> window);
DecayFit FitDecayRate(const TrajectoryRecord &traj, std::pair<double, double> window,
                      const GeneratorMatrix &gen);

// Smooth generic initial datum: coefficient 1/n^2 on phi and y, zero elsewhere.
StateVector DefaultInitialState(int modes, double length);

}  // namespace semibeam

#endif  // SEMIBEAM_DYNAMICS_HPP
