// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include "semibeam/linalg.hpp"

namespace semibeam
{

double Energy(const EnergyGram &gram, const StateVector &state)
{
  if (state.Modes() != gram.Modes())
  {
    throw std::invalid_argument("state dimension mismatch in energy evaluation");
  }
  return 0.5 * gram.NormSquared(state);
}

double Energy(const ModelParameters &params, const StateVector &state)
{
  return Energy(AssembleGram(params, state.Modes()), state);
}

Eigen::VectorXcd GeneratorEigenvalues(const GeneratorMatrix &gen)
{
  Eigen::EigenSolver<Eigen::MatrixXd> solver(gen.entries, false);
  if (solver.info() != Eigen::Success)
  {
    throw NumericalFailure("eigenvalue iteration did not converge");
  }
  return solver.eigenvalues();
}

double SpectralAbscissa(const GeneratorMatrix &gen)
{
  return GeneratorEigenvalues(gen).real().maxCoeff();
}

MidpointStepper::MidpointStepper(const GeneratorMatrix &gen, double dt)
  : modes_(gen.modes), dt_(dt)
{
  if (!(dt > 0.0))
  {
    throw std::invalid_argument("midpoint step must be positive");
  }
  const Eigen::MatrixXd Id = Eigen::MatrixXd::Identity(gen.Size(), gen.Size());
  explicit_ = Id + 0.5 * dt * gen.entries;
  implicit_.compute(Id - 0.5 * dt * gen.entries);
  if (!(implicit_.rcond() > 1e-14))
  {
    throw NumericalFailure("midpoint step matrix is singular; the generator is not dissipative");
  }
}

StateVector MidpointStepper::Advance(const StateVector &state) const
{
  if (state.Modes() != modes_)
  {
    throw std::invalid_argument("state dimension mismatch in midpoint step");
  }
  return StateVector(modes_, state.Length(), implicit_.solve(explicit_ * state.Data()));
}

StateVector StepImplicitMidpoint(const GeneratorMatrix &gen, const StateVector &state, double dt)
{
  return MidpointStepper(gen, dt).Advance(state);
}

ExactPropagator::ExactPropagator(const GeneratorMatrix &gen, const EnergyGram &gram)
  : modes_(gen.modes), length_(gram.Length()), lower_(gram.Lower())
{
  const Eigen::MatrixXd metric = MetricGenerator(gen, gram);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(metric, true);
  if (solver.info() != Eigen::Success)
  {
    throw NumericalFailure("eigenvalue iteration did not converge");
  }
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
  condition_ = linalg::ConditionNumber(vectors_);
  vectors_lu_.compute(vectors_);
}

StateVector ExactPropagator::Propagate(const StateVector &initial, double t) const
{
  if (initial.Modes() != modes_)
  {
    throw std::invalid_argument("state dimension mismatch in propagation");
  }
  if (t == 0.0)
  {
    return initial;
  }
  const Eigen::VectorXcd x0 = (lower_.transpose() * initial.Data()).cast<std::complex<double>>();
  const Eigen::VectorXcd c = vectors_lu_.solve(x0);
  const Eigen::VectorXcd growth = (values_ * t).array().exp();
  const Eigen::VectorXd x = (vectors_ * (growth.array() * c.array()).matrix()).real();
  // U = L^-T x
  Eigen::VectorXd u = lower_.transpose().triangularView<Eigen::Upper>().solve(x);
  return StateVector(modes_, length_, std::move(u));
}

TrajectoryRecord PropagateExact(const GeneratorMatrix &gen, const EnergyGram &gram,
                                const StateVector &initial, std::span<const double> times,
                                const PropagationOptions &options)
{
  if (times.empty() || times.front() != 0.0)
  {
    throw std::invalid_argument("time grid must start at 0");
  }
  if (!std::is_sorted(times.begin(), times.end()) ||
      std::adjacent_find(times.begin(), times.end()) != times.end())
  {
    throw std::invalid_argument("time grid must be strictly increasing");
  }

  TrajectoryRecord record;
  record.params = gen.params;
  record.modes = gen.modes;
  record.times.assign(times.begin(), times.end());

  auto keep = [&](std::size_t k, const StateVector &state)
  {
    record.energies.push_back(Energy(gram, state));
    record.dissipations.push_back(DissipationRate(gen.params, state));
    if (options.snapshotStride > 0 && k % options.snapshotStride == 0)
    {
      record.snapshots.emplace_back(k, state);
    }
  };

  const ExactPropagator propagator(gen, gram);
  record.eigenvectorCondition = propagator.Condition();
  if (propagator.Reliable())
  {
    for (std::size_t k = 0; k < times.size(); k++)
    {
      keep(k, propagator.Propagate(initial, times[k]));
    }
    return record;
  }

  record.usedFallback = true;
  record.fallbackStep = options.fallbackStep;
  const MidpointStepper stepper(gen, options.fallbackStep);
  StateVector state = initial;
  double now = 0.0;
  keep(0, state);
  for (std::size_t k = 1; k < times.size(); k++)
  {
    // Whole steps up to the sample time, then one partial step to land on it.
    const double span = times[k] - now;
    const auto whole = static_cast<long>(std::floor(span / options.fallbackStep));
    for (long i = 0; i < whole; i++)
    {
      state = stepper.Advance(state);
    }
    const double rest = span - whole * options.fallbackStep;
    if (rest > 1e-14 * std::max(1.0, times[k]))
    {
      state = StepImplicitMidpoint(gen, state, rest);
    }
    now = times[k];
    keep(k, state);
  }
  return record;
}

DecayFit FitDecayRate(const TrajectoryRecord &traj, std::pair<double, double> window)
{
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0, syy = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < traj.times.size(); k++)
  {
    const double t = traj.times[k];
    const double e = traj.energies[k];
    if (t < window.first || t > window.second || !(e > 1e-300))
    {
      continue;
    }
    const double y = std::log(e);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
    syy += y * y;
    count++;
  }
  if (count < 10)
  {
    throw std::invalid_argument("decay fit needs at least 10 positive-energy samples in the "
                                "window, found " +
                                std::to_string(count));
  }
  const double n = static_cast<double>(count);
  const double vt = stt - st * st / n;
  const double vy = syy - sy * sy / n;
  const double cov = sty - st * sy / n;
  if (!(vt > 0.0))
  {
    throw std::invalid_argument("decay fit window has no time spread");
  }
  const double slope = cov / vt;

  DecayFit fit;
  fit.omega = -0.5 * slope;
  fit.rSquared = vy > 0.0 ? std::clamp(cov * cov / (vt * vy), 0.0, 1.0) : 1.0;
  fit.window = window;
  fit.samples = count;
  fit.spectralAbscissa = std::numeric_limits<double>::quiet_NaN();
  return fit;
}

DecayFit FitDecayRate(const TrajectoryRecord &traj, std::pair<double, double> window,
                      const GeneratorMatrix &gen)
{
  DecayFit fit = FitDecayRate(traj, window);
  fit.spectralAbscissa = SpectralAbscissa(gen);
  return fit;
}

StateVector DefaultInitialState(int modes, double length)
{
  StateVector state(modes, length);
  for (int n = 1; n <= modes; n++)
  {
    state.Block(Field::Varphi)(n - 1) = 1.0 / (double(n) * n);
    state.Block(Field::Y)(n - 1) = 1.0 / (double(n) * n);
  }
  return state;
}

}  // namespace semibeam
