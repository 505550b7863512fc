// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>
#include <unsupported/Eigen/MatrixFunctions>
#include "fixtures.hpp"
#include "semibeam/assembly.hpp"
#include "semibeam/dynamics.hpp"

using namespace semibeam;

namespace
{

std::vector<double> Linspace(double a, double b, int n)
{
  std::vector<double> t(n);
  for (int i = 0; i < n; i++)
  {
    t[i] = a + (b - a) * i / (n - 1);
  }
  return t;
}

}  // namespace

TEST_CASE("exact propagator matches the Pade matrix exponential")
{
  std::mt19937_64 rng(61);
  for (Variant variant : {Variant::System01, Variant::System02})
  {
    const ModelParameters p = fixture::RandomParameters(rng, variant);
    const int N = 4;
    const GeneratorMatrix gen = AssembleGenerator(p, N);
    const EnergyGram gram = AssembleGram(p, N);
    const ExactPropagator prop(gen, gram);
    REQUIRE(prop.Reliable());
    const StateVector U0 = RandomState(N, p.length, rng, N);
    for (double t : {0.3, 1.7})
    {
      const Eigen::MatrixXd E = (t * gen.entries).exp();
      const Eigen::VectorXd reference = E * U0.Data();
      CHECK((prop.Propagate(U0, t).Data() - reference).norm() < 1e-9 * U0.Data().norm());
    }
  }
}

TEST_CASE("semigroup property")
{
  std::mt19937_64 rng(67);
  const ModelParameters p = fixture::RandomParameters(rng, Variant::System02);
  const int N = 8;
  const GeneratorMatrix gen = AssembleGenerator(p, N);
  const EnergyGram gram = AssembleGram(p, N);
  const ExactPropagator prop(gen, gram);
  const StateVector U0 = RandomState(N, p.length, rng, N);
  const StateVector direct = prop.Propagate(U0, 1.25);
  const StateVector composed = prop.Propagate(prop.Propagate(U0, 0.5), 0.75);
  CHECK(gram.Norm(StateVector(N, p.length, direct.Data() - composed.Data())) <
        1e-9 * gram.Norm(U0));
  CHECK(prop.Propagate(U0, 0.0).Data() == U0.Data());
}

TEST_CASE("decoupled temperature mode decays at its diffusion rate")
{
  ModelParameters p = fixture::Defaults(Variant::System02);
  p.delta = 0.0;
  p.K = 0.7;
  p.rho5 = 2.0;
  const int N = 5;
  const GeneratorMatrix gen = AssembleGenerator(p, N);
  const EnergyGram gram = AssembleGram(p, N);
  StateVector U0(N, p.length);
  U0.Block(Field::Theta)(2) = 1.0;
  const double rate = p.K / p.rho5 * 9.0;
  const StateVector U = ExactPropagator(gen, gram).Propagate(U0, 0.8);
  CHECK(U.Block(Field::Theta)(2) == doctest::Approx(std::exp(-rate * 0.8)).epsilon(1e-10));

  // Single midpoint step: the Cayley factor of the scalar rate.
  const double dt = 0.05;
  const StateVector step = StepImplicitMidpoint(gen, U0, dt);
  const double cayley = (1.0 - 0.5 * dt * rate) / (1.0 + 0.5 * dt * rate);
  CHECK(step.Block(Field::Theta)(2) == doctest::Approx(cayley).epsilon(1e-14));
  CHECK(step.Data().norm() == doctest::Approx(std::abs(cayley)).epsilon(1e-14));
}

TEST_CASE("midpoint integration converges to the exact flow")
{
  std::mt19937_64 rng(71);
  for (Variant variant : {Variant::System01, Variant::System02})
  {
    const ModelParameters p = fixture::Defaults(variant, {0.5, 0.5, 0.5});
    const int N = 8;
    const GeneratorMatrix gen = AssembleGenerator(p, N);
    const EnergyGram gram = AssembleGram(p, N);
    const StateVector U0 = RandomState(N, p.length, rng, N);
    const MidpointStepper stepper(gen, 1e-4);
    StateVector U = U0;
    for (int i = 0; i < 10000; i++)
    {
      U = stepper.Advance(U);
    }
    const StateVector exact = ExactPropagator(gen, gram).Propagate(U0, 1.0);
    const double err = gram.Norm(StateVector(N, p.length, U.Data() - exact.Data()));
    CHECK(err < 1e-6 * gram.Norm(U0));
  }
}

TEST_CASE("midpoint preserves the energy of the conservative system")
{
  ModelParameters p = fixture::Defaults(Variant::System02);
  p.gamma1 = p.gamma2 = p.gamma3 = 0.0;
  p.delta = 0.0;
  const int N = 12;
  const GeneratorMatrix gen = AssembleGenerator(p, N);
  const EnergyGram gram = AssembleGram(p, N);
  std::mt19937_64 rng(73);
  StateVector U = RandomState(N, p.length, rng, N);
  U.Block(Field::Theta).setZero();
  const double e0 = Energy(gram, U);
  const MidpointStepper stepper(gen, 0.01);
  double worst = 0.0;
  for (int i = 0; i < 200; i++)
  {
    const StateVector next = stepper.Advance(U);
    worst = std::max(worst, std::abs(Energy(gram, next) - Energy(gram, U)) / e0);
    U = next;
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("energy is nonincreasing along damped trajectories")
{
  std::mt19937_64 rng(79);
  for (Variant variant : {Variant::System01, Variant::System02})
  {
    const ModelParameters p = fixture::RandomParameters(rng, variant);
    const int N = 10;
    const GeneratorMatrix gen = AssembleGenerator(p, N);
    const EnergyGram gram = AssembleGram(p, N);
    const auto times = Linspace(0.0, 5.0, 101);
    const TrajectoryRecord traj =
        PropagateExact(gen, gram, RandomState(N, p.length, rng, N), times);
    CHECK_FALSE(traj.usedFallback);
    for (std::size_t k = 1; k < times.size(); k++)
    {
      CHECK(traj.energies[k] <= traj.energies[k - 1] * (1.0 + 1e-10));
      CHECK(traj.dissipations[k] <= 0.0);
    }
  }
}

TEST_CASE("decay fit on a synthetic exponential")
{
  TrajectoryRecord traj;
  traj.times = Linspace(0.0, 10.0, 101);
  for (double t : traj.times)
  {
    traj.energies.push_back(3.0 * std::exp(-2.0 * t));
  }
  const DecayFit fit = FitDecayRate(traj, {2.0, 8.0});
  CHECK(fit.omega == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.rSquared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.samples == 61);
  CHECK(std::isnan(fit.spectralAbscissa));

  CHECK_THROWS_AS(FitDecayRate(traj, {2.0, 2.5}), std::invalid_argument);
}

TEST_CASE("decay rate of the undamped-exponent system approaches the spectral abscissa")
{
  const ModelParameters p = fixture::Defaults(Variant::System01, {0.0, 0.0, 0.0});
  const int N = 16;
  const GeneratorMatrix gen = AssembleGenerator(p, N);
  const EnergyGram gram = AssembleGram(p, N);
  const auto times = Linspace(0.0, 80.0, 801);
  const TrajectoryRecord traj =
      PropagateExact(gen, gram, DefaultInitialState(N, p.length), times);
  const DecayFit fit = FitDecayRate(traj, {20.0, 80.0}, gen);
  CHECK(fit.spectralAbscissa < 0.0);
  CHECK(std::abs(fit.omega + fit.spectralAbscissa) < 0.1 * std::abs(fit.spectralAbscissa));
}

TEST_CASE("propagation input errors")
{
  const ModelParameters p = fixture::Defaults(Variant::System02);
  const GeneratorMatrix gen = AssembleGenerator(p, 3);
  const EnergyGram gram = AssembleGram(p, 3);
  const StateVector U0 = DefaultInitialState(3, p.length);
  const std::vector<double> late = {0.5, 1.0};
  const std::vector<double> repeated = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(PropagateExact(gen, gram, U0, late), std::invalid_argument);
  CHECK_THROWS_AS(PropagateExact(gen, gram, U0, repeated), std::invalid_argument);
  CHECK_THROWS_AS(MidpointStepper(gen, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ExactPropagator(gen, gram).Propagate(DefaultInitialState(4, p.length), 1.0),
                  std::invalid_argument);

  const std::vector<double> times = {0.0, 0.1, 0.2, 0.3};
  const TrajectoryRecord traj = PropagateExact(gen, gram, U0, times, {2, 1e-4});
  REQUIRE(traj.snapshots.size() == 2);
  CHECK(traj.snapshots[1].first == 2);
  CHECK(DefaultInitialState(3, p.length).Block(Field::Y)(2) == doctest::Approx(1.0 / 9.0));
}
