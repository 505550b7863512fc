// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>
#include "fixtures.hpp"
#include "oracles.hpp"
#include "semibeam/assembly.hpp"
#include "semibeam/spectral.hpp"

using namespace semibeam;

namespace
{

double RelativeMaxDiff(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b)
{
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("generator matches the quadrature Galerkin projection")
{
  std::mt19937_64 rng(17);
  for (Variant variant : {Variant::System01, Variant::System02})
  {
    for (int N = 1; N <= 4; N++)
    {
      const ModelParameters p = fixture::RandomParameters(rng, variant);
      const GeneratorMatrix gen = AssembleGenerator(p, N);
      CHECK(gen.Size() == 9 * N);
      CHECK(RelativeMaxDiff(gen.entries, oracle::Generator(p, N)) < 1e-11);
    }
  }
}

TEST_CASE("single-mode generator and Gram written out by hand")
{
  std::mt19937_64 rng(23);
  for (Variant variant : {Variant::System01, Variant::System02})
  {
    const ModelParameters p = fixture::RandomParameters(rng, variant);
    CHECK(RelativeMaxDiff(AssembleGenerator(p, 1).entries, oracle::HandGeneratorOneMode(p)) <
          1e-14);
    CHECK(RelativeMaxDiff(AssembleGram(p, 1).Entries(), oracle::HandGramOneMode(p)) < 1e-14);

    Eigen::EigenSolver<Eigen::MatrixXd> ours(AssembleGenerator(p, 1).entries, false);
    Eigen::EigenSolver<Eigen::MatrixXd> hand(oracle::HandGeneratorOneMode(p), false);
    auto sorted = [](Eigen::VectorXcd v)
    {
      std::sort(v.begin(), v.end(), [](auto a, auto b)
                { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
      return v;
    };
    CHECK((sorted(ours.eigenvalues()) - sorted(hand.eigenvalues())).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("Gram matrix reproduces the energy integral")
{
  std::mt19937_64 rng(31);
  for (Variant variant : {Variant::System01, Variant::System02})
  {
    const ModelParameters p = fixture::RandomParameters(rng, variant);
    const int N = 8;
    const EnergyGram gram = AssembleGram(p, N);
    for (int trial = 0; trial < 3; trial++)
    {
      const StateVector U = RandomState(N, p.length, rng, N);
      const double reference = oracle::EnergyNormSquared(p, U.Data());
      CHECK(gram.NormSquared(U) == doctest::Approx(reference).epsilon(1e-12));
      CHECK(gram.Inner(U, U) == doctest::Approx(reference).epsilon(1e-12));
    }
  }
}

TEST_CASE("Gram matrix examples")
{
  const ModelParameters p = fixture::Defaults(Variant::System02);
  const EnergyGram gram = AssembleGram(p, 4);
  StateVector psi(4, p.length);
  psi.Block(Field::Psi)(0) = 1.0;
  // b1 mu1 + k1 = 2
  CHECK(gram.NormSquared(psi) == doctest::Approx(2.0).epsilon(1e-15));

  StateVector theta(4, p.length);
  theta.Block(Field::Theta)(1) = 1.0;
  CHECK(gram.NormSquared(theta) == doctest::Approx(1.0).epsilon(1e-15));

  ModelParameters q = fixture::Defaults(Variant::System01);
  q.delta = 2.0;
  q.betaThermal = 4.0;
  // rho5 delta / beta mu2 = 0.5 * 4
  CHECK(AssembleGram(q, 4).NormSquared(theta) == doctest::Approx(2.0).epsilon(1e-15));

  const Eigen::MatrixXd &G = gram.Entries();
  CHECK((G - G.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Gram matrix is positive definite")
{
  std::mt19937_64 rng(37);
  for (Variant variant : {Variant::System01, Variant::System02})
  {
    for (int N : {4, 16, 32})
    {
      const ModelParameters p = fixture::RandomParameters(rng, variant);
      const EnergyGram gram = AssembleGram(p, N);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram.Entries(), Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
      const Eigen::MatrixXd &L = gram.Lower();
      CHECK(RelativeMaxDiff(L * L.transpose(), gram.Entries()) < 1e-13);
    }
  }
}

TEST_CASE("dissipation identity and dissipativity")
{
  std::mt19937_64 rng(41);
  for (Variant variant : {Variant::System01, Variant::System02})
  {
    const ModelParameters p = fixture::RandomParameters(rng, variant);
    const int N = 12;
    const GeneratorMatrix gen = AssembleGenerator(p, N);
    const EnergyGram gram = AssembleGram(p, N);
    double worst = 0.0;
    for (int trial = 0; trial < 500; trial++)
    {
      const ComplexStateVector U = RandomComplexState(N, p.length, rng, N);
      const double re = gram.Inner(gen.Apply(U), U).real();
      const double rate = DissipationRate(p, U);
      worst = std::max(worst, std::abs(re - rate) / std::max(1.0, gram.NormSquared(U)));
      CHECK(rate <= 0.0);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("dissipation examples")
{
  ModelParameters p = fixture::Defaults(Variant::System02, {0.5, 1.0, 1.0});
  p.gamma1 = 2.0;
  StateVector U(6, p.length);
  U.Block(Field::U)(0) = 1.0;
  CHECK(DissipationRate(p, U) == doctest::Approx(-2.0).epsilon(1e-15));

  StateVector theta(6, p.length);
  theta.Block(Field::Theta)(2) = 1.0;
  // K mu3 |theta|^2
  CHECK(DissipationRate(p, theta) == doctest::Approx(-9.0).epsilon(1e-15));
}

TEST_CASE("undamped uncoupled generator is skew in the energy metric")
{
  ModelParameters p = fixture::Defaults(Variant::System02);
  p.gamma1 = p.gamma2 = p.gamma3 = 0.0;
  p.delta = 0.0;
  const int N = 10;
  const GeneratorMatrix gen = AssembleGenerator(p, N);
  const EnergyGram gram = AssembleGram(p, N);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; trial++)
  {
    StateVector U = RandomState(N, p.length, rng, N);
    U.Block(Field::Theta).setZero();
    CHECK(std::abs(gram.Inner(gen.Apply(U), U)) < 1e-11 * gram.NormSquared(U));
  }
  const Eigen::MatrixXd Bt = MetricGenerator(gen, gram);
  const Eigen::MatrixXd sym = 0.5 * (Bt + Bt.transpose());
  // Only the heat block survives in the symmetric part.
  CHECK(sym.topLeftCorner(8 * N, 8 * N).cwiseAbs().maxCoeff() < 1e-11 * Bt.cwiseAbs().maxCoeff());
}

TEST_CASE("metric generator has a negative semidefinite symmetric part")
{
  std::mt19937_64 rng(47);
  for (Variant variant : {Variant::System01, Variant::System02})
  {
    const ModelParameters p = fixture::RandomParameters(rng, variant);
    const int N = 16;
    const GeneratorMatrix gen = AssembleGenerator(p, N);
    const EnergyGram gram = AssembleGram(p, N);
    const Eigen::MatrixXd Bt = MetricGenerator(gen, gram);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Bt + Bt.transpose()),
                                                      Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().maxCoeff() < 1e-10 * Bt.norm());
  }
}

TEST_CASE("image of a pure temperature mode")
{
  const ModelParameters p = fixture::Defaults(Variant::System02);
  StateVector theta(3, p.length);
  theta.Block(Field::Theta)(1) = 1.0;
  const StateVector image = AssembleGenerator(p, 3).Apply(theta);
  StateVector expected(3, p.length);
  expected.Block(Field::V)(1) = 4.0;      // (delta / rho2) mu2
  expected.Block(Field::Theta)(1) = -4.0;  // -(K / rho5) mu2
  CHECK((image.Data() - expected.Data()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("stationary solve agrees with the reduced elliptic problem")
{
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 4; trial++)
  {
    const ModelParameters p = fixture::RandomParameters(rng, Variant::System02);
    const int N = 6;
    const StateVector F = RandomState(N, p.length, rng, N);
    const StateVector U = StationarySolve(p, N, F);
    const Eigen::VectorXd reference = oracle::StationarySystem02(p, N, F.Data());
    CHECK((U.Data() - reference).norm() < 1e-9 * reference.norm());
  }
}

TEST_CASE("stationary solve examples and errors")
{
  const ModelParameters p = fixture::Defaults(Variant::System02);
  StateVector F(4, p.length);
  CHECK(StationarySolve(p, 4, F).Data().isZero(0.0));

  // A pure heat source: K mu1 theta = rho5 f and every velocity vanishes.
  F.Block(Field::Theta)(0) = 3.0;
  const StateVector U = StationarySolve(p, 4, F);
  CHECK(U.Block(Field::Theta)(0) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(U.Block(Field::Theta).tail(3).norm() < 1e-13);
  for (Field f : {Field::U, Field::V, Field::S, Field::W})
  {
    CHECK(U.Block(f).norm() < 1e-13);
  }

  CHECK_THROWS_AS(StationarySolve(p, 5, F), std::invalid_argument);
  ModelParameters bad = p;
  bad.kappa1 = -1.0;
  CHECK_THROWS_AS(AssembleGenerator(bad, 4), InvalidParameter);
  CHECK_THROWS_AS(AssembleGram(p, 0), std::invalid_argument);
}
