// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_TESTS_FIXTURES_HPP
#define SEMIBEAM_TESTS_FIXTURES_HPP

#include <array>
#include <cmath>
#include <random>
#include "semibeam/model.hpp"

namespace fixture
{

// Positive coefficients drawn log-uniformly in [1/4, 4], gains in [1/4, 4], exponents in [0, 1].
inline semibeam::ModelParameters RandomParameters(std::mt19937_64 &rng, semibeam::Variant variant)
{
  std::uniform_real_distribution<double> logScale(-1.3862943611198906, 1.3862943611198906);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] { return std::exp(logScale(rng)); };
  semibeam::ModelParameters p;
  p.variant = variant;
  p.length = 0.5 + 3.0 * unit(rng);
  for (double *c : {&p.rho1, &p.rho2, &p.rho3, &p.rho4, &p.rho5, &p.kappa1, &p.kappa2, &p.b1,
                    &p.b2, &p.vdw, &p.gamma1, &p.gamma2, &p.gamma3, &p.delta, &p.betaThermal,
                    &p.K})
  {
    *c = draw();
  }
  p.exponents = {unit(rng), unit(rng), unit(rng)};
  return p;
}

inline semibeam::ModelParameters Defaults(semibeam::Variant variant,
                                          std::array<double, 3> exponents = {1.0, 1.0, 1.0})
{
  semibeam::ModelParameters p;
  p.variant = variant;
  p.exponents = exponents;
  return p;
}

}  // namespace fixture

#endif  // SEMIBEAM_TESTS_FIXTURES_HPP
