// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/state.hpp"

#include <algorithm>

namespace semibeam
{

std::string_view ToString(Field field)
{
  static constexpr std::string_view names[kFieldCount] = {"varphi", "u", "psi", "v", "y",
                                                         "s",      "z", "w",   "theta"};
  return names[static_cast<int>(field)];
}

ComplexStateVector ToComplex(const StateVector &state)
{
  return ComplexStateVector(state.Modes(), state.Length(),
                            state.Data().cast<std::complex<double>>());
}

StateVector RandomState(int modes, double length, std::mt19937_64 &rng, int supportModes)
{
  StateVector state(modes, length);
  std::normal_distribution<double> normal;
  for (Field f : kAllFields)
  {
    for (int n = 0; n < supportModes; n++)
    {
      const double value = normal(rng);
      if (n < modes)
      {
        state.Block(f)(n) = value;
      }
    }
  }
  return state;
}

ComplexStateVector RandomComplexState(int modes, double length, std::mt19937_64 &rng,
                                      int supportModes)
{
  ComplexStateVector state(modes, length);
  std::normal_distribution<double> normal;
  for (Field f : kAllFields)
  {
    for (int n = 0; n < supportModes; n++)
    {
      const double re = normal(rng);
      const double im = normal(rng);
      if (n < modes)
      {
        state.Block(f)(n) = {re, im};
      }
    }
  }
  return state;
}

}  // namespace semibeam
