// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/model.hpp"

#include <cmath>

namespace semibeam
{

std::string_view ToString(Variant variant)
{
  return variant == Variant::System01 ? "System01" : "System02";
}

Variant VariantFromString(std::string_view name)
{
  if (name == "System01")
  {
    return Variant::System01;
  }
  if (name == "System02")
  {
    return Variant::System02;
  }
  throw InvalidParameter("variant", "unknown variant '" + std::string(name) +
                                        "' (expected System01 or System02)");
}

namespace
{

void RequirePositive(const char *name, double value)
{
  if (!(value > 0.0) || !std::isfinite(value))
  {
    throw InvalidParameter(name, std::string(name) + " must be positive and finite, got " +
                                     std::to_string(value));
  }
}

void RequireNonNegative(const char *name, double value)
{
  if (!(value >= 0.0) || !std::isfinite(value))
  {
    throw InvalidParameter(name, std::string(name) + " must be nonnegative and finite, got " +
                                     std::to_string(value));
  }
}

}  // namespace

void ModelParameters::Validate() const
{
  RequirePositive("length", length);
  RequirePositive("rho1", rho1);
  RequirePositive("rho2", rho2);
  RequirePositive("rho3", rho3);
  RequirePositive("rho4", rho4);
  RequirePositive("rho5", rho5);
  RequirePositive("kappa1", kappa1);
  RequirePositive("kappa2", kappa2);
  RequirePositive("b1", b1);
  RequirePositive("b2", b2);
  RequirePositive("vdw", vdw);
  RequireNonNegative("gamma1", gamma1);
  RequireNonNegative("gamma2", gamma2);
  RequireNonNegative("gamma3", gamma3);
  RequirePositive("K", K);
  if (variant == Variant::System01)
  {
    // The theta weight rho5 delta / beta must be finite and positive.
    RequirePositive("delta", delta);
    RequirePositive("betaThermal", betaThermal);
  }
  else
  {
    // delta = 0 decouples the heat equation, which is a legitimate diagnostic for System02.
    RequireNonNegative("delta", delta);
  }
  static constexpr const char *names[] = {"exponents[0]", "exponents[1]", "exponents[2]"};
  for (int i = 0; i < 3; i++)
  {
    if (!(exponents[i] >= 0.0 && exponents[i] <= 1.0))
    {
      throw InvalidParameter(names[i], std::string(names[i]) + " must lie in [0, 1], got " +
                                           std::to_string(exponents[i]));
    }
  }
}

}  // namespace semibeam
