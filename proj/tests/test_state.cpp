// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numbers>
#include <random>
#include <stdexcept>
#include "semibeam/model.hpp"
#include "semibeam/state.hpp"

using namespace semibeam;

TEST_CASE("block layout")
{
  const BlockMap map{7};
  CHECK(map.Size() == 63);
  CHECK(map.Offset(Field::Varphi) == 0);
  CHECK(map.Offset(Field::Psi) == 14);
  CHECK(map.Offset(Field::Theta) == 56);
  CHECK(ToString(Field::Varphi) == "varphi");
  CHECK(ToString(Field::W) == "w");

  StateVector state(3, 2.0);
  state.Block(Field::Z)(1) = 4.0;
  CHECK(state.Data()(6 * 3 + 1) == 4.0);
  CHECK(state.FieldOf(Field::Z).Coefficients()(1) == 4.0);
  CHECK(state.Data().norm() == 4.0);
}

TEST_CASE("state construction errors")
{
  CHECK_THROWS_AS(StateVector(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(StateVector(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(StateVector(2, 1.0, Eigen::VectorXd::Zero(17)), std::invalid_argument);

  StateVector a(2, 1.0);
  CHECK_THROWS_AS(a.RequireCompatible(StateVector(3, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(a.RequireCompatible(StateVector(2, 1.5)), std::invalid_argument);
  CHECK_NOTHROW(a.RequireCompatible(ComplexStateVector(2, 1.0)));
  CHECK_THROWS_AS(a.SetField(Field::U, SpectralField::Zero(3, 1.0)), std::invalid_argument);
}

TEST_CASE("random states share low modes across truncations")
{
  std::mt19937_64 small(42), large(42);
  const StateVector a = RandomState(8, std::numbers::pi, small, 8);
  const StateVector b = RandomState(20, std::numbers::pi, large, 8);
  for (Field f : kAllFields)
  {
    CHECK(a.Block(f) == b.Block(f).head(8));
    CHECK(b.Block(f).tail(12).isZero(0.0));
  }

  std::mt19937_64 c1(7), c2(7);
  const ComplexStateVector z1 = RandomComplexState(4, 1.0, c1, 4);
  const ComplexStateVector z2 = RandomComplexState(16, 1.0, c2, 4);
  CHECK(z1.Block(Field::Theta) == z2.Block(Field::Theta).head(4));
  CHECK(z1.Data().imag().norm() > 0.0);
}

TEST_CASE("parameter validation names the offending parameter")
{
  ModelParameters p;
  CHECK_NOTHROW(p.Validate());
  CHECK(p.FullyDamped());

  auto failing = [](ModelParameters q) -> std::string
  {
    try
    {
      q.Validate();
    }
    catch (const InvalidParameter &e)
    {
      return e.Name();
    }
    return "";
  };

  ModelParameters q = p;
  q.gamma1 = -1.0;
  CHECK(failing(q) == "gamma1");
  q = p;
  q.rho3 = 0.0;
  CHECK(failing(q) == "rho3");
  q = p;
  q.exponents[2] = 1.2;
  CHECK(failing(q) == "exponents[2]");
  q = p;
  q.variant = Variant::System01;
  q.betaThermal = 0.0;
  CHECK(failing(q) == "betaThermal");
  q = p;
  q.delta = 0.0;
  CHECK(failing(q).empty());

  q = p;
  q.gamma2 = 0.0;
  CHECK_NOTHROW(q.Validate());
  CHECK_FALSE(q.FullyDamped());

  CHECK(VariantFromString("System01") == Variant::System01);
  CHECK(ToString(Variant::System02) == "System02");
  CHECK_THROWS(VariantFromString("System03"));
}
