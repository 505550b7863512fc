// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_MODEL_HPP
#define SEMIBEAM_MODEL_HPP

#include <array>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semibeam
{

// Heat coupling of the double-wall Timoshenko system.
//   System01: rho5 theta_t + K A theta + beta psi_t = 0, energy weight rho5 delta / beta on
//             ||A^(1/2) theta||^2.
//   System02: rho5 theta_t + K A theta + delta A psi_t = 0, energy weight rho5 on ||theta||^2.
enum class Variant
{
  System01,
  System02
};

std::string_view ToString(Variant variant);
Variant VariantFromString(std::string_view name);

class InvalidParameter : public std::invalid_argument
{
public:
  InvalidParameter(std::string name, const std::string &what)
    : std::invalid_argument(what), name_(std::move(name))
  {
  }
  const std::string &Name() const { return name_; }

private:
  std::string name_;
};

struct ModelParameters
{
  Variant variant = Variant::System02;
  double length = std::numbers::pi;

  // Inertia of phi, psi, y, z and heat capacity of theta.
  double rho1 = 1.0, rho2 = 1.0, rho3 = 1.0, rho4 = 1.0, rho5 = 1.0;
  double kappa1 = 1.0, kappa2 = 1.0;  // shear moduli
  double b1 = 1.0, b2 = 1.0;          // bending moduli
  double vdw = 1.0;                   // van der Waals interaction coefficient
  double gamma1 = 1.0, gamma2 = 1.0, gamma3 = 1.0;
  double delta = 1.0;
  double betaThermal = 1.0;  // heat/rotation-speed coupling, System01 only
  double K = 1.0;            // conductivity

  // Fractional damping exponents on phi_t, y_t, z_t.
  std::array<double, 3> exponents = {1.0, 1.0, 1.0};

  // Throws InvalidParameter naming the first violated constraint. Zero damping gains are
  // accepted (conservative diagnostics).
  void Validate() const;

  // True when every damping gain is strictly positive, i.e. the setting the stability results
  // are stated for.
  bool FullyDamped() const { return gamma1 > 0.0 && gamma2 > 0.0 && gamma3 > 0.0; }
};

}  // namespace semibeam

#endif  // SEMIBEAM_MODEL_HPP
