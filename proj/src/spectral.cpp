// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace semibeam
{

namespace
{

void CheckModesAndLength(int modes, double length)
{
  if (modes < 1)
  {
    throw std::invalid_argument("mode count must be >= 1, got " + std::to_string(modes));
  }
  if (!(length > 0.0) || !std::isfinite(length))
  {
    throw std::invalid_argument("domain length must be positive and finite");
  }
}

}  // namespace

double Eigenvalue(int n, double length)
{
  CheckModesAndLength(n, length);
  const double k = n * std::numbers::pi / length;
  return k * k;
}

Eigen::VectorXd FractionalPowerDiag(int modes, double length, double sigma)
{
  CheckModesAndLength(modes, length);
  if (!std::isfinite(sigma))
  {
    throw std::invalid_argument("fractional exponent must be finite");
  }
  Eigen::VectorXd d(modes);
  for (int n = 1; n <= modes; n++)
  {
    d(n - 1) = (sigma == 0.0) ? 1.0 : std::pow(Eigenvalue(n, length), sigma);
  }
  return d;
}

Eigen::MatrixXd DerivativeMatrix(int modes, double length)
{
  CheckModesAndLength(modes, length);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(modes, modes);
  for (int m = 1; m <= modes; m++)
  {
    // Stepping by two from m + 1 visits exactly the n > m with m + n odd.
    for (int n = m + 1; n <= modes; n += 2)
    {
      const double entry = 4.0 * m * n / (length * (double(m) * m - double(n) * n));
      D(m - 1, n - 1) = entry;
      D(n - 1, m - 1) = -entry;
    }
  }
  return D;
}

template <typename Scalar>
BasicSpectralField<Scalar>::BasicSpectralField(double length, Vector coefficients)
  : length_(length), coeffs_(std::move(coefficients))
{
  CheckModesAndLength(static_cast<int>(coeffs_.size()), length_);
  if (!coeffs_.allFinite())
  {
    throw std::invalid_argument("spectral coefficients must be finite");
  }
}

template <typename Scalar>
BasicSpectralField<Scalar> BasicSpectralField<Scalar>::Zero(int modes, double length)
{
  CheckModesAndLength(modes, length);
  return BasicSpectralField(length, Vector::Zero(modes));
}

template <typename Scalar>
double BasicSpectralField<Scalar>::PowerNorm(double sigma) const
{
  const Eigen::VectorXd d = FractionalPowerDiag(Modes(), length_, sigma);
  return (d.array() * coeffs_.array().abs()).matrix().norm();
}

template <typename Scalar>
std::vector<Scalar> Synthesize(const BasicSpectralField<Scalar> &field,
                               std::span<const double> points)
{
  const double l = field.Length();
  const double scale = std::sqrt(2.0 / l);
  std::vector<Scalar> values;
  values.reserve(points.size());
  for (double x : points)
  {
    if (!(x >= 0.0 && x <= l))
    {
      throw std::invalid_argument("synthesis point " + std::to_string(x) +
                                  " lies outside [0, " + std::to_string(l) + "]");
    }
    Scalar sum(0);
    // Endpoints are exact zeros; sin(n pi) in floating point is not.
    if (x > 0.0 && x < l)
    {
      for (int n = 1; n <= field.Modes(); n++)
      {
        sum += field[n - 1] * std::sin(n * std::numbers::pi * x / l);
      }
    }
    values.push_back(scale * sum);
  }
  return values;
}

template <typename Scalar>
double InterpolationRatio(const BasicSpectralField<Scalar> &field, double alpha, double beta,
                          double gamma)
{
  if (!(alpha < beta && beta < gamma))
  {
    throw std::invalid_argument("interpolation exponents must satisfy alpha < beta < gamma");
  }
  if (field.Norm() == 0.0)
  {
    throw std::domain_error("interpolation ratio is undefined for the zero field");
  }
  const double theta_low = (gamma - beta) / (gamma - alpha);
  const double theta_high = (beta - alpha) / (gamma - alpha);
  // Work in logs so that large exponent spreads on fine grids do not overflow.
  const double log_mid = std::log(field.PowerNorm(beta));
  const double log_bound =
      theta_low * std::log(field.PowerNorm(alpha)) + theta_high * std::log(field.PowerNorm(gamma));
  return std::exp(log_mid - log_bound);
}

template class BasicSpectralField<double>;
template class BasicSpectralField<std::complex<double>>;
template std::vector<double> Synthesize(const SpectralField &, std::span<const double>);
template std::vector<std::complex<double>> Synthesize(const ComplexSpectralField &,
                                                      std::span<const double>);
template double InterpolationRatio(const SpectralField &, double, double, double);
template double InterpolationRatio(const ComplexSpectralField &, double, double, double);

}  // namespace semibeam
