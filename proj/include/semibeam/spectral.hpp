// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_SPECTRAL_HPP
#define SEMIBEAM_SPECTRAL_HPP

#include <complex>
#include <span>
#include <vector>
#include <Eigen/Dense>

namespace semibeam
{

// Spectral representation of A = -d^2/dx^2 on (0, l) with homogeneous Dirichlet data. All
// fields are expanded in the orthonormal sine basis e_n(x) = sqrt(2/l) sin(n pi x / l),
// n = 1..N, in which every power A^s is diagonal with entries mu_n^s, mu_n = (n pi / l)^2.

// Dirichlet eigenvalue mu_n = (n pi / l)^2. Throws std::invalid_argument for n < 1 or l <= 0.
double Eigenvalue(int n, double length);

// Diagonal of A^sigma truncated to the first N modes.
Eigen::VectorXd FractionalPowerDiag(int modes, double length, double sigma);

// Galerkin matrix of d/dx in the sine basis: D(m, n) = <e_n', e_m>. For m + n odd,
// D(m, n) = 4 m n / (l (m^2 - n^2)); otherwise zero. Exactly antisymmetric.
Eigen::MatrixXd DerivativeMatrix(int modes, double length);

template <typename Scalar>
class BasicSpectralField
{
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicSpectralField(double length, Vector coefficients);
  static BasicSpectralField Zero(int modes, double length);

  int Modes() const { return static_cast<int>(coeffs_.size()); }
  double Length() const { return length_; }
  const Vector &Coefficients() const { return coeffs_; }
  Scalar operator[](int i) const { return coeffs_(i); }

  // L^2(0, l) norm; equals the Euclidean norm of the coefficients.
  double Norm() const { return coeffs_.norm(); }

  // ||A^sigma f||.
  double PowerNorm(double sigma) const;

private:
  double length_;
  Vector coeffs_;
};

using SpectralField = BasicSpectralField<double>;
using ComplexSpectralField = BasicSpectralField<std::complex<double>>;

// Point values of the field; every point must lie in [0, l].
template <typename Scalar>
std::vector<Scalar> Synthesize(const BasicSpectralField<Scalar> &field,
                               std::span<const double> points);

// ||A^beta f|| / (||A^alpha f||^((gamma-beta)/(gamma-alpha)) ||A^gamma f||^((beta-alpha)/(gamma-alpha))).
// Requires alpha < beta < gamma and a nonzero field. Hoelder on the spectral sums bounds the
// result by one.
template <typename Scalar>
double InterpolationRatio(const BasicSpectralField<Scalar> &field, double alpha, double beta,
                          double gamma);

}  // namespace semibeam

#endif  // SEMIBEAM_SPECTRAL_HPP
