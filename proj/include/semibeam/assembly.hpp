// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_ASSEMBLY_HPP
#define SEMIBEAM_ASSEMBLY_HPP

#include <complex>
#include <stdexcept>
#include <Eigen/Dense>
#include "semibeam/model.hpp"
#include "semibeam/state.hpp"

namespace semibeam
{

// Raised when a dense factorization that must succeed for valid parameters does not. It
// signals an assembly defect (or invalid input that slipped past validation), not a property
// of the continuous problem.
class NumericalFailure : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Galerkin compression of the semigroup generator onto N sine modes per field. Every block
// except the first-derivative couplings is diagonal.
struct GeneratorMatrix
{
  Variant variant;
  int modes;
  ModelParameters params;
  BlockMap blocks;
  Eigen::MatrixXd entries;

  int Size() const { return blocks.Size(); }

  StateVector Apply(const StateVector &state) const;
  ComplexStateVector Apply(const ComplexStateVector &state) const;
};

// Gram matrix of the energy inner product restricted to the truncation: ||U||^2 = U^H G U.
class EnergyGram
{
public:
  EnergyGram(Variant variant, int modes, double length, Eigen::MatrixXd entries);

  Variant GetVariant() const { return variant_; }
  int Modes() const { return modes_; }
  double Length() const { return length_; }
  const Eigen::MatrixXd &Entries() const { return entries_; }

  // Lower-triangular Cholesky factor L with G = L L^T.
  const Eigen::MatrixXd &Lower() const { return lower_; }

  // <a, b>_G = b^H G a (linear in the first slot).
  std::complex<double> Inner(const ComplexStateVector &a, const ComplexStateVector &b) const;
  double Inner(const StateVector &a, const StateVector &b) const;

  double NormSquared(const StateVector &state) const;
  double NormSquared(const ComplexStateVector &state) const;
  double Norm(const StateVector &state) const { return std::sqrt(NormSquared(state)); }
  double Norm(const ComplexStateVector &state) const { return std::sqrt(NormSquared(state)); }

private:
  Variant variant_;
  int modes_;
  double length_;
  Eigen::MatrixXd entries_;
  Eigen::MatrixXd lower_;
};

GeneratorMatrix AssembleGenerator(const ModelParameters &params, int modes);
EnergyGram AssembleGram(const ModelParameters &params, int modes);

// The generator expressed in energy-orthonormal coordinates, L^T B L^-T. Its symmetric part
// is negative semidefinite and its spectral norm equals the energy operator norm.
Eigen::MatrixXd MetricGenerator(const GeneratorMatrix &gen, const EnergyGram &gram);

// Closed-form Re <B U, U>: minus the sum of the damping channels and the heat dissipation.
double DissipationRate(const ModelParameters &params, const StateVector &state);
double DissipationRate(const ModelParameters &params, const ComplexStateVector &state);

// Solves -B U = F on the full 9N real system. Throws NumericalFailure on a singular matrix.
StateVector StationarySolve(const ModelParameters &params, int modes, const StateVector &F);
StateVector StationarySolve(const GeneratorMatrix &gen, const StateVector &F);

}  // namespace semibeam

#endif  // SEMIBEAM_ASSEMBLY_HPP
