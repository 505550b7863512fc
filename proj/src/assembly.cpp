// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/assembly.hpp"

#include <cmath>
#include <string>
#include "semibeam/spectral.hpp"

namespace semibeam
{

namespace
{

void RequireModes(int modes)
{
  if (modes < 1)
  {
    throw std::invalid_argument("mode count must be >= 1, got " + std::to_string(modes));
  }
}

// Writes an N x N block into the 9N x 9N matrix at (row field, column field).
template <typename Derived>
void AddBlock(Eigen::MatrixXd &M, const BlockMap &map, Field row, Field col,
              const Eigen::MatrixBase<Derived> &block)
{
  M.block(map.Offset(row), map.Offset(col), map.modes, map.modes) += block;
}

template <typename Scalar>
double DissipationRateImpl(const ModelParameters &p, const BasicStateVector<Scalar> &state)
{
  const int N = state.Modes();
  const double l = state.Length();
  if (l != p.length)
  {
    throw std::invalid_argument("state length does not match the model length");
  }
  // gamma_i ||A^(e_i / 2) x||^2 = gamma_i sum mu_n^e_i |x_n|^2.
  auto channel = [&](double gain, double exponent, Field f)
  {
    const Eigen::VectorXd weight = FractionalPowerDiag(N, l, exponent);
    return gain * (weight.array() * state.Block(f).array().abs2()).sum();
  };
  double rate = channel(p.gamma1, p.exponents[0], Field::U) +
                channel(p.gamma2, p.exponents[1], Field::S) +
                channel(p.gamma3, p.exponents[2], Field::W);
  if (p.variant == Variant::System01)
  {
    rate += (p.delta * p.K / p.betaThermal) * (FractionalPowerDiag(N, l, 2.0).array() *
                                               state.Block(Field::Theta).array().abs2())
                                                  .sum();
  }
  else
  {
    rate += p.K * (FractionalPowerDiag(N, l, 1.0).array() *
                   state.Block(Field::Theta).array().abs2())
                      .sum();
  }
  return -rate;
}

}  // namespace

StateVector GeneratorMatrix::Apply(const StateVector &state) const
{
  if (state.Modes() != modes)
  {
    throw std::invalid_argument("state dimension mismatch in generator application");
  }
  return StateVector(modes, state.Length(), entries * state.Data());
}

ComplexStateVector GeneratorMatrix::Apply(const ComplexStateVector &state) const
{
  if (state.Modes() != modes)
  {
    throw std::invalid_argument("state dimension mismatch in generator application");
  }
  return ComplexStateVector(modes, state.Length(), entries * state.Data());
}

EnergyGram::EnergyGram(Variant variant, int modes, double length, Eigen::MatrixXd entries)
  : variant_(variant), modes_(modes), length_(length), entries_(std::move(entries))
{
  Eigen::LLT<Eigen::MatrixXd> llt(entries_);
  if (llt.info() != Eigen::Success)
  {
    throw NumericalFailure("energy Gram matrix is not positive definite; check that all "
                           "stiffness, inertia and coupling coefficients are positive");
  }
  lower_ = llt.matrixL();
}

std::complex<double> EnergyGram::Inner(const ComplexStateVector &a,
                                       const ComplexStateVector &b) const
{
  return b.Data().dot(entries_ * a.Data());
}

double EnergyGram::Inner(const StateVector &a, const StateVector &b) const
{
  return b.Data().dot(entries_ * a.Data());
}

double EnergyGram::NormSquared(const StateVector &state) const
{
  // ||L^T U||^2 stays nonnegative under rounding, unlike U^T G U.
  return (lower_.transpose() * state.Data()).squaredNorm();
}

double EnergyGram::NormSquared(const ComplexStateVector &state) const
{
  return (lower_.transpose() * state.Data()).squaredNorm();
}

GeneratorMatrix AssembleGenerator(const ModelParameters &p, int modes)
{
  p.Validate();
  RequireModes(modes);
  const int N = modes;
  const double l = p.length;
  const BlockMap map{N};
  const Eigen::MatrixXd Id = Eigen::MatrixXd::Identity(N, N);
  const Eigen::MatrixXd Lambda = FractionalPowerDiag(N, l, 1.0).asDiagonal();
  const Eigen::MatrixXd D = DerivativeMatrix(N, l);
  auto power = [&](double e) -> Eigen::MatrixXd
  { return FractionalPowerDiag(N, l, e).asDiagonal(); };

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(map.Size(), map.Size());

  // Kinematic rows: phi' = u, psi' = v, y' = s, z' = w.
  AddBlock(B, map, Field::Varphi, Field::U, Id);
  AddBlock(B, map, Field::Psi, Field::V, Id);
  AddBlock(B, map, Field::Y, Field::S, Id);
  AddBlock(B, map, Field::Z, Field::W, Id);

  // u' = -(k1/r1) A phi - (k1/r1) psi_x + (j/r1)(y - phi) - (g1/r1) A^e1 u
  AddBlock(B, map, Field::U, Field::Varphi, -(p.kappa1 / p.rho1) * Lambda - (p.vdw / p.rho1) * Id);
  AddBlock(B, map, Field::U, Field::Psi, -(p.kappa1 / p.rho1) * D);
  AddBlock(B, map, Field::U, Field::Y, (p.vdw / p.rho1) * Id);
  AddBlock(B, map, Field::U, Field::U, -(p.gamma1 / p.rho1) * power(p.exponents[0]));

  // v' = -(b1/r2) A psi + (k1/r2)(phi_x - psi) + (delta/r2) A theta
  AddBlock(B, map, Field::V, Field::Psi, -(p.b1 / p.rho2) * Lambda - (p.kappa1 / p.rho2) * Id);
  AddBlock(B, map, Field::V, Field::Varphi, (p.kappa1 / p.rho2) * D);
  AddBlock(B, map, Field::V, Field::Theta, (p.delta / p.rho2) * Lambda);

  // s' = -(k2/r3) A y - (k2/r3) z_x - (j/r3)(y - phi) - (g2/r3) A^e2 s
  AddBlock(B, map, Field::S, Field::Y, -(p.kappa2 / p.rho3) * Lambda - (p.vdw / p.rho3) * Id);
  AddBlock(B, map, Field::S, Field::Z, -(p.kappa2 / p.rho3) * D);
  AddBlock(B, map, Field::S, Field::Varphi, (p.vdw / p.rho3) * Id);
  AddBlock(B, map, Field::S, Field::S, -(p.gamma2 / p.rho3) * power(p.exponents[1]));

  // w' = -(b2/r4) A z + (k2/r4)(y_x - z) - (g3/r4) A^e3 w
  AddBlock(B, map, Field::W, Field::Z, -(p.b2 / p.rho4) * Lambda - (p.kappa2 / p.rho4) * Id);
  AddBlock(B, map, Field::W, Field::Y, (p.kappa2 / p.rho4) * D);
  AddBlock(B, map, Field::W, Field::W, -(p.gamma3 / p.rho4) * power(p.exponents[2]));

  // theta' = -(K/r5) A theta - (beta/r5) v      (System01)
  // theta' = -(K/r5) A theta - (delta/r5) A v   (System02)
  AddBlock(B, map, Field::Theta, Field::Theta, -(p.K / p.rho5) * Lambda);
  if (p.variant == Variant::System01)
  {
    AddBlock(B, map, Field::Theta, Field::V, -(p.betaThermal / p.rho5) * Id);
  }
  else
  {
    AddBlock(B, map, Field::Theta, Field::V, -(p.delta / p.rho5) * Lambda);
  }

  return GeneratorMatrix{p.variant, N, p, map, std::move(B)};
}

EnergyGram AssembleGram(const ModelParameters &p, int modes)
{
  p.Validate();
  RequireModes(modes);
  const int N = modes;
  const double l = p.length;
  const BlockMap map{N};
  const Eigen::MatrixXd Id = Eigen::MatrixXd::Identity(N, N);
  const Eigen::MatrixXd Lambda = FractionalPowerDiag(N, l, 1.0).asDiagonal();
  const Eigen::MatrixXd D = DerivativeMatrix(N, l);

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(map.Size(), map.Size());

  // Kinetic part. rho3 weighs y_t = s and rho4 weighs z_t = w.
  AddBlock(G, map, Field::U, Field::U, p.rho1 * Id);
  AddBlock(G, map, Field::V, Field::V, p.rho2 * Id);
  AddBlock(G, map, Field::S, Field::S, p.rho3 * Id);
  AddBlock(G, map, Field::W, Field::W, p.rho4 * Id);

  // b1 ||A^(1/2) psi||^2 + k1 ||phi_x - psi||^2, with <phi_x, psi> = psi^T D phi.
  AddBlock(G, map, Field::Varphi, Field::Varphi, p.kappa1 * Lambda);
  AddBlock(G, map, Field::Psi, Field::Psi, p.b1 * Lambda + p.kappa1 * Id);
  AddBlock(G, map, Field::Psi, Field::Varphi, -p.kappa1 * D);
  AddBlock(G, map, Field::Varphi, Field::Psi, -p.kappa1 * D.transpose());

  // b2 ||A^(1/2) z||^2 + k2 ||y_x - z||^2
  AddBlock(G, map, Field::Y, Field::Y, p.kappa2 * Lambda);
  AddBlock(G, map, Field::Z, Field::Z, p.b2 * Lambda + p.kappa2 * Id);
  AddBlock(G, map, Field::Z, Field::Y, -p.kappa2 * D);
  AddBlock(G, map, Field::Y, Field::Z, -p.kappa2 * D.transpose());

  // j ||y - phi||^2
  AddBlock(G, map, Field::Varphi, Field::Varphi, p.vdw * Id);
  AddBlock(G, map, Field::Y, Field::Y, p.vdw * Id);
  AddBlock(G, map, Field::Varphi, Field::Y, -p.vdw * Id);
  AddBlock(G, map, Field::Y, Field::Varphi, -p.vdw * Id);

  if (p.variant == Variant::System01)
  {
    AddBlock(G, map, Field::Theta, Field::Theta, (p.rho5 * p.delta / p.betaThermal) * Lambda);
  }
  else
  {
    AddBlock(G, map, Field::Theta, Field::Theta, p.rho5 * Id);
  }

  return EnergyGram(p.variant, N, l, std::move(G));
}

Eigen::MatrixXd MetricGenerator(const GeneratorMatrix &gen, const EnergyGram &gram)
{
  if (gen.modes != gram.Modes())
  {
    throw std::invalid_argument("generator and Gram matrix have different mode counts");
  }
  const auto L = gram.Lower().triangularView<Eigen::Lower>();
  const Eigen::MatrixXd left = gram.Lower().transpose() * gen.entries;
  // (L^T B) L^-T = (L^-1 (L^T B)^T)^T
  return L.solve(left.transpose()).transpose();
}

double DissipationRate(const ModelParameters &params, const StateVector &state)
{
  return DissipationRateImpl(params, state);
}

double DissipationRate(const ModelParameters &params, const ComplexStateVector &state)
{
  return DissipationRateImpl(params, state);
}

StateVector StationarySolve(const ModelParameters &params, int modes, const StateVector &F)
{
  return StationarySolve(AssembleGenerator(params, modes), F);
}

StateVector StationarySolve(const GeneratorMatrix &gen, const StateVector &F)
{
  if (F.Modes() != gen.modes)
  {
    throw std::invalid_argument("right-hand side dimension does not match the generator");
  }
  const Eigen::MatrixXd minusB = -gen.entries;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(minusB);
  if (!(lu.rcond() > 1e-14))
  {
    throw NumericalFailure("generator is numerically singular (rcond " +
                           std::to_string(lu.rcond()) + "); this indicates an assembly defect");
  }
  return StateVector(gen.modes, F.Length(), lu.solve(F.Data()));
}

}  // namespace semibeam
