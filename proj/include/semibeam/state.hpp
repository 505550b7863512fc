// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_STATE_HPP
#define SEMIBEAM_STATE_HPP

#include <algorithm>
#include <array>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <Eigen/Dense>
#include "semibeam/spectral.hpp"

namespace semibeam
{

// Fields of U = (phi, u, psi, v, y, s, z, w, theta), in storage order. u, v, s, w are the
// velocities of phi, psi, y, z.
enum class Field : int
{
  Varphi = 0,
  U,
  Psi,
  V,
  Y,
  S,
  Z,
  W,
  Theta
};

inline constexpr int kFieldCount = 9;
inline constexpr std::array<Field, kFieldCount> kAllFields = {
    Field::Varphi, Field::U, Field::Psi, Field::V, Field::Y,
    Field::S,      Field::Z, Field::W,   Field::Theta};

std::string_view ToString(Field field);

// Block layout of the flattened 9N coordinate vector: block b occupies [b N, b N + N).
struct BlockMap
{
  int modes = 0;

  int Offset(Field f) const { return static_cast<int>(f) * modes; }
  int Size() const { return kFieldCount * modes; }
};

template <typename Scalar>
class BasicStateVector
{
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicStateVector(int modes, double length);
  BasicStateVector(int modes, double length, Vector data);

  static BasicStateVector Zero(int modes, double length) { return {modes, length}; }

  int Modes() const { return map_.modes; }
  double Length() const { return length_; }
  const BlockMap &Map() const { return map_; }

  const Vector &Data() const { return data_; }
  Vector &Data() { return data_; }

  auto Block(Field f) { return data_.segment(map_.Offset(f), map_.modes); }
  auto Block(Field f) const { return data_.segment(map_.Offset(f), map_.modes); }

  BasicSpectralField<Scalar> FieldOf(Field f) const
  {
    return BasicSpectralField<Scalar>(length_, Block(f));
  }
  void SetField(Field f, const BasicSpectralField<Scalar> &field);

  // Throws std::invalid_argument unless other has the same mode count and length.
  template <typename Other>
  void RequireCompatible(const BasicStateVector<Other> &other) const;

private:
  BlockMap map_;
  double length_;
  Vector data_;
};

using StateVector = BasicStateVector<double>;
using ComplexStateVector = BasicStateVector<std::complex<double>>;

ComplexStateVector ToComplex(const StateVector &state);

// Random state with independent standard normal coefficients on modes 1..min(N, supportModes)
// of every field (modes above are zero). Draws are made field by field and mode by mode up to
// supportModes, so the same seed yields the same low-mode content for every N >= supportModes.
StateVector RandomState(int modes, double length, std::mt19937_64 &rng, int supportModes);
ComplexStateVector RandomComplexState(int modes, double length, std::mt19937_64 &rng,
                                      int supportModes);

// ------------------------------------------------------------------------------------------

template <typename Scalar>
BasicStateVector<Scalar>::BasicStateVector(int modes, double length)
  : BasicStateVector(modes, length, Vector::Zero(kFieldCount * std::max(modes, 0)))
{
}

template <typename Scalar>
BasicStateVector<Scalar>::BasicStateVector(int modes, double length, Vector data)
  : map_{modes}, length_(length), data_(std::move(data))
{
  if (modes < 1 || !(length > 0.0))
  {
    throw std::invalid_argument("state vectors need modes >= 1 and a positive length");
  }
  if (data_.size() != map_.Size())
  {
    throw std::invalid_argument("state data has " + std::to_string(data_.size()) +
                                " entries, expected " + std::to_string(map_.Size()));
  }
}

template <typename Scalar>
void BasicStateVector<Scalar>::SetField(Field f, const BasicSpectralField<Scalar> &field)
{
  if (field.Modes() != Modes() || field.Length() != length_)
  {
    throw std::invalid_argument("field does not match the state's mode count or length");
  }
  Block(f) = field.Coefficients();
}

template <typename Scalar>
template <typename Other>
void BasicStateVector<Scalar>::RequireCompatible(const BasicStateVector<Other> &other) const
{
  if (other.Modes() != Modes() || other.Length() != length_)
  {
    throw std::invalid_argument("state dimension mismatch: " + std::to_string(Modes()) +
                                " vs " + std::to_string(other.Modes()) + " modes");
  }
}

}  // namespace semibeam

#endif  // SEMIBEAM_STATE_HPP
