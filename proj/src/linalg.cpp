// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "semibeam/linalg.hpp"

#include <limits>
#include <stdexcept>

namespace semibeam::linalg
{

Eigen::VectorXd SingularValues(const Eigen::MatrixXcd &M)
{
  if (M.size() == 0)
  {
    return Eigen::VectorXd();
  }
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  if (svd.info() != Eigen::Success)
  {
    throw std::runtime_error("singular value decomposition did not converge");
  }
  return svd.singularValues();
}

double ConditionNumber(const Eigen::MatrixXcd &M)
{
  const Eigen::VectorXd s = SingularValues(M);
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0)
  {
    return std::numeric_limits<double>::infinity();
  }
  return s(0) / smallest;
}

}  // namespace semibeam::linalg
