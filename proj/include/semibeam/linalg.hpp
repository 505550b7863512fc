// Copyright semibeam contributors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEMIBEAM_LINALG_HPP
#define SEMIBEAM_LINALG_HPP

#include <Eigen/Dense>

namespace semibeam::linalg
{

// Singular values of a dense complex matrix in descending order (divide and conquer, no
// singular vectors).
Eigen::VectorXd SingularValues(const Eigen::MatrixXcd &M);

// sigma_max / sigma_min; +inf for an exactly singular matrix.
double ConditionNumber(const Eigen::MatrixXcd &M);

}  // namespace semibeam::linalg

#endif  // SEMIBEAM_LINALG_HPP
