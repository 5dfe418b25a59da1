#pragma once

#include <Eigen/Dense>

namespace plasmon {

/// exp(A) by scaling and squaring with a [13/13] Pade approximant
/// (Higham 2005 thetas). Lower-degree approximants are used when the 1-norm
/// is small enough.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

}  // namespace plasmon
