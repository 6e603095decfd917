#pragma once

#include <vector>

#include "deft/matrix.hpp"

namespace deft::linalg {

struct SvdResult {
  RealMatrix u;           // m x p, orthonormal columns
  std::vector<double> s;  // p singular values, non-increasing, non-negative
  RealMatrix v;           // n x p, orthonormal columns
};

/// Economy SVD (p = min(m,n)) via Householder bidiagonalization and
/// implicit-shift Golub-Kahan iteration. Deterministic sign convention:
/// in each column of U the entry of largest absolute value (first such
/// index on ties) is non-negative, with V adjusted to match.
SvdResult svd(const RealMatrix& a);

}  // namespace deft::linalg
