#pragma once

#include "deft/matrix.hpp"

namespace deft::linalg {

struct QrReal {
  RealMatrix q;  // m x q', orthonormal columns, q' = min(m, q)
  RealMatrix r;  // q' x q, upper triangular, non-negative diagonal
};

struct QrComplex {
  ComplexMatrix q;  // m x k, orthonormal columns under the complex inner product
  ComplexMatrix r;  // k x k, upper triangular, real non-negative diagonal
};

/// Economy Householder QR. Zero pivot columns get R(j,j) = 0 and a
/// deterministically completed orthonormal column in Q.
QrReal qr_real(const RealMatrix& a);

/// Complex Householder QR, requires cols <= rows. Diagonal of R is made
/// real non-negative by a phase post-pass.
QrComplex qr_complex(const ComplexMatrix& a);

}  // namespace deft::linalg
