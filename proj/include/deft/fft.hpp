#pragma once

#include <complex>
#include <vector>

#include "deft/matrix.hpp"

namespace deft::linalg {

using CVec = std::vector<std::complex<double>>;

/// Unnormalized forward DFT of each row of G: out(i,j) = sum_l G(i,l) * exp(-2*pi*i*l*j/n).
/// Power-of-two lengths take the radix-2 path, all other lengths Bluestein's
/// chirp-z reduction; both are independent of naive_dft.
ComplexMatrix fft_rows(const RealMatrix& g);

/// Direct O(n^2) DFT, the reference oracle for fft_rows.
CVec naive_dft(const CVec& x);

/// Unnormalized forward DFT of one complex vector (dispatching implementation path).
void fft_inplace(CVec& x);

}  // namespace deft::linalg
