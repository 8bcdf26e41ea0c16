#pragma once

#include <complex>
#include <span>

namespace suprec {

/// In-place iterative radix-2 DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
/// `inverse` flips the sign of the exponent and does not rescale.
/// The length must be a power of two (throws DomainError otherwise).
void fft_inplace(std::span<std::complex<double>> data, bool inverse = false);

}  // namespace suprec
