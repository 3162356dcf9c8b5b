#pragma once

// Thin FFTW3 wrapper. Both directions are unnormalized:
// forward X_j = sum_n x_n e(-nj/L), backward x_n = sum_j X_j e(nj/L).

#include <complex>
#include <vector>

namespace ergolab {

std::vector<std::complex<double>> fft_forward(std::vector<std::complex<double>> data);
std::vector<std::complex<double>> fft_backward(std::vector<std::complex<double>> data);

std::size_t next_pow2(std::size_t n);

}  // namespace ergolab
