#pragma once

// Empirical spectrum of a bounded sequence: correlation coefficients
// (1/N) sum eta(n) e(-theta n), zero-padded FFT scans, peak extraction and
// containment in a theoretical spectrum.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ergolab/dynsys.hpp"
#include "ergolab/numbers.hpp"

namespace ergolab {

/// (1/N) sum_{n=1}^N eta(n) e(-theta n) with eta[n-1] = eta(n), pairwise summed.
std::complex<double> correlation_coefficient(std::span<const std::complex<double>> eta, double theta);
/// Same with phases n*theta reduced exactly.
std::complex<double> correlation_coefficient(std::span<const std::complex<double>> eta, const ExactScalar& theta);

/// min(|x - y|, 1 - |x - y|) on T.
double circle_distance(double x, double y);

struct SpectrumScan {
  std::size_t N = 0;
  std::size_t fft_size = 0;  // N' = oversample * next_pow2(N)
  std::vector<double> magnitudes;  // |coefficient at j/N'|
  std::vector<std::complex<double>> series;

  double theta(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(fft_size); }
};

/// std::invalid_argument for N < 16 or an oversample that is not a power of 2.
SpectrumScan spectrum_scan(std::span<const std::complex<double>> eta, std::size_t oversample = 4);

struct Peak {
  double theta = 0.0;
  double magnitude = 0.0;
  bool refined = false;
};

struct PeakReport {
  std::vector<Peak> peaks;
};

/// Without refinement: local maxima of the scan at or above tau. With
/// refinement: repeatedly take the largest bin, refine its frequency by
/// golden-section search on |coefficient|, record it, and subtract the fitted
/// exponential before looking again, so leakage sidelobes of a strong peak are
/// not reported as peaks of their own.
PeakReport peak_detect(const SpectrumScan& scan, double tau, bool refine = true);

struct ContainmentReport {
  bool pass = true;
  std::vector<Peak> violations;
};

ContainmentReport containment_check(const PeakReport& peaks, std::span<const double> spectrum, double tol);
ContainmentReport containment_check(const PeakReport& peaks, std::span<const Frequency> spectrum, double tol);

}  // namespace ergolab
